#pragma once

// Probability densities on the torus and the closed-form Fisher-Rao geodesic
// from the uniform density to a target.

#include "oit/grid.hpp"

namespace oit {

// Value of the uniform probability density w.r.t. Lebesgue measure.
inline constexpr double kUniformDensity = 1.0 / kTorusArea;

inline constexpr double kDensityFloor = 1e-12;
inline constexpr double kMassTolerance = 1e-10;

// Strictly positive, unit-mass density sampled on a periodic grid.
class Density {
  public:
    // Wrap an already-normalized field; throws if the invariants fail.
    explicit Density(ScalarField field);

    static Density uniform(const PeriodicGrid& grid);

    [[nodiscard]] const ScalarField& field() const noexcept { return field_; }
    [[nodiscard]] const PeriodicGrid& grid() const noexcept { return field_.grid(); }
    [[nodiscard]] double mass() const noexcept { return mass_; }

  private:
    ScalarField field_;
    double mass_;
};

// Scale a positive field to unit mass.
[[nodiscard]] Density normalize(const ScalarField& raw);

// Add the constant offset that makes max/min equal `ratio`.
[[nodiscard]] ScalarField set_dynamic_range(const ScalarField& raw, double ratio);

// Fisher-Rao angle between two densities, in [0, pi/2).
[[nodiscard]] double theta(const Density& mu0, const Density& mu1);

// Below this angle the geodesic is evaluated through its first-order limit.
inline constexpr double kSmallTheta = 1e-8;

struct GeodesicPoint {
    Density mu;
    ScalarField mu_dot;
};

class GeodesicPath {
  public:
    GeodesicPath(Density mu0, Density mu1);

    [[nodiscard]] const Density& mu0() const noexcept { return mu0_; }
    [[nodiscard]] const Density& mu1() const noexcept { return mu1_; }
    [[nodiscard]] double theta() const noexcept { return theta_; }
    [[nodiscard]] const ScalarField& sqrt_ratio() const noexcept { return sqrt_ratio_; }

    // mu(t) and its time derivative.
    [[nodiscard]] GeodesicPoint eval(double t) const;

    // mu_dot(t) / mu(t) at every node, formed without dividing two fields.
    [[nodiscard]] ScalarField log_rate(double t) const;

  private:
    struct Coefficients {
        // a(t) = p + q * r,  a'(t) = pd + qd * r  with r = sqrt(mu1/mu0).
        double p, q, pd, qd;
    };
    [[nodiscard]] Coefficients coefficients(double t) const;

    Density mu0_;
    Density mu1_;
    double theta_;
    ScalarField sqrt_ratio_;
};

[[nodiscard]] GeodesicPoint geodesic_eval(const GeodesicPath& path, double t);

}  // namespace oit
