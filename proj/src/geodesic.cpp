#include "oit/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oit/error.hpp"

namespace oit {

Density::Density(ScalarField field) : field_(std::move(field)), mass_(field_.integral()) {
    if (!field_.all_finite()) throw InvalidInput("density has non-finite values");
    if (field_.min() < kDensityFloor)
        throw PositivityError("density minimum " + std::to_string(field_.min()) +
                              " is below the positivity floor");
    if (std::abs(mass_ - 1.0) > kMassTolerance)
        throw InvalidInput("density mass " + std::to_string(mass_) + " is not 1");
}

Density Density::uniform(const PeriodicGrid& grid) {
    return Density(ScalarField(grid, kUniformDensity));
}

Density normalize(const ScalarField& raw) {
    if (!raw.all_finite()) throw InvalidInput("normalize: non-finite values");
    const auto v = raw.values();
    if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }))
        throw DegenerateInput("normalize: field is identically zero");
    if (raw.min() <= 0.0) throw PositivityError("normalize: field has non-positive values");

    const double scale = 1.0 / raw.integral();
    ScalarField out(raw.grid());
    std::transform(v.begin(), v.end(), out.values().begin(),
                   [scale](double x) { return x * scale; });
    return Density(std::move(out));
}

ScalarField set_dynamic_range(const ScalarField& raw, double ratio) {
    if (!(ratio > 1.0) || !std::isfinite(ratio))
        throw InvalidInput("dynamic range ratio must be a finite number > 1");
    const double lo = raw.min();
    const double hi = raw.max();
    if (lo < 0.0) throw InvalidInput("dynamic range: field has negative values");
    if (hi == lo) throw DegenerateInput("dynamic range: field is constant");

    const double beta = (hi - ratio * lo) / (ratio - 1.0);
    ScalarField out(raw.grid());
    std::transform(raw.values().begin(), raw.values().end(), out.values().begin(),
                   [beta](double x) { return x + beta; });
    return out;
}

namespace {

ScalarField sqrt_ratio_field(const Density& mu0, const Density& mu1) {
    if (!(mu0.grid() == mu1.grid())) throw InvalidInput("geodesic endpoints on different grids");
    ScalarField r(mu0.grid());
    const auto a = mu0.field().values();
    const auto b = mu1.field().values();
    std::transform(b.begin(), b.end(), a.begin(), r.values().begin(),
                   [](double m1, double m0) { return std::sqrt(m1 / m0); });
    return r;
}

// cos(theta) = int sqrt(mu1 mu0), but acos is ill-conditioned near 1 (ulp
// noise in q becomes ~1e-8 in theta). Use the chord instead:
// |sqrt(mu1) - sqrt(mu0)|^2 = 2 - 2 cos(theta) = 4 sin^2(theta/2).
double angle_from(const ScalarField& sqrt_ratio, const Density& mu0) {
    const auto r = sqrt_ratio.values();
    const auto m0 = mu0.field().values();
    double chord2 = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) chord2 += m0[k] * (r[k] - 1.0) * (r[k] - 1.0);
    chord2 *= mu0.grid().cell_volume();
    return 2.0 * std::asin(std::min(1.0, 0.5 * std::sqrt(chord2)));
}

}  // namespace

double theta(const Density& mu0, const Density& mu1) {
    return angle_from(sqrt_ratio_field(mu0, mu1), mu0);
}

GeodesicPath::GeodesicPath(Density mu0, Density mu1)
    : mu0_(std::move(mu0)), mu1_(std::move(mu1)), theta_(0.0),
      sqrt_ratio_(sqrt_ratio_field(mu0_, mu1_)) {
    theta_ = angle_from(sqrt_ratio_, mu0_);
}

GeodesicPath::Coefficients GeodesicPath::coefficients(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidInput("geodesic time must lie in [0, 1]");
    if (theta_ < kSmallTheta) return {1.0 - t, t, -1.0, 1.0};
    const double s = std::sin(theta_);
    return {std::sin((1.0 - t) * theta_) / s, std::sin(t * theta_) / s,
            -theta_ * std::cos((1.0 - t) * theta_) / s, theta_ * std::cos(t * theta_) / s};
}

GeodesicPoint GeodesicPath::eval(double t) const {
    const Coefficients c = coefficients(t);
    const auto r = sqrt_ratio_.values();
    const auto m0 = mu0_.field().values();
    ScalarField mu(mu0_.grid());
    ScalarField mu_dot(mu0_.grid());
    auto mv = mu.values();
    auto dv = mu_dot.values();
    for (std::size_t k = 0; k < r.size(); ++k) {
        const double a = c.p + c.q * r[k];
        const double ad = c.pd + c.qd * r[k];
        mv[k] = a * a * m0[k];
        dv[k] = 2.0 * a * ad * m0[k];
    }
    // Endpoints reproduce the stored densities exactly.
    if (t == 0.0) return {mu0_, std::move(mu_dot)};
    if (t == 1.0) return {mu1_, std::move(mu_dot)};
    return {Density(std::move(mu)), std::move(mu_dot)};
}

ScalarField GeodesicPath::log_rate(double t) const {
    const Coefficients c = coefficients(t);
    const auto r = sqrt_ratio_.values();
    ScalarField out(mu0_.grid());
    auto ov = out.values();
    for (std::size_t k = 0; k < r.size(); ++k)
        ov[k] = 2.0 * (c.pd + c.qd * r[k]) / (c.p + c.q * r[k]);
    return out;
}

GeodesicPoint geodesic_eval(const GeodesicPath& path, double t) { return path.eval(t); }

}  // namespace oit
