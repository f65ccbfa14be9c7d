#pragma once

// Periodic fields on the flat torus [-pi, pi)^2 and the discrete calculus
// used by the transport loop: bilinear interpolation, spectral gradient,
// finite-difference Jacobians and displacement-map composition.

#include <array>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace oit {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kTorusArea = kTwoPi * kTwoPi;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

// Wrap a coordinate into [-pi, pi).
[[nodiscard]] double wrap_coordinate(double v) noexcept;
[[nodiscard]] inline Point2 wrap_point(Point2 p) noexcept {
    return {wrap_coordinate(p.x), wrap_coordinate(p.y)};
}

// Geodesic distance on the flat torus.
[[nodiscard]] double torus_distance(Point2 a, Point2 b) noexcept;

class PeriodicGrid {
  public:
    PeriodicGrid(std::size_t n_x, std::size_t n_y);
    explicit PeriodicGrid(std::size_t n) : PeriodicGrid(n, n) {}

    [[nodiscard]] std::size_t n_x() const noexcept { return n_x_; }
    [[nodiscard]] std::size_t n_y() const noexcept { return n_y_; }
    [[nodiscard]] std::size_t size() const noexcept { return n_x_ * n_y_; }
    [[nodiscard]] double h_x() const noexcept { return h_x_; }
    [[nodiscard]] double h_y() const noexcept { return h_y_; }
    [[nodiscard]] double h_max() const noexcept { return h_x_ > h_y_ ? h_x_ : h_y_; }
    [[nodiscard]] double cell_volume() const noexcept { return h_x_ * h_y_; }

    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const noexcept {
        return i * n_y_ + j;
    }
    [[nodiscard]] double x(std::size_t i) const noexcept {
        return -kPi + static_cast<double>(i) * h_x_;
    }
    [[nodiscard]] double y(std::size_t j) const noexcept {
        return -kPi + static_cast<double>(j) * h_y_;
    }
    [[nodiscard]] Point2 node(std::size_t i, std::size_t j) const noexcept { return {x(i), y(j)}; }

    friend bool operator==(const PeriodicGrid& a, const PeriodicGrid& b) noexcept {
        return a.n_x_ == b.n_x_ && a.n_y_ == b.n_y_;
    }

  private:
    std::size_t n_x_;
    std::size_t n_y_;
    double h_x_;
    double h_y_;
};

// Grid-sampled periodic function; values are row-major with x the slow index.
class ScalarField {
  public:
    explicit ScalarField(PeriodicGrid grid, double fill = 0.0);
    ScalarField(PeriodicGrid grid, std::vector<double> values);

    // Sample f(x, y) at every node.
    template <class F>
    static ScalarField from_function(const PeriodicGrid& grid, F&& f) {
        ScalarField out(grid);
        for (std::size_t i = 0; i < grid.n_x(); ++i)
            for (std::size_t j = 0; j < grid.n_y(); ++j)
                out.values_[grid.index(i, j)] = f(grid.x(i), grid.y(j));
        return out;
    }

    [[nodiscard]] const PeriodicGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
        return values_[grid_.index(i, j)];
    }
    [[nodiscard]] double& operator()(std::size_t i, std::size_t j) noexcept {
        return values_[grid_.index(i, j)];
    }

    [[nodiscard]] double min() const;
    [[nodiscard]] double max() const;
    [[nodiscard]] double mean() const;
    // Periodic trapezoid (equivalently Riemann) quadrature: sum * cell volume.
    [[nodiscard]] double integral() const;
    [[nodiscard]] bool all_finite() const noexcept;

  private:
    PeriodicGrid grid_;
    std::vector<double> values_;
};

struct VectorField {
    ScalarField u_x;
    ScalarField u_y;

    explicit VectorField(const PeriodicGrid& grid) : u_x(grid), u_y(grid) {}
    VectorField(ScalarField x, ScalarField y);

    [[nodiscard]] const PeriodicGrid& grid() const noexcept { return u_x.grid(); }
    [[nodiscard]] bool all_finite() const noexcept { return u_x.all_finite() && u_y.all_finite(); }
    // Largest Euclidean norm over nodes.
    [[nodiscard]] double max_norm() const;
};

// Torus diffeomorphism stored as x -> wrap(x + disp(x)) with a periodic
// displacement, plus an optional inverse in the same representation.
class DiffeoMap {
  public:
    explicit DiffeoMap(const PeriodicGrid& grid) : disp_(grid) {}
    explicit DiffeoMap(VectorField disp, std::optional<VectorField> inv_disp = std::nullopt);

    static DiffeoMap identity(const PeriodicGrid& grid, bool with_inverse = false);

    [[nodiscard]] const PeriodicGrid& grid() const noexcept { return disp_.grid(); }
    [[nodiscard]] const VectorField& disp() const noexcept { return disp_; }
    [[nodiscard]] const std::optional<VectorField>& inv_disp() const noexcept { return inv_disp_; }
    [[nodiscard]] bool has_inverse() const noexcept { return inv_disp_.has_value(); }

    [[nodiscard]] Point2 apply(Point2 p) const;
    // Requires has_inverse().
    [[nodiscard]] Point2 apply_inverse(Point2 p) const;

    // max over nodes of torus distance between phi^-1(phi(x)) and x.
    [[nodiscard]] double round_trip_error() const;

  private:
    VectorField disp_;
    std::optional<VectorField> inv_disp_;
};

// Periodic bilinear interpolation at arbitrary (finite) points.
[[nodiscard]] std::vector<double> interp_scalar(const ScalarField& field,
                                                std::span<const Point2> points);
[[nodiscard]] double interp_scalar(const ScalarField& field, Point2 p);

// Interpolate in index space: position (u, v) means x = -pi + u*h_x,
// y = -pi + v*h_y. Integer positions return nodal values bit-for-bit.
[[nodiscard]] double interp_index(const ScalarField& field, double u, double v) noexcept;

[[nodiscard]] VectorField gradient_spectral(const ScalarField& f);

// Spectral partial derivatives with the same Nyquist convention as
// gradient_spectral.
[[nodiscard]] ScalarField derivative_x_spectral(const ScalarField& f);
[[nodiscard]] ScalarField derivative_y_spectral(const ScalarField& f);

[[nodiscard]] ScalarField jacobian_det(const DiffeoMap& map);

// Result maps x to outer(inner(x)).
[[nodiscard]] DiffeoMap compose(const DiffeoMap& outer, const DiffeoMap& inner);

// Evaluate f(inner(x)) at every node.
[[nodiscard]] ScalarField pull_back(const ScalarField& f, const VectorField& inner_disp);

}  // namespace oit
