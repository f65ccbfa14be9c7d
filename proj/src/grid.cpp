#include "oit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "interp.hpp"
#include "oit/error.hpp"
#include "spectral.hpp"

namespace oit {

double wrap_coordinate(double v) noexcept {
    if (v >= -kPi && v < kPi) return v;
    double r = std::fmod(v + kPi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    double out = r - kPi;
    // fmod/shift roundoff can land exactly on +pi.
    if (out >= kPi || out < -kPi) out = -kPi;
    return out;
}

double torus_distance(Point2 a, Point2 b) noexcept {
    return std::hypot(wrap_coordinate(a.x - b.x), wrap_coordinate(a.y - b.y));
}

PeriodicGrid::PeriodicGrid(std::size_t n_x, std::size_t n_y)
    : n_x_(n_x), n_y_(n_y), h_x_(kTwoPi / static_cast<double>(n_x)),
      h_y_(kTwoPi / static_cast<double>(n_y)) {
    if (n_x < 4 || n_y < 4)
        throw InvalidInput("grid needs at least 4 nodes per axis, got " + std::to_string(n_x) +
                           "x" + std::to_string(n_y));
}

// --- ScalarField -----------------------------------------------------------

ScalarField::ScalarField(PeriodicGrid grid, double fill)
    : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(PeriodicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw InvalidInput("field has " + std::to_string(values_.size()) + " values, grid needs " +
                           std::to_string(grid_.size()));
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::mean() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0) /
           static_cast<double>(values_.size());
}

double ScalarField::integral() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0) * grid_.cell_volume();
}

bool ScalarField::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

// --- VectorField -----------------------------------------------------------

VectorField::VectorField(ScalarField x, ScalarField y) : u_x(std::move(x)), u_y(std::move(y)) {
    if (!(u_x.grid() == u_y.grid())) throw InvalidInput("vector field components differ in grid");
}

double VectorField::max_norm() const {
    double best = 0.0;
    const auto ux = u_x.values();
    const auto uy = u_y.values();
    for (std::size_t k = 0; k < ux.size(); ++k) best = std::max(best, std::hypot(ux[k], uy[k]));
    return best;
}

// --- DiffeoMap -------------------------------------------------------------

DiffeoMap::DiffeoMap(VectorField disp, std::optional<VectorField> inv_disp)
    : disp_(std::move(disp)), inv_disp_(std::move(inv_disp)) {
    if (!disp_.all_finite()) throw InvalidInput("map displacement is not finite");
    if (inv_disp_) {
        if (!(inv_disp_->grid() == disp_.grid()))
            throw InvalidInput("inverse displacement is on a different grid");
        if (!inv_disp_->all_finite()) throw InvalidInput("inverse displacement is not finite");
    }
}

DiffeoMap DiffeoMap::identity(const PeriodicGrid& grid, bool with_inverse) {
    if (with_inverse) return DiffeoMap(VectorField(grid), VectorField(grid));
    return DiffeoMap(VectorField(grid));
}

namespace {

Point2 displace(const VectorField& d, Point2 p) {
    return wrap_point({p.x + interp_scalar(d.u_x, p), p.y + interp_scalar(d.u_y, p)});
}

// Index-space coordinates of node (i, j) moved by its own displacement.
struct IndexPos {
    double u, v;
};

IndexPos displaced_index(const VectorField& d, std::size_t k, std::size_t i, std::size_t j) {
    const auto& g = d.grid();
    return {static_cast<double>(i) + d.u_x.values()[k] / g.h_x(),
            static_cast<double>(j) + d.u_y.values()[k] / g.h_y()};
}

}  // namespace

Point2 DiffeoMap::apply(Point2 p) const { return displace(disp_, p); }

Point2 DiffeoMap::apply_inverse(Point2 p) const {
    if (!inv_disp_) throw InvalidInput("map carries no inverse");
    return displace(*inv_disp_, p);
}

double DiffeoMap::round_trip_error() const {
    if (!inv_disp_) throw InvalidInput("map carries no inverse");
    const auto& g = grid();
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_x(); ++i) {
        for (std::size_t j = 0; j < g.n_y(); ++j) {
            const Point2 x = g.node(i, j);
            worst = std::max(worst, torus_distance(apply_inverse(apply(x)), x));
        }
    }
    return worst;
}

// --- interpolation ---------------------------------------------------------

double interp_index(const ScalarField& field, double u, double v) noexcept {
    const auto& g = field.grid();
    return detail::BilinearStencil(u, v, g.n_x(), g.n_y())(field.values().data());
}

double interp_scalar(const ScalarField& field, Point2 p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw InvalidInput("interpolation point has non-finite coordinate");
    const auto& g = field.grid();
    const Point2 w = wrap_point(p);
    return interp_index(field, detail::index_coordinate(w.x, g.h_x()),
                        detail::index_coordinate(w.y, g.h_y()));
}

std::vector<double> interp_scalar(const ScalarField& field, std::span<const Point2> points) {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(interp_scalar(field, p));
    return out;
}

// --- spectral derivatives --------------------------------------------------

namespace {

enum class Axis { X, Y };

// Multiply the half-spectrum by i*k along `axis`, Nyquist entries set to 0.
void apply_derivative(const detail::SpectralTransform& t, std::span<std::complex<double>> spec,
                      Axis axis) {
    const std::size_t cols = t.spectrum_cols();
    for (std::size_t r = 0; r < t.grid().n_x(); ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            auto& z = spec[r * cols + c];
            const bool nyq = axis == Axis::X ? t.nyquist_x(r) : t.nyquist_y(c);
            if (nyq) {
                z = 0.0;
                continue;
            }
            const auto k = static_cast<double>(axis == Axis::X ? t.wavenumber_x(r)
                                                               : t.wavenumber_y(c));
            z = std::complex<double>(-k * z.imag(), k * z.real());
        }
    }
}

void require_finite(const ScalarField& f, const char* what) {
    if (!f.all_finite()) throw InvalidInput(std::string(what) + ": input field is not finite");
}

ScalarField spectral_derivative(const ScalarField& f, Axis axis) {
    require_finite(f, "spectral derivative");
    detail::SpectralTransform t(f.grid());
    std::vector<std::complex<double>> spec(t.spectrum_size());
    t.forward(f.values(), spec);
    apply_derivative(t, spec, axis);
    ScalarField out(f.grid());
    t.inverse(spec, out.values());
    return out;
}

}  // namespace

ScalarField derivative_x_spectral(const ScalarField& f) { return spectral_derivative(f, Axis::X); }
ScalarField derivative_y_spectral(const ScalarField& f) { return spectral_derivative(f, Axis::Y); }

namespace detail {

VectorField gradient_with(SpectralTransform& t, const ScalarField& f) {
    require_finite(f, "gradient_spectral");
    std::vector<std::complex<double>> spec(t.spectrum_size());
    std::vector<std::complex<double>> work(t.spectrum_size());
    t.forward(f.values(), spec);

    VectorField out(f.grid());
    work = spec;
    apply_derivative(t, work, Axis::X);
    t.inverse(work, out.u_x.values());
    work = spec;
    apply_derivative(t, work, Axis::Y);
    t.inverse(work, out.u_y.values());
    return out;
}

}  // namespace detail

VectorField gradient_spectral(const ScalarField& f) {
    detail::SpectralTransform t(f.grid());
    return detail::gradient_with(t, f);
}

// --- Jacobian and composition ----------------------------------------------

ScalarField jacobian_det(const DiffeoMap& map) {
    const auto& g = map.grid();
    const auto& dx = map.disp().u_x;
    const auto& dy = map.disp().u_y;
    const double inv2hx = 1.0 / (2.0 * g.h_x());
    const double inv2hy = 1.0 / (2.0 * g.h_y());
    ScalarField det(g);
    for (std::size_t i = 0; i < g.n_x(); ++i) {
        const std::size_t ip = i + 1 == g.n_x() ? 0 : i + 1;
        const std::size_t im = i == 0 ? g.n_x() - 1 : i - 1;
        for (std::size_t j = 0; j < g.n_y(); ++j) {
            const std::size_t jp = j + 1 == g.n_y() ? 0 : j + 1;
            const std::size_t jm = j == 0 ? g.n_y() - 1 : j - 1;
            const double a = 1.0 + (dx(ip, j) - dx(im, j)) * inv2hx;
            const double b = (dx(i, jp) - dx(i, jm)) * inv2hy;
            const double c = (dy(ip, j) - dy(im, j)) * inv2hx;
            const double d = 1.0 + (dy(i, jp) - dy(i, jm)) * inv2hy;
            det(i, j) = a * d - b * c;
        }
    }
    return det;
}

namespace {

// d(x) = inner(x) + outer(x + inner(x)) at every node.
VectorField compose_displacements(const VectorField& outer, const VectorField& inner) {
    const auto& g = inner.grid();
    VectorField out(g);
    for (std::size_t i = 0; i < g.n_x(); ++i) {
        for (std::size_t j = 0; j < g.n_y(); ++j) {
            const std::size_t k = g.index(i, j);
            const auto [u, v] = displaced_index(inner, k, i, j);
            const detail::BilinearStencil s(u, v, g.n_x(), g.n_y());
            out.u_x.values()[k] = inner.u_x.values()[k] + s(outer.u_x.values().data());
            out.u_y.values()[k] = inner.u_y.values()[k] + s(outer.u_y.values().data());
        }
    }
    return out;
}

}  // namespace

DiffeoMap compose(const DiffeoMap& outer, const DiffeoMap& inner) {
    if (!(outer.grid() == inner.grid())) throw InvalidInput("compose: maps live on different grids");
    VectorField disp = compose_displacements(outer.disp(), inner.disp());
    if (outer.has_inverse() && inner.has_inverse())
        return DiffeoMap(std::move(disp), compose_displacements(*inner.inv_disp(), *outer.inv_disp()));
    return DiffeoMap(std::move(disp));
}

ScalarField pull_back(const ScalarField& f, const VectorField& inner_disp) {
    if (!(f.grid() == inner_disp.grid())) throw InvalidInput("pull_back: grid mismatch");
    const auto& g = f.grid();
    ScalarField out(g);
    for (std::size_t i = 0; i < g.n_x(); ++i) {
        for (std::size_t j = 0; j < g.n_y(); ++j) {
            const std::size_t k = g.index(i, j);
            const auto [u, v] = displaced_index(inner_disp, k, i, j);
            out.values()[k] = interp_index(f, u, v);
        }
    }
    return out;
}

}  // namespace oit
