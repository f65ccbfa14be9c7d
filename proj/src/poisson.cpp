#include "oit/poisson.hpp"

#include <algorithm>
#include <cmath>

#include "oit/error.hpp"
#include "spectral.hpp"

namespace oit {

PoissonWorkspace::PoissonWorkspace(const PeriodicGrid& grid)
    : grid_(grid), transform_(std::make_unique<detail::SpectralTransform>(grid)) {
    const std::size_t cols = transform_->spectrum_cols();
    symbol_.resize(transform_->spectrum_size());
    spectrum_.resize(transform_->spectrum_size());
    for (std::size_t r = 0; r < grid_.n_x(); ++r) {
        const auto kx = static_cast<double>(transform_->wavenumber_x(r));
        for (std::size_t c = 0; c < cols; ++c) {
            const auto ky = static_cast<double>(transform_->wavenumber_y(c));
            const double k2 = kx * kx + ky * ky;
            symbol_[r * cols + c] = k2 == 0.0 ? 0.0 : -1.0 / k2;
        }
    }
}

PoissonWorkspace::~PoissonWorkspace() = default;
PoissonWorkspace::PoissonWorkspace(PoissonWorkspace&&) noexcept = default;
PoissonWorkspace& PoissonWorkspace::operator=(PoissonWorkspace&&) noexcept = default;

ScalarField PoissonWorkspace::solve(const ScalarField& source) {
    if (!(source.grid() == grid_)) throw InvalidInput("solve_poisson: grid mismatch");
    if (!source.all_finite()) throw InvalidInput("solve_poisson: non-finite source");

    // The true mean lies in [min, max]; clamping keeps a constant source's
    // mean equal to its value so the centered source is exactly zero.
    last_mean_ = std::clamp(source.mean(), source.min(), source.max());
    ScalarField centered(grid_);
    std::transform(source.values().begin(), source.values().end(), centered.values().begin(),
                   [m = last_mean_](double v) { return v - m; });

    const auto cv = centered.values();
    if (std::all_of(cv.begin(), cv.end(), [](double v) { return v == 0.0; }))
        return ScalarField(grid_);

    transform_->forward(centered.values(), spectrum_);
    for (std::size_t k = 0; k < spectrum_.size(); ++k) spectrum_[k] *= symbol_[k];
    ScalarField f(grid_);
    transform_->inverse(spectrum_, f.values());
    return f;
}

ScalarField PoissonWorkspace::laplacian(const ScalarField& f) {
    if (!(f.grid() == grid_)) throw InvalidInput("laplacian: grid mismatch");
    transform_->forward(f.values(), spectrum_);
    const std::size_t cols = transform_->spectrum_cols();
    for (std::size_t r = 0; r < grid_.n_x(); ++r) {
        const auto kx = static_cast<double>(transform_->wavenumber_x(r));
        for (std::size_t c = 0; c < cols; ++c) {
            const auto ky = static_cast<double>(transform_->wavenumber_y(c));
            spectrum_[r * cols + c] *= -(kx * kx + ky * ky);
        }
    }
    ScalarField out(grid_);
    transform_->inverse(spectrum_, out.values());
    return out;
}

VectorField PoissonWorkspace::gradient(const ScalarField& f) {
    if (!(f.grid() == grid_)) throw InvalidInput("gradient: grid mismatch");
    return detail::gradient_with(*transform_, f);
}

ScalarField solve_poisson(PoissonWorkspace& ws, const ScalarField& source) {
    return ws.solve(source);
}

ScalarField laplacian_spectral(const ScalarField& f) {
    PoissonWorkspace ws(f.grid());
    return ws.laplacian(f);
}

}  // namespace oit
