#pragma once

// Spectral Poisson solver on the flat torus.

#include <complex>
#include <memory>
#include <vector>

#include "oit/grid.hpp"

namespace oit {

namespace detail {
class SpectralTransform;
}

// Plans, inverse Laplacian symbol and scratch for one grid. Single owner:
// use one workspace per thread.
class PoissonWorkspace {
  public:
    explicit PoissonWorkspace(const PeriodicGrid& grid);
    ~PoissonWorkspace();
    PoissonWorkspace(PoissonWorkspace&&) noexcept;
    PoissonWorkspace& operator=(PoissonWorkspace&&) noexcept;

    [[nodiscard]] const PeriodicGrid& grid() const noexcept { return grid_; }

    // -1/|k|^2 on the half spectrum (row-major, n_x rows, n_y/2+1 columns);
    // exactly 0 at k = 0.
    [[nodiscard]] const std::vector<double>& inverse_symbol() const noexcept { return symbol_; }

    // Mean removed from the source by the most recent solve.
    [[nodiscard]] double last_subtracted_mean() const noexcept { return last_mean_; }

    [[nodiscard]] ScalarField solve(const ScalarField& source);
    [[nodiscard]] ScalarField laplacian(const ScalarField& f);
    [[nodiscard]] VectorField gradient(const ScalarField& f);

  private:
    PeriodicGrid grid_;
    std::unique_ptr<detail::SpectralTransform> transform_;
    std::vector<double> symbol_;
    std::vector<std::complex<double>> spectrum_;
    double last_mean_ = 0.0;
};

// Zero-mean f with spectral Laplacian(f) = s - mean(s).
[[nodiscard]] ScalarField solve_poisson(PoissonWorkspace& ws, const ScalarField& source);

[[nodiscard]] ScalarField laplacian_spectral(const ScalarField& f);

}  // namespace oit
