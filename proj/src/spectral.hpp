#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

#include "oit/grid.hpp"

namespace oit::detail {

// Real-to-complex 2-D transform pair on an n_x x n_y periodic grid. The
// half-spectrum has n_x rows and n_y/2 + 1 columns. Forward is unnormalized;
// inverse divides by n_x * n_y so inverse(forward(f)) == f.
//
// Planning is serialized internally; execution on distinct objects may run
// concurrently.
class SpectralTransform {
  public:
    explicit SpectralTransform(const PeriodicGrid& grid);
    ~SpectralTransform();
    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;

    [[nodiscard]] const PeriodicGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t spectrum_cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t spectrum_size() const noexcept { return grid_.n_x() * cols_; }

    // Signed integer wavenumbers of a spectrum entry.
    [[nodiscard]] long wavenumber_x(std::size_t row) const noexcept;
    [[nodiscard]] long wavenumber_y(std::size_t col) const noexcept;
    // True for the Nyquist row/column of an even-sized axis.
    [[nodiscard]] bool nyquist_x(std::size_t row) const noexcept;
    [[nodiscard]] bool nyquist_y(std::size_t col) const noexcept;

    void forward(std::span<const double> in, std::span<std::complex<double>> out);
    // `in` is used as scratch and left unspecified.
    void inverse(std::span<std::complex<double>> in, std::span<double> out);

  private:
    struct Plans;

    PeriodicGrid grid_;
    std::size_t cols_;
    std::unique_ptr<Plans> plans_;
};

// Spectral gradient reusing an existing transform's plans.
[[nodiscard]] VectorField gradient_with(SpectralTransform& t, const ScalarField& f);

}  // namespace oit::detail
