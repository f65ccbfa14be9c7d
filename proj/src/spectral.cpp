#include "spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace oit::detail {
namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

}  // namespace

struct SpectralTransform::Plans {
    std::unique_ptr<double, FftwFree> real;
    std::unique_ptr<fftw_complex, FftwFree> spec;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    ~Plans() {
        std::scoped_lock lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

SpectralTransform::SpectralTransform(const PeriodicGrid& grid)
    : grid_(grid), cols_(grid.n_y() / 2 + 1), plans_(std::make_unique<Plans>()) {
    const auto nx = static_cast<int>(grid_.n_x());
    const auto ny = static_cast<int>(grid_.n_y());
    plans_->real.reset(static_cast<double*>(fftw_malloc(sizeof(double) * grid_.size())));
    plans_->spec.reset(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * spectrum_size())));

    std::scoped_lock lock(planner_mutex());
    plans_->fwd = fftw_plan_dft_r2c_2d(nx, ny, plans_->real.get(), plans_->spec.get(),
                                       FFTW_ESTIMATE);
    plans_->bwd = fftw_plan_dft_c2r_2d(nx, ny, plans_->spec.get(), plans_->real.get(),
                                       FFTW_ESTIMATE);
}

SpectralTransform::~SpectralTransform() = default;

long SpectralTransform::wavenumber_x(std::size_t row) const noexcept {
    const auto n = static_cast<long>(grid_.n_x());
    const auto r = static_cast<long>(row);
    return r <= n / 2 ? r : r - n;
}

long SpectralTransform::wavenumber_y(std::size_t col) const noexcept {
    return static_cast<long>(col);
}

bool SpectralTransform::nyquist_x(std::size_t row) const noexcept {
    return grid_.n_x() % 2 == 0 && row == grid_.n_x() / 2;
}

bool SpectralTransform::nyquist_y(std::size_t col) const noexcept {
    return grid_.n_y() % 2 == 0 && col == grid_.n_y() / 2;
}

void SpectralTransform::forward(std::span<const double> in, std::span<std::complex<double>> out) {
    std::copy(in.begin(), in.end(), plans_->real.get());
    fftw_execute(plans_->fwd);
    const auto* src = reinterpret_cast<const std::complex<double>*>(plans_->spec.get());
    std::copy(src, src + spectrum_size(), out.begin());
}

void SpectralTransform::inverse(std::span<std::complex<double>> in, std::span<double> out) {
    std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(plans_->spec.get()));
    fftw_execute(plans_->bwd);
    const double scale = 1.0 / static_cast<double>(grid_.size());
    const double* src = plans_->real.get();
    std::transform(src, src + grid_.size(), out.begin(), [scale](double v) { return v * scale; });
}

}  // namespace oit::detail
