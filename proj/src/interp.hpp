#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>

namespace oit::detail {

// Positions within this many cells of a node are treated as the node itself,
// so physical-coordinate queries at nodes reproduce nodal values exactly.
inline constexpr double kNodeSnap = 1e-10;

// Index-space coordinate of a wrapped physical coordinate in [-pi, pi).
[[nodiscard]] inline double index_coordinate(double wrapped, double h) noexcept {
    const double u = (wrapped + std::numbers::pi) / h;
    const double r = std::nearbyint(u);
    return std::abs(u - r) <= kNodeSnap ? r : u;
}

// Bilinear stencil at index-space position (u, v) on an n_x x n_y periodic
// lattice. Lerp form so constants and integer positions are reproduced
// bit-for-bit.
struct BilinearStencil {
    std::size_t i00, i10, i01, i11;
    double fx, fy;

    BilinearStencil(double u, double v, std::size_t n_x, std::size_t n_y) noexcept {
        const double fu = std::floor(u);
        const double fv = std::floor(v);
        fx = u - fu;
        fy = v - fv;
        const auto nx = static_cast<long long>(n_x);
        const auto ny = static_cast<long long>(n_y);
        long long i = static_cast<long long>(fu) % nx;
        long long j = static_cast<long long>(fv) % ny;
        if (i < 0) i += nx;
        if (j < 0) j += ny;
        const long long i1 = i + 1 == nx ? 0 : i + 1;
        const long long j1 = j + 1 == ny ? 0 : j + 1;
        i00 = static_cast<std::size_t>(i * ny + j);
        i10 = static_cast<std::size_t>(i1 * ny + j);
        i01 = static_cast<std::size_t>(i * ny + j1);
        i11 = static_cast<std::size_t>(i1 * ny + j1);
    }

    [[nodiscard]] double operator()(const double* values) const noexcept {
        const double a = values[i00] + fx * (values[i10] - values[i00]);
        const double b = values[i01] + fx * (values[i11] - values[i01]);
        return a + fy * (b - a);
    }
};

}  // namespace oit::detail
