#pragma once

// Optimal information transport: time-stepping the lifted Fisher-Rao
// geodesic into a torus diffeomorphism that carries the uniform density to a
// target density.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "oit/geodesic.hpp"
#include "oit/grid.hpp"

namespace oit {

struct TransportConfig {
    std::size_t steps = 100;
    // Grid nodes per axis; 0 accepts the target's grid.
    std::size_t grid = 0;
    // Warn when max |eps * v| exceeds this fraction of the grid spacing.
    double cfl_warn_threshold = 0.5;
    // Pushforward residual above this sets TransportResult::residual_warning.
    double residual_tolerance = 0.05;
    bool record_diagnostics = true;
};

struct StepDiagnostics {
    std::vector<double> cfl;              // max |eps * v_k| / h
    std::vector<double> poisson_mean;     // mean removed from s_k
    std::vector<double> min_jacobian;     // min det D(phi_{k+1})
};

struct TransportResult {
    DiffeoMap map;  // phi_K, inverse populated
    std::size_t steps = 0;
    double theta = 0.0;
    double residual = 0.0;
    bool residual_warning = false;
    bool cfl_warning = false;
    StepDiagnostics diagnostics;
    std::string density_id;
};

// Builds phi_K by explicit Euler steps phi_{k+1} = phi_k o (id - eps v_k),
// where v_k = grad f_k and Laplacian(f_k) = (mu_dot/mu)(t_k) o phi_k.
// Throws OrientationLoss if the Jacobian stops being positive and
// NumericalBlowup on non-finite fields.
[[nodiscard]] TransportResult build_transport_map(const Density& target,
                                                  const TransportConfig& cfg = {});

// Relative L1 error of det(D phi) * mu(phi(x)) against the uniform density.
[[nodiscard]] double pushforward_residual(const DiffeoMap& map, const Density& target);

// OITM map files: magic "OITM1\n", u32 n_x, u32 n_y, u8 4, forward x/y and
// inverse x/y displacement as row-major float64, then metadata: u32 K,
// f64 theta, f64 residual, u8 residual warning, u32 id length + id bytes,
// u32 diagnostics length followed by three float64 arrays (cfl,
// poisson_mean, min_jacobian).
inline constexpr std::string_view kMapMagic = "OITM1\n";

void save_map_file(const std::filesystem::path& path, const TransportResult& result);
[[nodiscard]] TransportResult load_map_file(const std::filesystem::path& path);

void write_map(std::ostream& os, const TransportResult& result);
[[nodiscard]] TransportResult read_map(std::istream& is);

}  // namespace oit
