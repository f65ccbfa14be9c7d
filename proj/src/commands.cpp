#include "oit/commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <chrono>
#include <fstream>
#include <ostream>

#include "oit/densities.hpp"
#include "oit/error.hpp"
#include "oit/export.hpp"
#include "oit/sampler.hpp"

namespace oit {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool to_stream(const std::string& path) { return path.empty() || path == "-"; }

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Open cfg.out (binary) or fall back to `fallback`, then call write(os).
template <class Write>
void emit(const std::string& path, std::ostream& fallback, Write&& write) {
    if (to_stream(path)) {
        write(fallback);
        fallback.flush();
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidInput("cannot open " + path + " for writing");
    write(os);
    if (!os) throw InvalidInput("failed writing " + path);
}

std::string density_id(const RunConfig& cfg) {
    std::string id = parse_density_spec(cfg.density).to_string();
    if (cfg.ratio) id += fmt::format(";ratio={}", *cfg.ratio);
    return id;
}

TransportResult load_map(const RunConfig& cfg) {
    if (cfg.map.empty()) throw InvalidInput("--map is required");
    return load_map_file(cfg.map);
}

}  // namespace

TransportResult cmd_build(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const auto t0 = Clock::now();
    const Density target =
        make_density(parse_density_spec(cfg.density), PeriodicGrid(cfg.grid), cfg.ratio);
    TransportConfig tc;
    tc.steps = cfg.steps;
    tc.grid = cfg.grid;
    TransportResult result = build_transport_map(target, tc);
    result.density_id = density_id(cfg);
    const double elapsed = seconds_since(t0);

    const std::string path = cfg.out.empty() ? "map.oitm" : cfg.out;
    save_map_file(path, result);

    double min_det = 1.0;
    for (double d : result.diagnostics.min_jacobian) min_det = std::min(min_det, d);
    fmt::print(log, "density: {}\n", result.density_id);
    fmt::print(log, "grid: {}x{}\nsteps: {}\n", cfg.grid, cfg.grid, cfg.steps);
    fmt::print(log, "theta: {:.10f}\n", result.theta);
    fmt::print(log, "residual: {:.6g}\n", result.residual);
    fmt::print(log, "min_jacobian: {:.6g}\n", min_det);
    fmt::print(log, "round_trip_error: {:.6g}\n", result.map.round_trip_error());
    fmt::print(log, "wall_time_s: {:.3f}\n", elapsed);
    fmt::print(log, "map: {}\n", path);
    if (result.cfl_warning)
        fmt::print(log, "warning: Euler step exceeded the CFL threshold; consider more steps\n");
    if (result.residual_warning)
        fmt::print(log, "warning: pushforward residual {:.4g} above tolerance {}; consider a finer grid "
                        "or more steps\n",
                   result.residual, TransportConfig{}.residual_tolerance);
    return result;
}

void cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    cfg.validate();
    const TransportResult map = load_map(cfg);
    const auto t0 = Clock::now();
    const SampleBatch batch = sample_target(map.map, cfg.n, cfg.seed, cfg.threads);
    const double elapsed = seconds_since(t0);
    emit(cfg.out, out, [&](std::ostream& os) {
        if (ends_with(cfg.out, ".oitf")) write_samples_oitf(os, batch);
        else write_samples_csv(os, batch);
    });
    fmt::print(log, "samples: {}\nsampling_time_s: {:.3f}\nthroughput_per_s: {:.4g}\n", batch.size(),
               elapsed, elapsed > 0 ? static_cast<double>(batch.size()) / elapsed : 0.0);
}

ValidationOutcome cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    cfg.validate();
    const TransportResult map = load_map(cfg);
    const PeriodicGrid& grid = map.map.grid();
    const Density target = make_density(parse_density_spec(cfg.density), grid, cfg.ratio);
    const auto t0 = Clock::now();

    const SampleBatch samples = sample_target(map.map, cfg.n, cfg.seed, cfg.threads);
    const BinnedHistogram hist = histogram(samples, cfg.bins, cfg.bins);
    const auto masses = expected_bin_mass(target, cfg.bins, cfg.bins);
    const OracleSamples oracle = rejection_sample_oracle(target, cfg.n, cfg.seed);
    const BinnedHistogram oracle_hist = histogram(oracle.batch, cfg.bins, cfg.bins);

    ValidationOutcome v;
    v.gof = chi_squared_gof(hist, masses);
    v.two_sample = two_sample_chi_squared(hist, oracle_hist);
    v.oracle_acceptance = oracle.acceptance_rate();
    v.passed = v.gof.p_value > kSignificance && v.two_sample.p_value > kSignificance;

    auto& r = v.report;
    r.add("map", cfg.map);
    r.add("map_density", map.density_id);
    r.add("density", density_id(cfg));
    r.add("grid", fmt::format("{}x{}", grid.n_x(), grid.n_y()));
    r.add("n", fmt::format("{}", cfg.n));
    r.add("seed", fmt::format("{}", cfg.seed));
    r.add("bins", fmt::format("{}x{}", cfg.bins, cfg.bins));
    r.add("significance", fmt::format("{}", kSignificance));
    r.add("gof_statistic", fmt::format("{:.6f}", v.gof.statistic));
    r.add("gof_dof", fmt::format("{}", v.gof.dof));
    r.add("gof_merged_bins", fmt::format("{}", v.gof.merged_bins));
    r.add("gof_p_value", fmt::format("{:.6g}", v.gof.p_value));
    r.add("oracle_proposals", fmt::format("{}", oracle.proposals));
    r.add("oracle_acceptance", fmt::format("{:.6f}", v.oracle_acceptance));
    r.add("oracle_expected_acceptance", fmt::format("{:.6f}", 1.0 / (kTorusArea * target.field().max())));
    r.add("two_sample_statistic", fmt::format("{:.6f}", v.two_sample.statistic));
    r.add("two_sample_dof", fmt::format("{}", v.two_sample.dof));
    r.add("two_sample_p_value", fmt::format("{:.6g}", v.two_sample.p_value));
    r.add("result", v.passed ? "pass" : "fail");

    emit(cfg.out, out, [&](std::ostream& os) { os << r.to_string(); });
    if (!cfg.bin_csv.empty()) emit(cfg.bin_csv, out, [&](std::ostream& os) { write_bin_csv(os, hist, masses); });
    fmt::print(log, "validation_time_s: {:.3f}\n", seconds_since(t0));
    return v;
}

void cmd_export(const RunConfig& cfg, ExportKind kind, bool inverse, std::ostream& out,
                std::ostream& log) {
    cfg.validate();
    switch (kind) {
        case ExportKind::Heatmap: {
            const Density d = make_density(parse_density_spec(cfg.density), PeriodicGrid(cfg.grid), cfg.ratio);
            emit(cfg.out, out, [&](std::ostream& os) { write_heatmap_pgm(os, d.field()); });
            fmt::print(log, "heatmap: {}x{} min={:.6g} max={:.6g}\n", cfg.grid, cfg.grid, d.field().min(),
                       d.field().max());
            break;
        }
        case ExportKind::Mesh: {
            const TransportResult map = load_map(cfg);
            emit(cfg.out, out, [&](std::ostream& os) { write_mesh_csv(os, map.map, cfg.stride, inverse); });
            fmt::print(log, "mesh: every {} line(s) of {}x{}\n", cfg.stride, map.map.grid().n_x(),
                       map.map.grid().n_y());
            break;
        }
        case ExportKind::Scatter: {
            const TransportResult map = load_map(cfg);
            const SampleBatch batch = sample_target(map.map, cfg.n, cfg.seed, cfg.threads);
            emit(cfg.out, out, [&](std::ostream& os) { write_samples_csv(os, batch); });
            fmt::print(log, "scatter: {} points\n", batch.size());
            break;
        }
    }
}

}  // namespace oit
