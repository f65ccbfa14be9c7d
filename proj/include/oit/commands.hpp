#pragma once

// Batch commands behind the `oit` tool. Artifacts (map files, sample CSVs,
// reports) depend only on the configuration; timings go to `log`.

#include <iosfwd>

#include "oit/run_config.hpp"
#include "oit/transport.hpp"
#include "oit/validate.hpp"

namespace oit {

// Builds the transport map for cfg.density and writes it to cfg.out
// (default "map.oitm").
TransportResult cmd_build(const RunConfig& cfg, std::ostream& log);

// Draws cfg.n samples through the map in cfg.map. Writes CSV to cfg.out, or
// to `out` when cfg.out is empty or "-". A ".oitf" suffix selects the binary
// format.
void cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream& log);

struct ValidationOutcome {
    ChiSquareResult gof;
    ChiSquareResult two_sample;
    double oracle_acceptance = 0.0;
    bool passed = false;
    ValidationReport report;
};

inline constexpr double kSignificance = 0.01;

// Goodness of fit against quadrature bin masses plus a two-sample test
// against the rejection oracle; passes iff both p-values exceed 0.01.
// Report goes to cfg.out or `out`.
ValidationOutcome cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& log);

enum class ExportKind { Heatmap, Mesh, Scatter };

// Heatmap: density on cfg.grid as PGM. Mesh: warp polylines of cfg.map
// every cfg.stride lines (inverse map when `inverse`). Scatter: first cfg.n
// transported samples as CSV.
void cmd_export(const RunConfig& cfg, ExportKind kind, bool inverse, std::ostream& out,
                std::ostream& log);

}  // namespace oit
