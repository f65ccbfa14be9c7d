#include "oit/transport.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "oit/error.hpp"
#include "oit/field_io.hpp"
#include "oit/poisson.hpp"

namespace oit {
namespace {

VectorField scaled(const VectorField& v, double s) {
    VectorField out(v.grid());
    std::transform(v.u_x.values().begin(), v.u_x.values().end(), out.u_x.values().begin(),
                   [s](double a) { return s * a; });
    std::transform(v.u_y.values().begin(), v.u_y.values().end(), out.u_y.values().begin(),
                   [s](double a) { return s * a; });
    return out;
}

}  // namespace

TransportResult build_transport_map(const Density& target, const TransportConfig& cfg) {
    if (cfg.steps < 1) throw InvalidInput("transport needs at least one time step");
    const PeriodicGrid& grid = target.grid();
    if (cfg.grid != 0 && (grid.n_x() != cfg.grid || grid.n_y() != cfg.grid))
        throw InvalidInput("target density is not on the configured grid");

    const GeodesicPath path(Density::uniform(grid), target);
    const double eps = 1.0 / static_cast<double>(cfg.steps);
    const double h = grid.h_max();

    PoissonWorkspace ws(grid);
    DiffeoMap phi = DiffeoMap::identity(grid, true);
    StepDiagnostics diag;
    bool cfl_warning = false;

    for (std::size_t k = 0; k < cfg.steps; ++k) {
        const double t = static_cast<double>(k) * eps;
        const ScalarField source = pull_back(path.log_rate(t), phi.disp());
        const ScalarField f = ws.solve(source);
        const VectorField v = ws.gradient(f);
        if (!v.all_finite())
            throw NumericalBlowup("non-finite velocity field at step " + std::to_string(k));

        const double cfl = eps * v.max_norm() / h;
        cfl_warning = cfl_warning || cfl > cfg.cfl_warn_threshold;

        // psi_k = id - eps v_k, inverse approximated by id + eps v_k.
        const DiffeoMap psi(scaled(v, -eps), scaled(v, eps));
        phi = compose(phi, psi);

        const double min_det = jacobian_det(phi).min();
        if (!std::isfinite(min_det))
            throw NumericalBlowup("non-finite Jacobian at step " + std::to_string(k));
        if (min_det <= 0.0) throw OrientationLoss(k, min_det);

        if (cfg.record_diagnostics) {
            diag.cfl.push_back(cfl);
            diag.poisson_mean.push_back(ws.last_subtracted_mean());
            diag.min_jacobian.push_back(min_det);
        }
    }

    const double residual = pushforward_residual(phi, target);
    return TransportResult{std::move(phi),
                           cfg.steps,
                           path.theta(),
                           residual,
                           !(residual <= cfg.residual_tolerance),
                           cfl_warning,
                           std::move(diag),
                           {}};
}

double pushforward_residual(const DiffeoMap& map, const Density& target) {
    if (!(map.grid() == target.grid())) throw InvalidInput("pushforward_residual: grid mismatch");
    const ScalarField det = jacobian_det(map);
    const ScalarField pulled = pull_back(target.field(), map.disp());
    const auto dv = det.values();
    const auto pv = pulled.values();
    double sum = 0.0;
    for (std::size_t k = 0; k < dv.size(); ++k)
        sum += std::abs(dv[k] * pv[k] / kUniformDensity - 1.0);
    return sum / static_cast<double>(dv.size());
}

// --- OITM files ------------------------------------------------------------

void write_map(std::ostream& os, const TransportResult& result) {
    const DiffeoMap& map = result.map;
    if (!map.has_inverse()) throw InvalidInput("map file requires an inverse displacement");
    const auto& g = map.grid();
    ByteWriter w(os);
    w.bytes(kMapMagic);
    w.u32(static_cast<std::uint32_t>(g.n_x()));
    w.u32(static_cast<std::uint32_t>(g.n_y()));
    w.u8(4);
    w.f64s(map.disp().u_x.values());
    w.f64s(map.disp().u_y.values());
    w.f64s(map.inv_disp()->u_x.values());
    w.f64s(map.inv_disp()->u_y.values());

    w.u32(static_cast<std::uint32_t>(result.steps));
    w.f64(result.theta);
    w.f64(result.residual);
    w.u8(result.residual_warning ? 1 : 0);
    w.u32(static_cast<std::uint32_t>(result.density_id.size()));
    w.bytes(result.density_id);
    const auto& d = result.diagnostics;
    if (d.poisson_mean.size() != d.cfl.size() || d.min_jacobian.size() != d.cfl.size())
        throw InvalidInput("diagnostic arrays differ in length");
    w.u32(static_cast<std::uint32_t>(d.cfl.size()));
    w.f64s(d.cfl);
    w.f64s(d.poisson_mean);
    w.f64s(d.min_jacobian);
}

TransportResult read_map(std::istream& is) {
    ByteReader r(is, "OITM");
    r.expect_magic(kMapMagic);
    const std::uint32_t nx = r.u32();
    const std::uint32_t ny = r.u32();
    if (r.u8() != 4) throw FormatError("OITM: expected 4 displacement components");
    if (nx < 4 || ny < 4 || nx > (1u << 14) || ny > (1u << 14))
        throw FormatError("OITM: implausible grid dimensions");
    const PeriodicGrid g(nx, ny);
    ScalarField fx(g, r.f64s(g.size()));
    ScalarField fy(g, r.f64s(g.size()));
    ScalarField ix(g, r.f64s(g.size()));
    ScalarField iy(g, r.f64s(g.size()));
    VectorField fwd(std::move(fx), std::move(fy));
    VectorField inv(std::move(ix), std::move(iy));

    TransportResult out{DiffeoMap(std::move(fwd), std::move(inv)), 0, 0.0, 0.0, false, false, {}, {}};
    out.steps = r.u32();
    out.theta = r.f64();
    out.residual = r.f64();
    out.residual_warning = r.u8() != 0;
    const std::uint32_t id_len = r.u32();
    if (id_len > 4096) throw FormatError("OITM: density identifier too long");
    out.density_id = r.bytes(id_len);
    const std::uint32_t n_diag = r.u32();
    if (n_diag > out.steps) throw FormatError("OITM: more diagnostics than steps");
    out.diagnostics.cfl = r.f64s(n_diag);
    out.diagnostics.poisson_mean = r.f64s(n_diag);
    out.diagnostics.min_jacobian = r.f64s(n_diag);
    r.expect_end();
    return out;
}

void save_map_file(const std::filesystem::path& path, const TransportResult& result) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidInput("cannot open " + path.string() + " for writing");
    write_map(os, result);
    if (!os) throw InvalidInput("failed writing " + path.string());
}

TransportResult load_map_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InvalidInput("cannot open map file " + path.string());
    return read_map(is);
}

}  // namespace oit
