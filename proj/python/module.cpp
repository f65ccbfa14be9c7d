#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>
#include <string>

#include "oit/densities.hpp"
#include "oit/error.hpp"
#include "oit/geodesic.hpp"
#include "oit/poisson.hpp"
#include "oit/sampler.hpp"
#include "oit/transport.hpp"
#include "oit/validate.hpp"

namespace py = pybind11;
using namespace oit;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Fields are (n_x, n_y) arrays indexed [i, j] <-> (x_i, y_j), x slow.
ScalarField to_field(const Array& a) {
    if (a.ndim() != 2) throw InvalidInput("field must be a 2-D array");
    const PeriodicGrid g(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    return ScalarField(g, std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const ScalarField& f) {
    Array out({f.grid().n_x(), f.grid().n_y()});
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

Array to_array(const SampleBatch& b) {
    Array out({b.size(), std::size_t{2}});
    double* p = out.mutable_data();
    for (const Point2& q : b.points) {
        *p++ = q.x;
        *p++ = q.y;
    }
    return out;
}

SampleBatch to_batch(const Array& a) {
    if (a.ndim() != 2 || a.shape(1) != 2) throw InvalidInput("samples must be an (N, 2) array");
    SampleBatch b;
    b.points.resize(static_cast<std::size_t>(a.shape(0)));
    const double* p = a.data();
    for (auto& q : b.points) {
        q.x = *p++;
        q.y = *p++;
    }
    return b;
}

Density density_from(const py::object& target, std::size_t grid) {
    if (py::isinstance<py::str>(target))
        return make_density(parse_density_spec(target.cast<std::string>()), PeriodicGrid(grid));
    return normalize(to_field(target.cast<Array>()));
}

BinnedHistogram hist_from(const Array& counts) {
    if (counts.ndim() != 2) throw InvalidInput("histogram must be a 2-D array");
    BinnedHistogram h{static_cast<std::size_t>(counts.shape(0)), static_cast<std::size_t>(counts.shape(1)), {}, 0};
    for (py::ssize_t k = 0; k < counts.size(); ++k) {
        const double c = counts.data()[k];
        if (!(c >= 0.0) || c != static_cast<double>(static_cast<std::uint64_t>(c)))
            throw InvalidInput("histogram counts must be non-negative integers");
        h.counts.push_back(static_cast<std::uint64_t>(c));
        h.total += h.counts.back();
    }
    return h;
}

py::dict chi_dict(const ChiSquareResult& r) {
    py::dict d;
    d["statistic"] = r.statistic;
    d["dof"] = r.dof;
    d["p_value"] = r.p_value;
    d["merged_bins"] = r.merged_bins;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Transport-map sampler on the flat torus";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
    py::register_exception<DegenerateInput>(m, "DegenerateInput", base.ptr());
    py::register_exception<FormatError>(m, "FormatError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

    m.def(
        "density", [](const std::string& spec, std::size_t grid) {
            return to_array(make_density(parse_density_spec(spec), PeriodicGrid(grid)).field());
        },
        py::arg("spec"), py::arg("grid") = 256, "Normalized density sampled on an n x n grid.");

    m.def(
        "theta", [](const Array& mu0, const Array& mu1) { return theta(normalize(to_field(mu0)), normalize(to_field(mu1))); },
        py::arg("mu0"), py::arg("mu1"), "Fisher-Rao angle between two densities (normalized first).");

    m.def(
        "solve_poisson", [](const Array& source) {
            const ScalarField s = to_field(source);
            PoissonWorkspace ws(s.grid());
            return to_array(ws.solve(s));
        },
        py::arg("source"), "Zero-mean periodic solution of Laplacian f = source - mean(source).");

    m.def(
        "gradient", [](const Array& f) {
            const auto v = gradient_spectral(to_field(f));
            return py::make_tuple(to_array(v.u_x), to_array(v.u_y));
        },
        py::arg("f"), "Spectral gradient (d/dx, d/dy).");

    py::class_<TransportResult>(m, "TransportMap")
        .def_readonly("steps", &TransportResult::steps)
        .def_readonly("theta", &TransportResult::theta)
        .def_readonly("residual", &TransportResult::residual)
        .def_readonly("residual_warning", &TransportResult::residual_warning)
        .def_readonly("cfl_warning", &TransportResult::cfl_warning)
        .def_readonly("density_id", &TransportResult::density_id)
        .def_property_readonly("grid", [](const TransportResult& r) { return r.map.grid().n_x(); })
        .def_property_readonly("displacement",
                               [](const TransportResult& r) {
                                   return py::make_tuple(to_array(r.map.disp().u_x), to_array(r.map.disp().u_y));
                               })
        .def_property_readonly("min_jacobian", [](const TransportResult& r) { return r.diagnostics.min_jacobian; })
        .def(
            "sample",
            [](const TransportResult& r, std::size_t n, std::uint64_t seed, unsigned threads) {
                SampleBatch b;
                {
                    py::gil_scoped_release release;
                    b = sample_target(r.map, n, seed, threads);
                }
                return to_array(b);
            },
            py::arg("n"), py::arg("seed") = 0, py::arg("threads") = 1, "Draw n samples y = phi(x), x ~ uniform.")
        .def(
            "apply", [](const TransportResult& r, const Array& pts) { return to_array(transform_samples(r.map, to_batch(pts))); },
            py::arg("points"), "Push (N, 2) points through the map.")
        .def(
            "save", [](const TransportResult& r, const std::string& path) { save_map_file(path, r); },
            py::arg("path"));

    m.def(
        "build_transport_map",
        [](const py::object& target, std::size_t steps, std::size_t grid) {
            Density d = density_from(target, grid);
            TransportConfig cfg;
            cfg.steps = steps;
            std::optional<TransportResult> r;
            {
                py::gil_scoped_release release;
                r.emplace(build_transport_map(d, cfg));
            }
            if (py::isinstance<py::str>(target))
                r->density_id = parse_density_spec(target.cast<std::string>()).to_string();
            return std::move(*r);
        },
        py::arg("target"), py::arg("steps") = 100, py::arg("grid") = 256,
        "Build the map from uniform to a target given as a density spec or a positive 2-D array.");

    m.def(
        "load_map", [](const std::string& path) { return load_map_file(path); }, py::arg("path"));

    m.def(
        "draw_uniform", [](std::size_t n, std::uint64_t seed) { return to_array(draw_uniform(n, seed)); },
        py::arg("n"), py::arg("seed") = 0);

    m.def(
        "histogram",
        [](const Array& pts, std::size_t bins) {
            const auto h = histogram(to_batch(pts), bins, bins);
            py::array_t<std::uint64_t> out({h.b_x, h.b_y});
            std::copy(h.counts.begin(), h.counts.end(), out.mutable_data());
            return out;
        },
        py::arg("samples"), py::arg("bins") = 32);

    m.def(
        "expected_bin_mass",
        [](const py::object& target, std::size_t bins, std::size_t grid) {
            const auto v = expected_bin_mass(density_from(target, grid), bins, bins);
            Array out({bins, bins});
            std::copy(v.begin(), v.end(), out.mutable_data());
            return out;
        },
        py::arg("target"), py::arg("bins") = 32, py::arg("grid") = 256);

    m.def(
        "chi_squared_gof",
        [](const Array& counts, const Array& mass) {
            const auto h = hist_from(counts);
            return chi_dict(chi_squared_gof(h, std::span<const double>(mass.data(), static_cast<std::size_t>(mass.size()))));
        },
        py::arg("counts"), py::arg("expected_mass"));

    m.def(
        "two_sample_chi_squared",
        [](const Array& a, const Array& b) { return chi_dict(two_sample_chi_squared(hist_from(a), hist_from(b))); },
        py::arg("counts_a"), py::arg("counts_b"));

    m.def("chi_square_survival", &chi_square_survival, py::arg("statistic"), py::arg("dof"));

    m.def(
        "rejection_sample_oracle",
        [](const py::object& target, std::size_t n, std::uint64_t seed, std::size_t grid) {
            const auto o = rejection_sample_oracle(density_from(target, grid), n, seed);
            return py::make_tuple(to_array(o.batch), o.proposals);
        },
        py::arg("target"), py::arg("n"), py::arg("seed") = 0, py::arg("grid") = 256,
        "Exact rejection samples; returns (samples, proposals).");
}
