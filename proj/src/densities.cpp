#include "oit/densities.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cmath>

#include "oit/error.hpp"
#include "oit/field_io.hpp"

namespace oit {
namespace {

std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

double parse_number(const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw InvalidInput("bad density parameter '" + text + "'");
    return v;
}

struct Builtin {
    const char* name;
    std::size_t min_params;
    std::size_t max_params;
};

constexpr Builtin kBuiltins[] = {
    {"uniform", 0, 0},
    {"two-bump", 0, 2},
    {"one-gaussian-bump", 0, 1},
    {"sine-perturbation", 1, 1},
};

const Builtin& lookup(const std::string& name) {
    for (const auto& b : kBuiltins)
        if (name == b.name) return b;
    throw InvalidInput("unknown density '" + name +
                       "' (expected uniform, two-bump, one-gaussian-bump, "
                       "sine-perturbation(s) or file:<path>)");
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

double two_bump(double x, double y, double w1, double w2) {
    const double ridge = y - 0.5 * x * x + 1.0;
    return w1 * std::exp(-x * x - 10.0 * ridge * ridge) +
           w2 * std::exp(-(x + 1.0) * (x + 1.0) - y * y) + 0.1;
}

std::string DensitySpec::to_string() const {
    if (name == "file") return "file:" + path;
    if (params.empty()) return name;
    return fmt::format("{}({})", name, fmt::join(params, ","));
}

DensitySpec parse_density_spec(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw InvalidInput("empty density spec");
    if (t.rfind("file:", 0) == 0) {
        DensitySpec spec{"file", {}, t.substr(5)};
        if (spec.path.empty()) throw InvalidInput("density file path is empty");
        return spec;
    }
    if (ends_with(t, ".oitf")) return {"file", {}, t};

    DensitySpec spec;
    const auto open = t.find('(');
    if (open == std::string::npos) {
        spec.name = t;
    } else {
        if (t.back() != ')') throw InvalidInput("unbalanced parentheses in density spec '" + t + "'");
        spec.name = trim(t.substr(0, open));
        const std::string inner = t.substr(open + 1, t.size() - open - 2);
        std::size_t start = 0;
        while (start <= inner.size()) {
            const auto comma = inner.find(',', start);
            const auto end = comma == std::string::npos ? inner.size() : comma;
            spec.params.push_back(parse_number(inner.substr(start, end - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    const Builtin& b = lookup(spec.name);
    if (spec.params.size() < b.min_params || spec.params.size() > b.max_params)
        throw InvalidInput("density '" + spec.name + "' takes " + std::to_string(b.min_params) +
                           (b.min_params == b.max_params ? "" : "-" + std::to_string(b.max_params)) +
                           " parameter(s)");
    if (spec.name == "two-bump" && spec.params.size() == 1)
        throw InvalidInput("two-bump takes both weights or none");
    return spec;
}

ScalarField builtin_raw_field(const DensitySpec& spec, const PeriodicGrid& grid) {
    const auto& p = spec.params;
    if (spec.name == "uniform") return ScalarField(grid, 1.0);
    if (spec.name == "two-bump") {
        const double w1 = p.empty() ? 3.0 : p[0];
        const double w2 = p.empty() ? 2.0 : p[1];
        return ScalarField::from_function(grid,
                                          [=](double x, double y) { return two_bump(x, y, w1, w2); });
    }
    if (spec.name == "one-gaussian-bump") {
        const double sigma = p.empty() ? 1.0 : p[0];
        if (!(sigma > 0.0)) throw InvalidInput("one-gaussian-bump width must be positive");
        return ScalarField::from_function(grid, [=](double x, double y) {
            return std::exp(-(x * x + y * y) / (2.0 * sigma * sigma)) + 0.1;
        });
    }
    if (spec.name == "sine-perturbation") {
        const double s = p[0];
        if (!(std::abs(s) < 1.0)) throw InvalidInput("sine-perturbation amplitude must be in (-1, 1)");
        return ScalarField::from_function(grid, [=](double x, double) { return 1.0 + s * std::sin(x); });
    }
    throw InvalidInput("'" + spec.name + "' is not a built-in density");
}

std::optional<double> default_ratio(const DensitySpec& spec) {
    if (spec.name == "two-bump") return 100.0;
    return std::nullopt;
}

Density make_density(const DensitySpec& spec, std::optional<PeriodicGrid> grid,
                     std::optional<double> ratio) {
    ScalarField raw = [&] {
        if (spec.name != "file") {
            if (!grid) throw InvalidInput("built-in densities need a grid size");
            return builtin_raw_field(spec, *grid);
        }
        ScalarField f = load_scalar_field(spec.path);
        if (grid && !(f.grid() == *grid))
            throw InvalidInput(fmt::format("density file {} is {}x{}, expected {}x{}", spec.path,
                                           f.grid().n_x(), f.grid().n_y(), grid->n_x(), grid->n_y()));
        return f;
    }();
    const std::optional<double> r = ratio ? ratio : default_ratio(spec);
    if (r) raw = set_dynamic_range(raw, *r);
    return normalize(raw);
}

}  // namespace oit
