#pragma once

// Built-in target densities and density-spec parsing.
//
// Spec grammar:
//   uniform
//   two-bump | two-bump(w1,w2)
//   one-gaussian-bump | one-gaussian-bump(sigma)
//   sine-perturbation(s)
//   file:<path>            OITF scalar file (any path ending in .oitf also works)

#include <optional>
#include <string>
#include <vector>

#include "oit/geodesic.hpp"
#include "oit/grid.hpp"

namespace oit {

struct DensitySpec {
    std::string name;            // registry name, or "file"
    std::vector<double> params;  // explicit parameters, if any
    std::string path;            // for name == "file"

    // Canonical text form; parse_density_spec(to_string()) round-trips.
    [[nodiscard]] std::string to_string() const;
    friend bool operator==(const DensitySpec&, const DensitySpec&) = default;
};

[[nodiscard]] DensitySpec parse_density_spec(const std::string& text);

// Unnormalized field of a built-in density sampled on `grid`.
[[nodiscard]] ScalarField builtin_raw_field(const DensitySpec& spec, const PeriodicGrid& grid);

// Dynamic-range ratio a built-in applies when none is requested
// (two-bump: 100).
[[nodiscard]] std::optional<double> default_ratio(const DensitySpec& spec);

// Resolve a spec to a normalized density. Built-ins are sampled on `grid`;
// file densities must already be on `grid` when one is given.
// `ratio` overrides default_ratio().
[[nodiscard]] Density make_density(const DensitySpec& spec, std::optional<PeriodicGrid> grid,
                                   std::optional<double> ratio = std::nullopt);

// Unnormalized two-bump target with bump weights w1 (curved ridge) and w2
// (round bump at (-1, 0)):
//   w1 exp(-x^2 - 10 (y - x^2/2 + 1)^2) + w2 exp(-(x+1)^2 - y^2) + 1/10
[[nodiscard]] double two_bump(double x, double y, double w1 = 3.0, double w2 = 2.0);

}  // namespace oit
