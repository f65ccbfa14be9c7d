#pragma once

// Statistical ground truth for transported samples: binned histograms,
// Pearson chi-square tests and an exact rejection sampler for the
// bilinearly interpolated target density.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oit/geodesic.hpp"
#include "oit/sampler.hpp"

namespace oit {

// Expected counts below this are merged into a neighbouring bin.
inline constexpr double kMinExpectedCount = 5.0;

struct BinnedHistogram {
    std::size_t b_x = 0;
    std::size_t b_y = 0;
    std::vector<std::uint64_t> counts;  // row-major, x slow
    std::uint64_t total = 0;

    [[nodiscard]] std::uint64_t operator()(std::size_t i, std::size_t j) const {
        return counts[i * b_y + j];
    }
};

// Equal-width right-open bins over [-pi, pi)^2.
[[nodiscard]] BinnedHistogram histogram(const SampleBatch& batch, std::size_t b_x, std::size_t b_y);

// Exact integral of the bilinear interpolant of `target` over each bin
// (trapezoid weights on the bin's nodes). Grid resolution must be a
// multiple of the bin resolution.
[[nodiscard]] std::vector<double> expected_bin_mass(const Density& target, std::size_t b_x,
                                                    std::size_t b_y);

struct ChiSquareResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
    std::size_t merged_bins = 0;  // bins absorbed into a neighbour
};

// Upper tail probability of the chi-square distribution.
[[nodiscard]] double chi_square_survival(double statistic, double dof);

// Deterministic merge of low-weight bins: scanning row-major, a bin whose
// group weight is below `threshold` joins the adjacent (periodic 4-neighbour)
// group with the largest weight, ties to the lowest bin index; repeated to a
// fixed point. Returns a group label per bin (labels are 0..groups-1 in
// order of first appearance). Throws DegenerateInput if everything merges
// into one group.
[[nodiscard]] std::vector<std::size_t> merge_low_bins(std::span<const double> weights,
                                                      std::size_t b_x, std::size_t b_y,
                                                      double threshold);

[[nodiscard]] ChiSquareResult chi_squared_gof(const BinnedHistogram& hist,
                                              std::span<const double> expected_mass);

[[nodiscard]] ChiSquareResult two_sample_chi_squared(const BinnedHistogram& a,
                                                     const BinnedHistogram& b);

struct OracleSamples {
    SampleBatch batch;
    std::uint64_t proposals = 0;

    [[nodiscard]] double acceptance_rate() const {
        return proposals == 0 ? 0.0 : static_cast<double>(batch.size()) / static_cast<double>(proposals);
    }
};

// Rejection sampling from the uniform envelope scaled by max(mu) * 4 pi^2,
// evaluating mu by bilinear interpolation.
[[nodiscard]] OracleSamples rejection_sample_oracle(const Density& target, std::size_t n,
                                                    std::uint64_t seed);

// Key: value report lines.
struct ValidationReport {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }
    [[nodiscard]] std::string to_string() const;
};

// Per-bin CSV: "bin_x,bin_y,observed,expected".
void write_bin_csv(std::ostream& os, const BinnedHistogram& hist,
                   std::span<const double> expected_mass);

}  // namespace oit
