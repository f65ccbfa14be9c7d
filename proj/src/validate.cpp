#include "oit/validate.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "interp.hpp"
#include "oit/error.hpp"
#include "oit/philox.hpp"

namespace oit {

BinnedHistogram histogram(const SampleBatch& batch, std::size_t b_x, std::size_t b_y) {
    if (b_x < 1 || b_y < 1) throw InvalidInput("histogram needs at least one bin per axis");
    BinnedHistogram h{b_x, b_y, std::vector<std::uint64_t>(b_x * b_y, 0), batch.size()};
    const double wx = kTwoPi / static_cast<double>(b_x);
    const double wy = kTwoPi / static_cast<double>(b_y);
    auto bin = [](double c, double w, std::size_t nb) {
        const double f = std::floor((wrap_coordinate(c) + kPi) / w);
        return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(nb - 1)));
    };
    for (const auto& p : batch.points) ++h.counts[bin(p.x, wx, b_x) * b_y + bin(p.y, wy, b_y)];
    return h;
}

std::vector<double> expected_bin_mass(const Density& target, std::size_t b_x, std::size_t b_y) {
    const auto& g = target.grid();
    if (b_x < 1 || b_y < 1 || g.n_x() % b_x != 0 || g.n_y() % b_y != 0)
        throw InvalidInput(fmt::format("grid {}x{} is not a multiple of the {}x{} binning", g.n_x(),
                                       g.n_y(), b_x, b_y));
    const std::size_t cx = g.n_x() / b_x;
    const std::size_t cy = g.n_y() / b_y;

    // A node on a bin edge contributes half its trapezoid weight to each side.
    struct Share {
        std::size_t bin[2];
        double weight[2];
    };
    auto shares = [](std::size_t node, std::size_t cells, std::size_t bins) {
        const std::size_t b = node / cells;
        if (node % cells != 0) return Share{{b, b}, {1.0, 0.0}};
        return Share{{b, (b + bins - 1) % bins}, {0.5, 0.5}};
    };

    std::vector<double> mass(b_x * b_y, 0.0);
    const double cell = g.cell_volume();
    for (std::size_t i = 0; i < g.n_x(); ++i) {
        const Share sx = shares(i, cx, b_x);
        for (std::size_t j = 0; j < g.n_y(); ++j) {
            const Share sy = shares(j, cy, b_y);
            const double v = target.field()(i, j) * cell;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    mass[sx.bin[a] * b_y + sy.bin[b]] += sx.weight[a] * sy.weight[b] * v;
        }
    }
    return mass;
}

double chi_square_survival(double statistic, double dof) {
    if (!(dof > 0.0)) throw InvalidInput("chi-square needs positive degrees of freedom");
    if (statistic <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

std::vector<std::size_t> merge_low_bins(std::span<const double> weights, std::size_t b_x,
                                        std::size_t b_y, double threshold) {
    const std::size_t n = b_x * b_y;
    if (weights.size() != n) throw InvalidInput("merge: weight count does not match binning");

    // Each group is keyed by its smallest bin index.
    std::vector<std::size_t> root(n);
    std::iota(root.begin(), root.end(), std::size_t{0});
    std::vector<double> w(weights.begin(), weights.end());
    std::vector<std::vector<std::size_t>> members(n);
    for (std::size_t k = 0; k < n; ++k) members[k] = {k};
    std::size_t groups = n;

    auto neighbours = [&](std::size_t k) {
        const std::size_t i = k / b_y;
        const std::size_t j = k % b_y;
        return std::array<std::size_t, 4>{((i + b_x - 1) % b_x) * b_y + j, ((i + 1) % b_x) * b_y + j,
                                          i * b_y + (j + b_y - 1) % b_y, i * b_y + (j + 1) % b_y};
    };

    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t g = root[k];
            if (w[g] >= threshold) continue;
            if (groups == 1) throw DegenerateInput("every bin merged into one; too few samples");
            std::size_t best = n;
            for (std::size_t m : members[g]) {
                for (std::size_t nb : neighbours(m)) {
                    const std::size_t h = root[nb];
                    if (h == g) continue;
                    if (best == n || w[h] > w[best] || (w[h] == w[best] && h < best)) best = h;
                }
            }
            const std::size_t keep = std::min(g, best);
            const std::size_t gone = std::max(g, best);
            w[keep] += w[gone];
            for (std::size_t m : members[gone]) root[m] = keep;
            members[keep].insert(members[keep].end(), members[gone].begin(), members[gone].end());
            members[gone].clear();
            --groups;
            changed = true;
        }
    }
    if (groups < 2) throw DegenerateInput("binning leaves fewer than two groups");

    std::vector<std::size_t> label(n);
    std::vector<std::size_t> relabel(n, n);
    std::size_t next = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (relabel[root[k]] == n) relabel[root[k]] = next++;
        label[k] = relabel[root[k]];
    }
    return label;
}

namespace {

std::size_t group_count(const std::vector<std::size_t>& label) {
    return label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
}

}  // namespace

ChiSquareResult chi_squared_gof(const BinnedHistogram& hist, std::span<const double> expected_mass) {
    const std::size_t n = hist.b_x * hist.b_y;
    if (expected_mass.size() != n) throw InvalidInput("expected masses do not match the binning");
    if (hist.total == 0) throw DegenerateInput("histogram is empty");
    const auto total = static_cast<double>(hist.total);

    std::vector<double> expected(n);
    std::transform(expected_mass.begin(), expected_mass.end(), expected.begin(),
                   [total](double m) { return total * m; });
    const auto label = merge_low_bins(expected, hist.b_x, hist.b_y, kMinExpectedCount);
    const std::size_t groups = group_count(label);

    std::vector<double> obs(groups, 0.0);
    std::vector<double> exp(groups, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        obs[label[k]] += static_cast<double>(hist.counts[k]);
        exp[label[k]] += expected[k];
    }
    ChiSquareResult r;
    for (std::size_t g = 0; g < groups; ++g) r.statistic += (obs[g] - exp[g]) * (obs[g] - exp[g]) / exp[g];
    r.dof = groups - 1;
    r.merged_bins = n - groups;
    r.p_value = chi_square_survival(r.statistic, static_cast<double>(r.dof));
    return r;
}

ChiSquareResult two_sample_chi_squared(const BinnedHistogram& a, const BinnedHistogram& b) {
    if (a.b_x != b.b_x || a.b_y != b.b_y) throw InvalidInput("two-sample test: binning mismatch");
    if (a.total == 0 || b.total == 0) throw DegenerateInput("two-sample test: empty histogram");
    const std::size_t n = a.b_x * a.b_y;
    const auto na = static_cast<double>(a.total);
    const auto nb = static_cast<double>(b.total);
    const double frac_a = na / (na + nb);
    const double frac_b = nb / (na + nb);

    std::vector<double> weight(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto pooled = static_cast<double>(a.counts[k] + b.counts[k]);
        weight[k] = std::min(frac_a, frac_b) * pooled;
    }
    const auto label = merge_low_bins(weight, a.b_x, a.b_y, kMinExpectedCount);
    const std::size_t groups = group_count(label);

    std::vector<double> ga(groups, 0.0);
    std::vector<double> gb(groups, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        ga[label[k]] += static_cast<double>(a.counts[k]);
        gb[label[k]] += static_cast<double>(b.counts[k]);
    }
    ChiSquareResult r;
    for (std::size_t g = 0; g < groups; ++g) {
        const double pooled = ga[g] + gb[g];
        const double ea = na * pooled / (na + nb);
        const double eb = nb * pooled / (na + nb);
        r.statistic += (ga[g] - ea) * (ga[g] - ea) / ea + (gb[g] - eb) * (gb[g] - eb) / eb;
    }
    r.dof = groups - 1;
    r.merged_bins = n - groups;
    r.p_value = chi_square_survival(r.statistic, static_cast<double>(r.dof));
    return r;
}

OracleSamples rejection_sample_oracle(const Density& target, std::size_t n, std::uint64_t seed) {
    const auto& g = target.grid();
    const double* values = target.field().values().data();
    const double peak = target.field().max();
    OracleSamples out;
    out.batch.seed = seed;
    out.batch.points.reserve(n);
    while (out.batch.size() < n) {
        const std::uint64_t k = out.proposals++;
        const Point2 p = uniform_point(seed, k, SampleStream::OracleProposal);
        const double u =
            uniform_pair(seed, k, static_cast<std::uint32_t>(SampleStream::OracleAccept)).a;
        const detail::BilinearStencil s(detail::index_coordinate(p.x, g.h_x()),
                                        detail::index_coordinate(p.y, g.h_y()), g.n_x(), g.n_y());
        if (u < s(values) / peak) out.batch.points.push_back(p);
    }
    return out;
}

std::string ValidationReport::to_string() const {
    std::string s;
    for (const auto& [k, v] : entries) s += fmt::format("{}: {}\n", k, v);
    return s;
}

void write_bin_csv(std::ostream& os, const BinnedHistogram& hist, std::span<const double> expected_mass) {
    if (expected_mass.size() != hist.counts.size())
        throw InvalidInput("expected masses do not match the binning");
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "bin_x,bin_y,observed,expected\n");
    for (std::size_t i = 0; i < hist.b_x; ++i)
        for (std::size_t j = 0; j < hist.b_y; ++j)
            fmt::format_to(std::back_inserter(buf), "{},{},{},{}\n", i, j, hist(i, j),
                           static_cast<double>(hist.total) * expected_mass[i * hist.b_y + j]);
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace oit
