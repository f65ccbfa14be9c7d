// Acceptance suite: one PASS/FAIL line per criterion.
//
//   oit_acceptance            run every criterion
//   oit_acceptance 1 4 6      run a subset
//
// Exit status is 0 only if every selected criterion passes.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oit/commands.hpp"
#include "oit/densities.hpp"
#include "oit/geodesic.hpp"
#include "oit/poisson.hpp"
#include "oit/sampler.hpp"
#include "oit/transport.hpp"
#include "oit/validate.hpp"
#include "support.hpp"

using namespace oit;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::size_t kGrid = 256;
constexpr std::size_t kSteps = 100;
constexpr std::size_t kSamples = 100000;
constexpr std::size_t kBins = 32;
constexpr double kAlpha = 0.01;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

const Density& reference_target() {
    static const Density d = make_density(parse_density_spec("two-bump"), PeriodicGrid(kGrid));
    return d;
}

struct ReferenceMap {
    TransportResult result;
    double build_seconds;
};

const ReferenceMap& reference_map() {
    static const ReferenceMap m = [] {
        const auto t0 = Clock::now();
        TransportConfig cfg;
        cfg.steps = kSteps;
        auto r = build_transport_map(reference_target(), cfg);
        return ReferenceMap{std::move(r), seconds_since(t0)};
    }();
    return m;
}

Outcome reproduction() {
    const auto& ref = reference_map();
    const auto t0 = Clock::now();
    const SampleBatch batch = sample_target(ref.result.map, kSamples, 0);
    const double sample_s = seconds_since(t0);
    const auto masses = expected_bin_mass(reference_target(), kBins, kBins);
    const auto hist = histogram(batch, kBins, kBins);
    const auto gof = chi_squared_gof(hist, masses);
    const auto oracle = rejection_sample_oracle(reference_target(), kSamples, 1);
    const auto two = two_sample_chi_squared(hist, histogram(oracle.batch, kBins, kBins));
    const bool pass = gof.p_value > kAlpha && two.p_value > kAlpha && ref.build_seconds <= 60.0 && sample_s <= 1.0;
    return {pass, fmt::format("GOF chi2={:.1f} dof={} p={:.3g}; two-sample chi2={:.1f} dof={} p={:.3g}; "
                              "oracle acceptance {:.4f}; build {:.2f} s, sampling {:.3f} s",
                              gof.statistic, gof.dof, gof.p_value, two.statistic, two.dof, two.p_value,
                              oracle.acceptance_rate(), ref.build_seconds, sample_s)};
}

Outcome pushforward() {
    std::vector<double> res;
    for (auto [n, k] : {std::pair<std::size_t, std::size_t>{64, 25}, {128, 50}}) {
        TransportConfig cfg;
        cfg.steps = k;
        res.push_back(build_transport_map(make_density(parse_density_spec("two-bump"), PeriodicGrid(n)), cfg).residual);
    }
    res.push_back(reference_map().result.residual);
    const bool pass = res[2] <= 0.05 && res[0] > res[1] && res[1] > res[2];
    return {pass, fmt::format("residual (64,25)={:.4f} (128,50)={:.4f} (256,100)={:.4f}", res[0], res[1], res[2])};
}

Outcome throughput() {
    const auto& map = reference_map().result.map;
    const auto t0 = Clock::now();
    const SampleBatch batch = sample_target(map, 10000000, 7);
    const double s = seconds_since(t0);
    return {batch.size() == 10000000 && s <= 10.0,
            fmt::format("1e7 samples in {:.2f} s ({:.3g} samples/s, single thread)", s, 1e7 / s)};
}

Outcome solver_suite() {
    const PeriodicGrid g(64);
    PoissonWorkspace ws(g);
    auto field = [&](auto f) { return ScalarField::from_function(g, f); };
    const double e1 = oit::test::max_abs_diff(
        ws.solve(field([](double x, double) { return -std::sin(x); })), field([](double x, double) { return std::sin(x); }));
    const double e2 = oit::test::max_abs_diff(ws.solve(field([](double x, double y) { return -2 * std::sin(x) * std::sin(y); })),
                                              field([](double x, double y) { return std::sin(x) * std::sin(y); }));
    const auto gx = gradient_spectral(field([](double x, double) { return std::sin(x); }));
    const auto gy = gradient_spectral(field([](double, double y) { return std::cos(3 * y); }));
    const double e3 = std::max(oit::test::max_abs_diff(gx.u_x, field([](double x, double) { return std::cos(x); })),
                               oit::test::max_abs(gx.u_y));
    const double e4 = std::max(oit::test::max_abs(gy.u_x),
                               oit::test::max_abs_diff(gy.u_y, field([](double, double y) { return -3 * std::sin(3 * y); })));

    std::mt19937_64 rng(2718);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const ScalarField s = oit::test::random_bandlimited(g, rng, 10);
        const auto lap = ws.laplacian(ws.solve(s));
        ScalarField centered = s;
        const double m = s.mean();
        for (double& v : centered.values()) v -= m;
        worst = std::max(worst, oit::test::max_abs_diff(lap, centered) / oit::test::max_abs(centered));
    }
    const bool pass = e1 <= 1e-12 && e2 <= 1e-12 && e3 <= 1e-12 && e4 <= 1e-12 && worst <= 1e-10;
    return {pass, fmt::format("poisson sin x {:.2e}, sin x sin y {:.2e}; gradient sin x {:.2e}, cos 3y {:.2e}; "
                              "worst relative residual over 100 sources {:.2e}",
                              e1, e2, e3, e4, worst)};
}

Outcome geodesic_invariants() {
    const Density& target = reference_target();
    const GeodesicPath path(Density::uniform(target.grid()), target);
    double mass_err = 0.0, rate_err = 0.0, min_mu = INFINITY;
    for (int k = 0; k <= 100; ++k) {
        const auto p = path.eval(k / 100.0);
        mass_err = std::max(mass_err, std::abs(p.mu.field().integral() - 1.0));
        rate_err = std::max(rate_err, std::abs(p.mu_dot.integral()));
        min_mu = std::min(min_mu, p.mu.field().min());
    }
    double fd_err = 0.0;
    const double d = 1e-5;
    for (double t : {0.1, 0.37, 0.9}) {
        const auto p = path.eval(t);
        const auto p_lo = path.eval(t - d);
        const auto p_hi = path.eval(t + d);
        const auto lo = p_lo.mu.field().values();
        const auto hi = p_hi.mu.field().values();
        double diff = 0.0;
        for (std::size_t k = 0; k < lo.size(); ++k)
            diff = std::max(diff, std::abs((hi[k] - lo[k]) / (2 * d) - p.mu_dot.values()[k]));
        fd_err = std::max(fd_err, diff / oit::test::max_abs(p.mu_dot));
    }
    const bool pass = mass_err <= 1e-10 && rate_err <= 1e-9 && min_mu > 0.0 && fd_err <= 1e-6;
    return {pass, fmt::format("theta {:.6f}; max |mass-1| {:.2e}; max |int mu_dot| {:.2e}; min mu {:.3e}; "
                              "finite-difference rel. error {:.2e}",
                              path.theta(), mass_err, rate_err, min_mu, fd_err)};
}

Outcome fixed_point() {
    TransportConfig cfg;
    cfg.steps = kSteps;
    const auto r = build_transport_map(Density::uniform(PeriodicGrid(kGrid)), cfg);
    bool zero = true;
    for (const ScalarField* f : {&r.map.disp().u_x, &r.map.disp().u_y})
        for (double v : f->values()) zero = zero && std::bit_cast<std::uint64_t>(v) == 0;
    return {zero && r.residual <= 1e-10,
            fmt::format("displacement bit-exact zero: {}; residual {:.3g}", zero ? "yes" : "no", r.residual)};
}

Outcome determinism() {
    oit::test::ScratchDir dir("acceptance");
    std::ostringstream log;
    auto build_into = [&](const std::string& name) {
        RunConfig cfg;
        cfg.out = dir.file(name);
        (void)cmd_build(cfg, log);
        return oit::test::slurp(cfg.out);
    };
    const std::string map_a = build_into("a.oitm");
    const std::string map_b = build_into("b.oitm");

    auto sample = [&](unsigned threads) {
        RunConfig cfg;
        cfg.map = dir.file("a.oitm");
        cfg.n = kSamples;
        cfg.seed = 11;
        cfg.threads = threads;
        std::ostringstream os;
        cmd_sample(cfg, os, log);
        return os.str();
    };
    const std::string s1 = sample(1), s2 = sample(1), s4 = sample(4);

    auto validate = [&](unsigned threads) {
        RunConfig cfg;
        cfg.map = dir.file("a.oitm");
        cfg.threads = threads;
        std::ostringstream os;
        (void)cmd_validate(cfg, os, log);
        return os.str();
    };
    const std::string v1 = validate(1), v2 = validate(1), v4 = validate(4);

    const bool maps = map_a == map_b && !map_a.empty();
    const bool samples = s1 == s2 && s1 == s4;
    const bool reports = v1 == v2 && v1 == v4;
    return {maps && samples && reports,
            fmt::format("map files identical: {} ({} bytes); sample CSV identical (1,1,4 threads): {}; "
                        "validation reports identical (1,1,4 threads): {}",
                        maps, map_a.size(), samples, reports)};
}

Outcome negative_control() {
    const auto& map = reference_map().result.map;
    const Density wrong = make_density(parse_density_spec("two-bump(2,3)"), PeriodicGrid(kGrid));
    const auto gof = chi_squared_gof(histogram(sample_target(map, kSamples, 0), kBins, kBins),
                                     expected_bin_mass(wrong, kBins, kBins));
    return {gof.p_value < kAlpha, fmt::format("GOF vs swapped bump weights: chi2={:.1f} dof={} p={:.3g}", gof.statistic,
                                              gof.dof, gof.p_value)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"reference reproduction (GOF and two-sample, 256x256, K=100, N=1e5)", reproduction},
        {"pushforward identity and residual ladder", pushforward},
        {"amortized sampling throughput", throughput},
        {"analytic solver suite", solver_suite},
        {"geodesic invariants", geodesic_invariants},
        {"uniform fixed point", fixed_point},
        {"determinism", determinism},
        {"negative control", negative_control},
    };
    std::set<std::size_t> selected;
    for (int i = 1; i < argc; ++i) {
        const int c = std::atoi(argv[i]);
        if (c < 1 || c > static_cast<int>(criteria.size())) {
            fmt::print(stderr, "unknown criterion '{}'\n", argv[i]);
            return 2;
        }
        selected.insert(static_cast<std::size_t>(c));
    }
    bool all = true;
    for (std::size_t k = 1; k <= criteria.size(); ++k) {
        if (!selected.empty() && !selected.count(k)) continue;
        const auto& [name, run] = criteria[k - 1];
        Outcome o{false, ""};
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        fmt::print("criterion {}: {} - {}: {}\n", k, o.pass ? "PASS" : "FAIL", name, o.detail);
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
