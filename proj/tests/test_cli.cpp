#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "oit/commands.hpp"
#include "oit/densities.hpp"
#include "oit/error.hpp"
#include "oit/export.hpp"
#include "oit/field_io.hpp"
#include "oit/run_config.hpp"
#include "oit/sampler.hpp"
#include "support.hpp"

using namespace oit;
using oit::test::ScratchDir;
using oit::test::slurp;

namespace {

struct MeshPoint {
    std::size_t line;
    std::string family;
    double x, y;
};

std::vector<MeshPoint> parse_mesh(const std::string& csv) {
    std::istringstream is(csv);
    std::string row;
    std::getline(is, row);
    REQUIRE(row == "line,family,x,y");
    std::vector<MeshPoint> pts;
    while (std::getline(is, row)) {
        std::istringstream rs(row);
        std::string a, fam, x, y;
        std::getline(rs, a, ',');
        std::getline(rs, fam, ',');
        std::getline(rs, x, ',');
        std::getline(rs, y, ',');
        pts.push_back({std::stoul(a), fam, std::stod(x), std::stod(y)});
    }
    return pts;
}

std::map<std::size_t, std::vector<MeshPoint>> by_line(const std::vector<MeshPoint>& pts) {
    std::map<std::size_t, std::vector<MeshPoint>> lines;
    for (const auto& p : pts) lines[p.line].push_back(p);
    return lines;
}

RunConfig small_build(const ScratchDir& dir, const std::string& density, std::size_t grid, std::size_t steps) {
    RunConfig cfg;
    cfg.density = density;
    cfg.grid = grid;
    cfg.steps = steps;
    cfg.out = dir.file("map.oitm");
    return cfg;
}

}  // namespace

TEST_CASE("config round trip") {
    RunConfig cfg;
    cfg.set("density", "two-bump(2,3)");
    cfg.set("ratio", "50");
    cfg.set("grid", "128");
    cfg.set("seed", "18446744073709551615");
    cfg.set("bin_csv", "bins.csv");
    const std::string text = cfg.to_string();
    const RunConfig back = RunConfig::parse(text);
    CHECK(back == cfg);
    CHECK(back.to_string() == text);
    CHECK(RunConfig::parse(back.to_string()).to_string() == text);

    const RunConfig defaults = RunConfig::parse("# only a comment\n\n");
    CHECK(defaults == RunConfig{});
    CHECK(defaults.grid == 256);
    CHECK(defaults.steps == 100);
    CHECK(defaults.seed == 0);
    CHECK_FALSE(defaults.ratio.has_value());
    CHECK(RunConfig::parse("ratio = none\n").ratio == std::nullopt);
    CHECK(RunConfig::parse("steps=7 # trailing comment\n").steps == 7);
}

TEST_CASE("config rejects bad input") {
    RunConfig cfg;
    CHECK_THROWS_AS(cfg.set("n", "-5"), InvalidInput);
    CHECK_THROWS_AS(cfg.set("grid", "12x"), InvalidInput);
    CHECK_THROWS_AS(cfg.set("colour", "red"), InvalidInput);
    CHECK_THROWS_AS(cfg.set("ratio", "nan"), InvalidInput);
    CHECK_THROWS_AS((void)RunConfig::parse("steps 3\n"), FormatError);

    cfg = RunConfig{};
    cfg.steps = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg = RunConfig{};
    cfg.density = "three-bump";
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg = RunConfig{};
    cfg.ratio = 1.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}

TEST_CASE("density specs") {
    CHECK(parse_density_spec("two-bump").to_string() == "two-bump");
    CHECK(parse_density_spec(" two-bump( 2 , 3 ) ").to_string() == "two-bump(2,3)");
    CHECK(parse_density_spec("sine-perturbation(0.5)").params == std::vector<double>{0.5});
    CHECK(parse_density_spec("file:some/where.bin").path == "some/where.bin");
    CHECK(parse_density_spec("field.oitf").name == "file");
    for (const char* bad : {"", "two-bump(1)", "sine-perturbation", "uniform(2)", "gauss", "two-bump(1,x)", "two-bump(1,2"})
        CHECK_THROWS_AS((void)parse_density_spec(bad), InvalidInput);
    CHECK_THROWS_AS((void)make_density(parse_density_spec("sine-perturbation(1.5)"), PeriodicGrid(16)), InvalidInput);

    // two-bump hardcodes the closed-form target before range adjustment.
    const PeriodicGrid g(64);
    const auto raw = builtin_raw_field(parse_density_spec("two-bump"), g);
    CHECK(raw(10, 20) == two_bump(g.x(10), g.y(20)));
    CHECK(two_bump(0.0, -1.0) == doctest::Approx(3.0 + 2 * std::exp(-2.0) + 0.1));
    CHECK(default_ratio(parse_density_spec("two-bump")) == 100.0);
    const Density d = make_density(parse_density_spec("two-bump"), g);
    CHECK(d.field().max() / d.field().min() == doctest::Approx(100.0).epsilon(1e-12));
    const Density d3 = make_density(parse_density_spec("two-bump"), g, 3.0);
    CHECK(d3.field().max() / d3.field().min() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("OITF fields") {
    ScratchDir dir("oitf");
    const PeriodicGrid g(8, 6);
    const auto f = ScalarField::from_function(g, [](double x, double y) { return x * 10 + y; });
    save_scalar_field(dir.file("f.oitf"), f);
    const std::string bytes = slurp(dir.file("f.oitf"));
    CHECK(bytes.size() == 6 + 4 + 4 + 1 + 8 * 48);
    CHECK(bytes.substr(0, 6) == "OITF1\n");
    CHECK(static_cast<unsigned char>(bytes[6]) == 8);
    CHECK(static_cast<unsigned char>(bytes[10]) == 6);
    CHECK(bytes[14] == 1);
    CHECK(oit::test::bit_equal(load_scalar_field(dir.file("f.oitf")), f));

    const VectorField v(f, ScalarField(g, -1.0));
    save_vector_field(dir.file("v.oitf"), v);
    const auto vb = load_vector_field(dir.file("v.oitf"));
    CHECK(oit::test::bit_equal(vb.u_x, v.u_x));
    CHECK(oit::test::bit_equal(vb.u_y, v.u_y));
    CHECK_THROWS_AS((void)load_scalar_field(dir.file("v.oitf")), FormatError);

    // A density file is normalized on load and must match the grid.
    const auto raw = ScalarField::from_function(g, [](double x, double) { return 2 + std::sin(x); });
    save_scalar_field(dir.file("d.oitf"), raw);
    const Density d = make_density(parse_density_spec("file:" + dir.file("d.oitf")), g);
    CHECK(std::abs(d.mass() - 1.0) <= 1e-12);
    CHECK_THROWS_AS((void)make_density(parse_density_spec(dir.file("d.oitf")), PeriodicGrid(16)), InvalidInput);
}

TEST_CASE("heatmap export") {
    const PeriodicGrid g(16, 8);
    std::stringstream flat;
    write_heatmap_pgm(flat, Density::uniform(g).field());
    const Heatmap h = read_pgm(flat);
    CHECK(h.width == 16);
    CHECK(h.height == 8);
    for (auto p : h.pixels) CHECK(p == h.pixels.front());

    // Linear in value, top row is the largest y.
    const auto f = ScalarField::from_function(g, [](double, double y) { return y; });
    std::stringstream ramp;
    write_heatmap_pgm(ramp, f);
    const Heatmap r = read_pgm(ramp);
    CHECK(r.pixels.front() == 255);
    CHECK(r.pixels.back() == 0);
}

TEST_CASE("mesh export of the identity is a straight lattice") {
    const PeriodicGrid g(16);
    std::ostringstream os;
    write_mesh_csv(os, DiffeoMap::identity(g), 4);
    const auto lines = by_line(parse_mesh(os.str()));
    CHECK(lines.size() == 8);  // 4 x-lines + 4 y-lines
    for (const auto& [id, pts] : lines) {
        CHECK(pts.size() == 17);
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (pts[k].family == "x") {
                CHECK(pts[k].x == pts[0].x);
                CHECK(pts[k].y == doctest::Approx(-kPi + k * g.h_y()));
            } else {
                CHECK(pts[k].y == pts[0].y);
                CHECK(pts[k].x == doctest::Approx(-kPi + k * g.h_x()));
            }
        }
    }
    CHECK_THROWS_AS(write_mesh_csv(os, DiffeoMap::identity(g), 0), InvalidInput);
    CHECK_THROWS_AS(write_mesh_csv(os, DiffeoMap::identity(g), 4, true), InvalidInput);
}

TEST_CASE("commands: build, sample, export, validate") {
    ScratchDir dir("cmd");
    std::ostringstream log;

    SUBCASE("uniform build is the identity") {
        const auto r = cmd_build(small_build(dir, "uniform", 32, 5), log);
        CHECK(r.residual == 0.0);
        CHECK(log.str().find("residual: 0\n") != std::string::npos);
        const auto loaded = load_map_file(dir.file("map.oitm"));
        CHECK(oit::test::max_abs(loaded.map.disp().u_x) == 0.0);
        CHECK(loaded.density_id == "uniform");
    }

    SUBCASE("sampling is byte-identical across runs and thread counts") {
        (void)cmd_build(small_build(dir, "two-bump", 64, 20), log);
        RunConfig s;
        s.map = dir.file("map.oitm");
        s.n = 5;
        s.seed = 99;
        std::ostringstream a, b, c;
        cmd_sample(s, a, log);
        cmd_sample(s, b, log);
        s.threads = 3;
        cmd_sample(s, c, log);
        CHECK(a.str() == b.str());
        CHECK(a.str() == c.str());
        std::istringstream in(a.str());
        CHECK(read_samples_csv(in).size() == 5);

        s.out = dir.file("s.oitf");
        std::ostringstream unused;
        cmd_sample(s, unused, log);
        std::ifstream bin(s.out, std::ios::binary);
        CHECK(read_samples_oitf(bin).size() == 5);
    }

    SUBCASE("warp mesh of a transport map is periodic") {
        (void)cmd_build(small_build(dir, "two-bump", 64, 20), log);
        RunConfig e;
        e.map = dir.file("map.oitm");
        e.stride = 4;
        for (bool inverse : {false, true}) {
            std::ostringstream os;
            cmd_export(e, ExportKind::Mesh, inverse, os, log);
            const auto lines = by_line(parse_mesh(os.str()));
            CHECK(lines.size() == 32);
            bool warped = false;
            for (const auto& [id, pts] : lines) {
                const auto& first = pts.front();
                const auto& last = pts.back();
                if (first.family == "x") {
                    CHECK(last.x - first.x == doctest::Approx(0.0).epsilon(1e-12));
                    CHECK(last.y - first.y == doctest::Approx(kTwoPi).epsilon(1e-12));
                    warped = warped || std::abs(pts[5].x - first.x) > 1e-3;
                } else {
                    CHECK(last.x - first.x == doctest::Approx(kTwoPi).epsilon(1e-12));
                    CHECK(last.y - first.y == doctest::Approx(0.0).epsilon(1e-12));
                }
            }
            CHECK(warped);
        }
    }

    SUBCASE("heatmap and scatter exports") {
        RunConfig e;
        e.density = "uniform";
        e.grid = 16;
        std::stringstream os;
        cmd_export(e, ExportKind::Heatmap, false, os, log);
        const Heatmap h = read_pgm(os);
        for (auto p : h.pixels) CHECK(p == 128);

        (void)cmd_build(small_build(dir, "uniform", 16, 2), log);
        e.map = dir.file("map.oitm");
        e.n = 10;
        std::ostringstream sc;
        cmd_export(e, ExportKind::Scatter, false, sc, log);
        std::istringstream in(sc.str());
        CHECK(read_samples_csv(in).size() == 10);
    }

    SUBCASE("identity map validates against the uniform density") {
        (void)cmd_build(small_build(dir, "uniform", 64, 2), log);
        RunConfig v;
        v.map = dir.file("map.oitm");
        v.density = "uniform";
        v.n = 20000;
        v.bins = 16;
        v.bin_csv = dir.file("bins.csv");
        std::ostringstream report;
        const auto out = cmd_validate(v, report, log);
        CHECK(out.passed);
        CHECK(out.gof.p_value > 0.01);
        CHECK(out.two_sample.p_value > 0.01);
        CHECK(out.oracle_acceptance == 1.0);
        CHECK(report.str().find("result: pass\n") != std::string::npos);
        CHECK(slurp(dir.file("bins.csv")).rfind("bin_x,bin_y,observed,expected\n", 0) == 0);
    }

    SUBCASE("validation against the wrong density fails") {
        (void)cmd_build(small_build(dir, "two-bump", 64, 25), log);
        RunConfig v;
        v.map = dir.file("map.oitm");
        v.density = "two-bump(2,3)";
        v.n = 100000;
        v.bins = 16;
        std::ostringstream report;
        const auto out = cmd_validate(v, report, log);
        CHECK_FALSE(out.passed);
        CHECK(out.gof.p_value < 0.01);
    }

    SUBCASE("missing or corrupt map files") {
        RunConfig s;
        std::ostringstream os;
        CHECK_THROWS_AS(cmd_sample(s, os, log), InvalidInput);
        s.map = dir.file("absent.oitm");
        CHECK_THROWS_AS(cmd_sample(s, os, log), InvalidInput);
        std::ofstream(dir.file("junk.oitm")) << "not a map";
        s.map = dir.file("junk.oitm");
        CHECK_THROWS_AS(cmd_sample(s, os, log), FormatError);
    }
}
