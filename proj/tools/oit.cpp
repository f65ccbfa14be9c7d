// oit: build transport maps, draw samples, validate and export figures.
//
//   oit build    --density two-bump --grid 256 --steps 100 --out map.oitm
//   oit sample   --map map.oitm --n 100000 --seed 7 --out samples.csv
//   oit validate --map map.oitm --density two-bump --n 100000 --bins 32
//   oit export   heatmap|mesh|scatter ...
//
// Exit codes: 0 success, 1 usage/config error, 2 numerical failure,
// 3 validation failure.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <iostream>
#include <map>
#include <string>

#include "oit/commands.hpp"
#include "oit/error.hpp"
#include "oit/run_config.hpp"

namespace {

// Flags that map one-to-one onto RunConfig keys.
struct ConfigFlags {
    std::map<std::string, std::string> values;
    std::string config_path;
    bool print_config = false;

    void attach(CLI::App& app, std::initializer_list<const char*> keys) {
        app.add_option("--config", config_path, "key=value config file; flags override it");
        app.add_flag("--print-config", print_config, "Print the effective config to stderr");
        for (const char* key : keys) {
            std::string flag = std::string("--") + key;
            for (auto& c : flag)
                if (c == '_') c = '-';
            app.add_option(flag, values[key], help(key))->allow_extra_args(false);
        }
    }

    static std::string help(const std::string& key) {
        static const std::map<std::string, std::string> text = {
            {"density", "Density spec: uniform, two-bump[(w1,w2)], one-gaussian-bump[(sigma)], "
                        "sine-perturbation(s), file:<path.oitf>"},
            {"ratio", "Dynamic range max/min applied before normalizing ('none' to disable)"},
            {"grid", "Grid nodes per axis"},
            {"steps", "Number of time steps K"},
            {"seed", "64-bit RNG seed"},
            {"n", "Number of samples"},
            {"bins", "Histogram bins per axis"},
            {"out", "Output path ('-' for stdout)"},
            {"map", "OITM map file"},
            {"threads", "Worker threads for sampling"},
            {"stride", "Mesh export: every stride-th grid line"},
            {"bin_csv", "Validate: write per-bin observed/expected CSV here"},
        };
        return text.at(key);
    }

    oit::RunConfig resolve(const CLI::App& app) const {
        oit::RunConfig cfg = config_path.empty() ? oit::RunConfig{} : oit::RunConfig::load(config_path);
        for (const auto& [key, value] : values) {
            std::string flag = "--" + key;
            for (auto& c : flag)
                if (c == '_') c = '-';
            if (app.get_option(flag)->count() > 0) cfg.set(key, value);
        }
        cfg.validate();
        if (print_config) std::cerr << cfg.to_string();
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal information transport sampler on the flat 2-torus"};
    app.require_subcommand(1);

    ConfigFlags build_flags, sample_flags, validate_flags, export_flags;

    auto* build = app.add_subcommand("build", "Build a transport map and write an OITM file");
    build_flags.attach(*build, {"density", "ratio", "grid", "steps", "out"});

    auto* sample = app.add_subcommand("sample", "Draw samples through a prebuilt map");
    sample_flags.attach(*sample, {"map", "n", "seed", "threads", "out"});

    auto* validate = app.add_subcommand("validate", "Chi-square validation of a map against a density");
    validate_flags.attach(*validate,
                          {"map", "density", "ratio", "n", "seed", "bins", "threads", "out", "bin_csv"});

    auto* exp = app.add_subcommand("export", "Export heatmap (PGM), warp mesh or scatter (CSV)");
    std::string kind;
    bool inverse = false;
    exp->add_option("kind", kind, "heatmap | mesh | scatter")
        ->required()
        ->check(CLI::IsMember({"heatmap", "mesh", "scatter"}));
    exp->add_flag("--inverse", inverse, "Mesh: draw the inverse map");
    export_flags.attach(*exp, {"density", "ratio", "grid", "map", "n", "seed", "stride", "threads", "out"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(oit::ExitCode::Usage);
    }

    try {
        if (build->parsed()) {
            const auto result = oit::cmd_build(build_flags.resolve(*build), std::cerr);
            (void)result;
        } else if (sample->parsed()) {
            oit::cmd_sample(sample_flags.resolve(*sample), std::cout, std::cerr);
        } else if (validate->parsed()) {
            const auto v = oit::cmd_validate(validate_flags.resolve(*validate), std::cout, std::cerr);
            if (!v.passed) return static_cast<int>(oit::ExitCode::Validation);
        } else if (exp->parsed()) {
            const auto k = kind == "heatmap" ? oit::ExportKind::Heatmap
                           : kind == "mesh"  ? oit::ExportKind::Mesh
                                             : oit::ExportKind::Scatter;
            oit::cmd_export(export_flags.resolve(*exp), k, inverse, std::cout, std::cerr);
        }
    } catch (const oit::Error& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return static_cast<int>(oit::ExitCode::Numerical);
    }
    return 0;
}
