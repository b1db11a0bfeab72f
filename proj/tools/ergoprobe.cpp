#include "ergoprobe/config.hpp"
#include "ergoprobe/experiments.hpp"
#include "ergoprobe/io.hpp"
#include "ergoprobe/parallel.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

using namespace ergoprobe;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool dry_run = false;
};

int execute(ExperimentKind kind, const Options& opt) {
    ExperimentConfig cfg;
    try {
        if (opt.config_path.empty()) {
            cfg = default_config(kind);
        } else {
            cfg = load_config(opt.config_path);
            if (cfg.experiment != kind)
                throw ConfigError("config '" + opt.config_path + "' is for experiment " +
                                  to_string(cfg.experiment) + ", not " + to_string(kind));
        }
        if (opt.seed_set)
            cfg.master_seed = opt.seed;
        if (!opt.out_dir.empty())
            cfg.output_dir = opt.out_dir;
        cfg.validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }

    const auto grid = make_grid(cfg);
    if (opt.dry_run) {
        std::printf("experiment %s, %zu grid points, master_seed %llu\n", to_string(cfg.experiment), grid.size(),
                    static_cast<unsigned long long>(*cfg.master_seed));
        std::printf("index,n_total,g,beta,seed\n");
        for (const auto& gp : grid)
            std::printf("%zu,%d,%s,%s,%llu\n", gp.index, gp.n_total, format_double(gp.g).c_str(),
                        format_double(gp.beta).c_str(), static_cast<unsigned long long>(gp.seed));
        return 0;
    }

    const unsigned workers = worker_count();
    const SweepResult res = run(cfg, workers);
    for (const auto& path : write_outputs(res, cfg.output_dir))
        std::printf("wrote %s\n", path.c_str());
    for (const auto& f : res.fits) {
        std::printf("fit %s (%s): ", f.label.c_str(), f.kind.c_str());
        for (const auto& [k, v] : f.fit.params)
            std::printf("%s=%.6g ", k.c_str(), v);
        std::printf("R^2=%.6f\n", f.fit.r_squared);
    }
    for (const auto& p : res.points)
        if (p.failed)
            std::fprintf(stderr, "point %zu failed: %s\n", p.grid.index, p.diagnostic.c_str());
    return res.any_failed() ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probe-qubit thermalization laboratory: fluctuation-dissipation sweeps on random-matrix and "
                 "spin-chain models"};
    app.require_subcommand(1);
    Options opt;
    std::string keys = "Config keys:\n";
    for (const auto& [k, doc] : config_keys())
        keys += "  " + k + ": " + doc + "\n";
    app.footer(keys);

    const std::pair<const char*, ExperimentKind> commands[] = {
        {"rmt-fdt", ExperimentKind::rmt_fdt},   {"chain-fdt", ExperimentKind::chain_fdt},
        {"scaling", ExperimentKind::scaling},   {"decay", ExperimentKind::decay},
        {"correlators", ExperimentKind::correlators},
    };
    ExperimentKind chosen = ExperimentKind::rmt_fdt;
    for (const auto& [name, kind] : commands) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + to_string(kind) + " experiment");
        sub->add_option("--config", opt.config_path, "flat key = value config file");
        sub->add_option("--out-dir", opt.out_dir, "output directory (overrides output_dir)");
        sub->add_option_function<std::uint64_t>(
            "--seed", [&opt](const std::uint64_t& s) { opt.seed = s; opt.seed_set = true; },
            "master seed (overrides master_seed)");
        sub->add_flag("--dry-run", opt.dry_run, "print the sweep grid and exit");
        sub->callback([&chosen, kind = kind] { chosen = kind; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    try {
        return execute(chosen, opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
