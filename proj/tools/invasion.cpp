// Command line front end: single runs, the two sweeps and a quick self-test.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "invasion/grid.hpp"
#include "invasion/selftest.hpp"
#include "invasion/simulation.hpp"

using namespace invasion;

namespace {

ExperimentSpec spec_from(const std::string& config, std::uint64_t seed, bool seed_given, int snapshots,
                         bool snapshots_given) {
    ExperimentSpec spec = config.empty() ? ExperimentSpec{} : load_spec(config);
    if (seed_given) spec.seed = seed;
    if (snapshots_given) spec.snapshot_every = snapshots;
    spec.validate();
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiscale tumour invasion simulator"};
    app.require_subcommand(1);

    std::string config, out;
    std::uint64_t seed = 1;
    int snapshots = 0;
    bool quiet = false;
    auto* seed_opt = app.add_option("--seed", seed, "seed for the power-iteration start vectors");
    auto* snap_opt = app.add_option("--snapshots", snapshots, "write field snapshots every k stages (0 = off)");

    auto* run = app.add_subcommand("run", "single simulation with the configured parameters");
    run->add_option("--config", config, "JSON experiment file");
    run->add_option("--out", out, "output directory (overrides the config)");
    run->add_flag("--quiet", quiet, "no per-stage progress");

    auto* rp = app.add_subcommand("sweep-rp", "beta x re-polarisation radius sweep");
    rp->add_option("--config", config, "JSON experiment file")->required();
    rp->add_option("--out", out, "output directory (overrides the config)");

    auto* tp = app.add_subcommand("sweep-tp", "beta x start time x secretion preset sweep");
    tp->add_option("--config", config, "JSON experiment file")->required();
    tp->add_option("--out", out, "output directory (overrides the config)");

    auto* self = app.add_subcommand("selftest", "fast operator oracle checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (self->parsed()) return run_selftest(std::cout) ? 0 : 1;

        ExperimentSpec spec = spec_from(config, seed, seed_opt->count() > 0, snapshots, snap_opt->count() > 0);
        if (!out.empty()) spec.output_dir = out;
        std::filesystem::create_directories(spec.output_dir);

        if (run->parsed()) {
            RunOptions opt;
            if (spec.snapshot_every > 0) {
                opt.snapshot_dir = spec.output_dir + "/snapshots";
                opt.snapshot_every = spec.snapshot_every;
            }
            if (!quiet)
                opt.on_stage = [](const MetricsRow& r) {
                    std::fprintf(stderr, "stage %3d  t=%.3f  mass=%.6e  spread=%.6e\n", r.stage, r.time, r.mass,
                                 r.spread);
                };
            const RunResult r = run_simulation(spec.params, spec.stages, spec.seed, opt);
            write_text(spec.output_dir + "/metrics.csv", metrics_csv(r.rows));
            write_text(spec.output_dir + "/checks.csv", checks_csv(r.checks));
            std::cout << "wrote " << spec.output_dir << "/metrics.csv\n";
            return 0;
        }
        const bool is_rp = rp->parsed();
        const auto cells = is_rp ? run_rp_sweep(spec) : run_tp_sweep(spec);
        const std::string path = spec.output_dir + (is_rp ? "/sweep_rp.csv" : "/sweep_tp.csv");
        write_text(path, sweep_csv(cells));
        int failed = 0;
        for (const auto& c : cells) failed += c.ok ? 0 : 1;
        std::cout << "wrote " << path << " (" << cells.size() - failed << " ok, " << failed << " failed)\n";
        return failed ? 2 : 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
