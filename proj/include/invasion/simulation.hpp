#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "invasion/fibre.hpp"
#include "invasion/grid.hpp"
#include "invasion/params.hpp"
#include "invasion/state.hpp"

namespace invasion {

struct SecretionPreset {
    std::string name;
    double beta_lc, beta_Fc, alpha_c;
};

// "high", "medium" or "low"; throws ConfigError otherwise.
SecretionPreset secretion_preset(const std::string& name);
void apply_preset(ModelParams& p, const SecretionPreset& preset);

struct ExperimentSpec {
    ModelParams params;
    int stages = 50;
    std::vector<double> beta_values{0.75};
    std::vector<double> rp_values{0.0};  // multiples of the grid spacing
    std::vector<double> tp_values{0.0};  // multiples of the stage length
    std::vector<std::string> secretion_presets{"high"};
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    int snapshot_every = 0;  // 0 disables snapshots
    int jobs = 1;            // concurrent sweep cells

    void validate() const;
};

// Parses a JSON document; unknown keys are rejected with ConfigError.
ExperimentSpec parse_spec(const std::string& json_text);
ExperimentSpec load_spec(const std::string& path);

struct MetricsRow {
    int stage = 0;
    double time = 0.0;
    double mass = 0.0, spread = 0.0;
    double min_c = 0, max_c = 0, min_m1 = 0, max_m1 = 0, min_m2 = 0, max_m2 = 0;
    double min_l = 0, max_l = 0, min_f = 0, max_f = 0, min_sigma = 0, max_sigma = 0;
    double clipped_mass = 0.0;
    double alpha_c = 0, alpha_m1 = 0, alpha_m2 = 0;
    long long sor_iters = 0;
};

const std::string& metrics_header();
std::string metrics_csv(const std::vector<MetricsRow>& rows);

// Per-stage checks kept alongside the metrics.
struct StageChecks {
    int stage = 0;
    int substeps = 0;
    double fibre_mass_error = 0.0;  // relative change of the total micro-fibre mass
    double fibre_min = 0.0, fibre_max = 0.0;
    double fibre_amount_gap = 0.0;  // max |F - block mean|
    double mde_identity_error = 0.0;
    double q_min = 1.0, q_max = 0.0;
    int patches = 0, moving = 0, added = 0, fallback_contours = 0;
    bool domain_monotone = true;
    double max_rho = 0.0;
    int capped_speeds = 0;
};

std::string checks_csv(const std::vector<StageChecks>& checks);

struct RunResult {
    std::vector<MetricsRow> rows;
    std::vector<StageChecks> checks;
    TumourState state;
    Mask tumour;
};

struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    std::string snapshot_dir;  // empty disables snapshots
    int snapshot_every = 0;
    std::function<void(const MetricsRow&)> on_stage;
};

MacroGrid simulation_grid(const ModelParams& p);
Mask initial_tumour(const MacroGrid& grid);
TumourState initial_state(const MacroGrid& grid, const Mask& tumour);

// One run with the parameters as given. Errors from the modules are rethrown
// as SimulationError naming the stage.
RunResult run_simulation(const ModelParams& params, int stages, std::uint64_t seed, const RunOptions& opt = {});

struct SweepCell {
    double beta = 0.0;
    double rp = 0.0;  // multiples of h
    double tp = 0.0;  // multiples of dt_stage
    std::string preset;
    bool ok = false;
    std::string error;
    double final_mass = 0.0, final_spread = 0.0;
};

// beta x R_p with the first secretion preset; t_p from params.
std::vector<SweepCell> run_rp_sweep(const ExperimentSpec& spec);
// beta x t_p x preset; R_p from params.
std::vector<SweepCell> run_tp_sweep(const ExperimentSpec& spec);

std::string sweep_csv(const std::vector<SweepCell>& cells);

void write_text(const std::string& path, const std::string& text);

}  // namespace invasion
