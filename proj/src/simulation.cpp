#include "invasion/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "invasion/adhesion.hpp"
#include "invasion/macro.hpp"
#include "invasion/mde.hpp"

namespace invasion {

SecretionPreset secretion_preset(const std::string& name) {
    if (name == "high") return {name, 3.0, 1.5, 0.625};
    if (name == "medium") return {name, 2.0, 1.0, 0.42};
    if (name == "low") return {name, 1.0, 0.5, 0.21};
    throw ConfigError("unknown secretion preset '" + name + "'");
}

void apply_preset(ModelParams& p, const SecretionPreset& preset) {
    p.beta_lc = preset.beta_lc;
    p.beta_Fc = preset.beta_Fc;
    p.alpha_c = preset.alpha_c;
}

void ExperimentSpec::validate() const {
    params.validate();
    if (stages < 0) throw ConfigError("stages must be >= 0");
    for (double b : beta_values)
        if (!(b > 0.0 && b < 1.0)) throw ConfigError("beta values must lie in (0, 1)");
    for (double v : rp_values)
        if (!(v >= 0.0)) throw ConfigError("rp_values must be >= 0");
    for (double v : tp_values)
        if (!(v >= 0.0)) throw ConfigError("tp_values must be >= 0");
    if (secretion_presets.empty()) throw ConfigError("secretion_preset must name at least one preset");
    for (const auto& s : secretion_presets) secretion_preset(s);
    if (snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

namespace {

using nlohmann::json;

std::vector<double> number_list(const json& v, const char* key) {
    if (!v.is_array()) throw ConfigError(std::string(key) + " must be a list of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(std::string(key) + " must be a list of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace

ExperimentSpec parse_spec(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentSpec spec;
    for (const auto& [key, v] : doc.items()) {
        if (key == "params") {
            if (!v.is_object()) throw ConfigError("params must be an object");
            for (const auto& [name, x] : v.items()) {
                if (name == "fibre_pattern") {
                    if (!x.is_string()) throw ConfigError("fibre_pattern must be a string");
                    spec.params.fibre_pattern = x.get<std::string>();
                } else {
                    if (!x.is_number()) throw ConfigError("parameter '" + name + "' must be a number");
                    set_param(spec.params, name, x.get<double>());
                }
            }
        } else if (key == "stages") {
            if (!v.is_number_integer()) throw ConfigError("stages must be an integer");
            spec.stages = v.get<int>();
        } else if (key == "beta_values") {
            spec.beta_values = number_list(v, "beta_values");
        } else if (key == "rp_values") {
            spec.rp_values = number_list(v, "rp_values");
        } else if (key == "tp_values") {
            spec.tp_values = number_list(v, "tp_values");
        } else if (key == "secretion_preset") {
            spec.secretion_presets.clear();
            if (v.is_string()) {
                spec.secretion_presets.push_back(v.get<std::string>());
            } else if (v.is_array()) {
                for (const auto& s : v) {
                    if (!s.is_string()) throw ConfigError("secretion_preset entries must be strings");
                    spec.secretion_presets.push_back(s.get<std::string>());
                }
            } else {
                throw ConfigError("secretion_preset must be a string or a list of strings");
            }
        } else if (key == "seed") {
            if (!v.is_number_unsigned()) throw ConfigError("seed must be a nonnegative integer");
            spec.seed = v.get<std::uint64_t>();
        } else if (key == "output_dir") {
            if (!v.is_string()) throw ConfigError("output_dir must be a string");
            spec.output_dir = v.get<std::string>();
        } else if (key == "snapshot_every") {
            if (!v.is_number_integer()) throw ConfigError("snapshot_every must be an integer");
            spec.snapshot_every = v.get<int>();
        } else if (key == "jobs") {
            if (!v.is_number_integer()) throw ConfigError("jobs must be an integer");
            spec.jobs = v.get<int>();
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    spec.validate();
    return spec;
}

ExperimentSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

const std::string& metrics_header() {
    static const std::string header =
        "stage,time,mass,spread,min_c,max_c,min_m1,max_m1,min_m2,max_m2,min_l,max_l,min_f,max_f,"
        "min_sigma,max_sigma,clipped_mass,alpha_c,alpha_m1,alpha_m2,sor_iters";
    return header;
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
    std::string out = metrics_header() + "\n";
    for (const MetricsRow& r : rows) {
        out += std::to_string(r.stage);
        for (double v : {r.time, r.mass, r.spread, r.min_c, r.max_c, r.min_m1, r.max_m1, r.min_m2, r.max_m2, r.min_l,
                         r.max_l, r.min_f, r.max_f, r.min_sigma, r.max_sigma, r.clipped_mass, r.alpha_c, r.alpha_m1,
                         r.alpha_m2})
            out += "," + num(v);
        out += "," + std::to_string(r.sor_iters) + "\n";
    }
    return out;
}

std::string checks_csv(const std::vector<StageChecks>& checks) {
    std::string out =
        "stage,substeps,fibre_mass_error,fibre_min,fibre_max,fibre_amount_gap,mde_identity_error,q_min,q_max,patches,moving,added,"
        "fallback_contours,domain_monotone,max_rho,capped_speeds\n";
    for (const StageChecks& c : checks) {
        out += std::to_string(c.stage) + "," + std::to_string(c.substeps);
        for (double v : {c.fibre_mass_error, c.fibre_min, c.fibre_max, c.fibre_amount_gap, c.mde_identity_error, c.q_min, c.q_max})
            out += "," + num(v);
        for (int v : {c.patches, c.moving, c.added, c.fallback_contours, c.domain_monotone ? 1 : 0})
            out += "," + std::to_string(v);
        out += "," + num(c.max_rho) + "," + std::to_string(c.capped_speeds) + "\n";
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

MacroGrid simulation_grid(const ModelParams& p) { return build_grid(p.L, p.h_L); }

Mask initial_tumour(const MacroGrid& grid) {
    Mask m(grid.n);
    for (int j = 0; j < grid.n; ++j)
        for (int i = 0; i < grid.n; ++i)
            m(i, j) = std::hypot(grid.coord(i) - 2.0, grid.coord(j) - 2.0) <= 0.25 + 1e-12 ? 1 : 0;
    return m;
}

TumourState initial_state(const MacroGrid& grid, const Mask& tumour) {
    const double pi = std::numbers::pi;
    TumourState u(grid.n);
    for (int j = 0; j < grid.n; ++j)
        for (int i = 0; i < grid.n; ++i) {
            const double x = grid.coord(i), y = grid.coord(j);
            const double r2 = (x - 2.0) * (x - 2.0) + (y - 2.0) * (y - 2.0);
            const bool in = tumour(i, j) != 0;
            u.c(i, j) = in ? 0.5 * std::exp(-r2 / 0.02) : 0.0;
            u.m1(i, j) = in ? 1e-2 : 0.0;
            u.m2(i, j) = in ? 1e-2 : 0.0;
            const double s = std::sin(7.0 * pi * x * y);
            const double ratio_term = x > 0.0 ? std::sin(7.0 * pi * y / x) : 0.0;
            u.l(i, j) = std::min(0.5 + 0.25 * s * s * s * ratio_term, 1.0 - u.c(i, j));
            u.sigma(i, j) = 0.4;
        }
    return u;
}

namespace {

struct Range {
    double lo = std::numeric_limits<double>::infinity(), hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

MetricsRow measure(int stage, const TumourState& u, const DomainMask& mask, const MacroGrid& grid) {
    MetricsRow r;
    r.stage = stage;
    r.time = u.time;
    Range c, m1, m2, l, f, s;
    double mass = 0.0;
    for (std::size_t k = 0; k < u.c.size(); ++k) {
        if (!mask.inside[k]) continue;
        mass += u.c[k];
        c.add(u.c[k]);
        m1.add(u.m1[k]);
        m2.add(u.m2[k]);
        l.add(u.l[k]);
        f.add(u.f[k]);
        s.add(u.sigma[k]);
    }
    const double cell = grid.h * grid.h;
    r.mass = cell * mass;
    r.spread = cell * static_cast<double>(mask.count());
    std::tie(r.min_c, r.max_c) = std::pair{c.lo, c.hi};
    std::tie(r.min_m1, r.max_m1) = std::pair{m1.lo, m1.hi};
    std::tie(r.min_m2, r.max_m2) = std::pair{m2.lo, m2.hi};
    std::tie(r.min_l, r.max_l) = std::pair{l.lo, l.hi};
    std::tie(r.min_f, r.max_f) = std::pair{f.lo, f.hi};
    std::tie(r.min_sigma, r.max_sigma) = std::pair{s.lo, s.hi};
    return r;
}

void write_field(const std::string& path, const Field& f) {
    std::string text;
    text.reserve(f.size() * 20);
    char buf[32];
    for (int j = 0; j < f.n; ++j) {
        for (int i = 0; i < f.n; ++i) {
            std::snprintf(buf, sizeof buf, "%.12e", f(i, j));
            if (i) text += ',';
            text += buf;
        }
        text += '\n';
    }
    write_text(path, text);
}

void write_snapshot(const std::string& dir, int stage, const TumourState& u, const DomainMask& mask,
                    const MacroGrid& grid) {
    char tag[16];
    std::snprintf(tag, sizeof tag, "_%05d.csv", stage);
    const std::pair<const char*, const Field*> fields[] = {
        {"c", &u.c}, {"m1", &u.m1}, {"m2", &u.m2}, {"l", &u.l}, {"f", &u.f},
        {"sigma", &u.sigma}, {"theta_x", &u.theta_x}, {"theta_y", &u.theta_y}};
    for (const auto& [name, f] : fields) write_field(dir + "/" + name + tag, *f);
    std::string poly = "x,y\n";
    char buf[64];
    for (int node : mask.outer_boundary) {
        std::snprintf(buf, sizeof buf, "%.12e,%.12e\n", grid.coord(node % grid.n), grid.coord(node / grid.n));
        poly += buf;
    }
    write_text(dir + "/boundary" + tag, poly);
}

}  // namespace

RunResult run_simulation(const ModelParams& params, int stages, std::uint64_t seed, const RunOptions& opt) {
    params.validate();
    if (stages < 0) throw ConfigError("stages must be >= 0");
    const MacroGrid grid = simulation_grid(params);
    const SensingKernels kernels = build_sensing_kernels(params.R, params.sector_annuli, params.sector_exponent, grid);

    Mask tumour = initial_tumour(grid);
    DomainMask mask = compute_masks(tumour, grid);
    TumourState u = initial_state(grid, tumour);
    MicroFibreField micro = init_micro(params.fibre_pattern, params.fibre_ratio, u.l, grid, params.fibre_cells,
                                       params.r, params.f_max);
    extract_orientation(micro, u);

    RunResult result;
    const bool snapshots = !opt.snapshot_dir.empty() && opt.snapshot_every > 0;
    auto record = [&](MetricsRow row) {
        result.rows.push_back(row);
        if (opt.on_stage) opt.on_stage(row);
    };
    record(measure(0, u, mask, grid));
    if (snapshots) write_snapshot(opt.snapshot_dir, 0, u, mask, grid);

    SpeedMemory memory;
    for (int stage = 0; stage < stages; ++stage) {
        StageChecks chk;
        chk.stage = stage + 1;
        MetricsRow row;
        try {
            const double t0 = stage * params.dt_stage;
            const MacroContext ctx = make_context(grid, mask, params, kernels, t0, seed);
            const Speeds alpha = propagation_speeds(u, ctx, &memory);
            chk.capped_speeds = alpha.capped;
            const int substeps = choose_substeps(u, ctx, alpha, params.dt_stage);
            chk.substeps = substeps;
            StageDiagnostics diag;
            const Field f_old = u.f;
            u = step_stage(u, ctx, alpha, params.dt_stage, substeps, &diag);
            chk.max_rho = diag.max_rho;

            // fibre micro-scale: push macro degradation down, then rearrange
            scale_micro(micro, f_old, u.f);
            const Field f_macro = u.f;
            extract_orientation(micro, u);
            for (std::size_t k = 0; k < f_macro.size(); ++k)
                chk.fibre_amount_gap = std::max(chk.fibre_amount_gap, std::abs(u.f[k] - f_macro[k]));
            const MigrationFluxes flux = migration_fluxes(u, ctx);
            Field rx(grid.n), ry(grid.n);
            for (std::size_t k = 0; k < rx.size(); ++k) {
                if (!mask.inside[k]) continue;
                const auto r = rearrangement_vector(u.c[k], u.m1[k], u.m2[k], u.f[k], {flux.c.x[k], flux.c.y[k]},
                                                    {flux.m1.x[k], flux.m1.y[k]}, {flux.m2.x[k], flux.m2.y[k]},
                                                    {u.theta_x[k], u.theta_y[k]});
                rx[k] = r[0];
                ry[k] = r[1];
            }
            const double before = micro.total();
            rearrange_micro(micro, rx, ry, u.f, mask.inside);
            const double after = micro.total();
            chk.fibre_mass_error = before > 0.0 ? std::abs(after - before) / before : std::abs(after);
            const auto [lo, hi] = std::minmax_element(micro.f.begin(), micro.f.end());
            chk.fibre_min = *lo;
            chk.fibre_max = *hi;
            extract_orientation(micro, u);

            // boundary micro-scale and domain update
            const BoundaryStage bs = boundary_stage(u, mask, grid, params, params.dt_stage);
            chk.patches = bs.patches;
            chk.moving = bs.moving;
            chk.q_min = bs.q_min;
            chk.q_max = bs.q_max;
            chk.mde_identity_error = bs.mean_identity_error;
            const MovementResult moved = apply_boundary_movement(mask, grid, bs.decisions);
            chk.added = moved.added;
            chk.fallback_contours = moved.fallback_contours;
            for (std::size_t k = 0; k < tumour.size(); ++k) {
                if (tumour[k] && !moved.tumour[k]) chk.domain_monotone = false;
                if (!tumour[k] && moved.tumour[k]) u.c[k] = u.m1[k] = u.m2[k] = 0.0;
            }
            tumour = moved.tumour;
            mask = compute_masks(tumour, grid);
            u.time = (stage + 1) * params.dt_stage;

            row = measure(stage + 1, u, mask, grid);
            row.min_sigma = diag.sigma_min;
            row.max_sigma = diag.sigma_max;
            row.clipped_mass = diag.clipped_mass;
            row.alpha_c = alpha.max_c();
            row.alpha_m1 = alpha.max_m1();
            row.alpha_m2 = alpha.max_m2();
            row.sor_iters = diag.sor_iterations;
        } catch (const std::exception& e) {
            throw SimulationError("stage " + std::to_string(stage + 1) + ": " + e.what());
        }
        result.checks.push_back(chk);
        record(row);
        if (snapshots && (stage + 1) % opt.snapshot_every == 0)
            write_snapshot(opt.snapshot_dir, stage + 1, u, mask, grid);
    }
    result.state = std::move(u);
    result.tumour = std::move(tumour);
    return result;
}

namespace {

std::vector<SweepCell> run_cells(std::vector<SweepCell> cells, const ExperimentSpec& spec) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) {
            SweepCell& cell = cells[k];
            ModelParams p = spec.params;
            p.beta = cell.beta;
            p.R_p = cell.rp * p.h_L;
            p.t_p = cell.tp * p.dt_stage;
            try {
                apply_preset(p, secretion_preset(cell.preset));
                const RunResult r = run_simulation(p, spec.stages, spec.seed);
                cell.final_mass = r.rows.back().mass;
                cell.final_spread = r.rows.back().spread;
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }
    };
    const int jobs = std::max(1, std::min<int>(spec.jobs, static_cast<int>(cells.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return cells;
}

}  // namespace

std::vector<SweepCell> run_rp_sweep(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<SweepCell> cells;
    for (double b : spec.beta_values)
        for (double rp : spec.rp_values) {
            SweepCell c;
            c.beta = b;
            c.rp = rp;
            c.tp = spec.params.t_p / spec.params.dt_stage;
            c.preset = spec.secretion_presets.front();
            cells.push_back(c);
        }
    return run_cells(std::move(cells), spec);
}

std::vector<SweepCell> run_tp_sweep(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<SweepCell> cells;
    for (double b : spec.beta_values)
        for (double tp : spec.tp_values)
            for (const auto& preset : spec.secretion_presets) {
                SweepCell c;
                c.beta = b;
                c.rp = spec.params.R_p / spec.params.h_L;
                c.tp = tp;
                c.preset = preset;
                cells.push_back(c);
            }
    return run_cells(std::move(cells), spec);
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
    std::string out = "beta,rp,tp,preset,status,final_mass,final_spread,error\n";
    for (const SweepCell& c : cells) {
        std::string err = c.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        out += num(c.beta) + "," + num(c.rp) + "," + num(c.tp) + "," + c.preset + "," + (c.ok ? "ok" : "failed") +
               "," + num(c.final_mass) + "," + num(c.final_spread) + "," + err + "\n";
    }
    return out;
}

}  // namespace invasion
