#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>

#include "doctest.h"
#include "invasion/simulation.hpp"

using namespace invasion;

namespace {

// Every motility, source and secretion rate switched off.
ModelParams frozen_params() {
    ModelParams p;
    for (const char* name : {"D_c", "D_cM1", "D_cM2", "D_cF", "D_M", "D_MF", "S_max", "S_min", "S_cl", "S_cF",
                             "S_cM", "S_M1M", "S_M2M", "S_Mc", "S_Msigma", "mu_c", "mu_cM1", "mu_cM2", "M_0", "mu_M",
                             "mu_MF", "d_c", "d_cM1", "d_M", "d_sigma", "beta_lc", "beta_lM1", "beta_lM2", "beta_Fc",
                             "beta_FM1", "beta_FM2", "gamma_0", "gamma_M2", "p_12", "p_21", "alpha_c", "alpha_M1",
                             "alpha_M2"})
        set_param(p, name, 0.0);
    return p;
}

bool same_bits(const Field& a, const Field& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (std::memcmp(&a[k], &b[k], sizeof(double)) != 0) return false;
    return true;
}

}  // namespace

TEST_CASE("config parsing accepts the documented keys") {
    const ExperimentSpec s = parse_spec(R"({
        "params": {"beta": 0.7875, "fibre_pattern": "uniform"},
        "stages": 3, "beta_values": [0.75, 0.825], "rp_values": [0, 1], "tp_values": [0, 5],
        "secretion_preset": ["high", "low"], "seed": 7, "output_dir": "x", "snapshot_every": 2, "jobs": 2})");
    CHECK(s.params.beta == 0.7875);
    CHECK(s.params.fibre_pattern == "uniform");
    CHECK(s.stages == 3);
    CHECK(s.beta_values.size() == 2);
    CHECK(s.rp_values[1] == 1.0);
    CHECK(s.tp_values[1] == 5.0);
    CHECK(s.secretion_presets == std::vector<std::string>{"high", "low"});
    CHECK(s.seed == 7);
    CHECK(s.output_dir == "x");
    CHECK(s.snapshot_every == 2);
    CHECK(s.jobs == 2);
    CHECK(parse_spec(R"({"secretion_preset": "medium"})").secretion_presets.front() == "medium");
}

TEST_CASE("config parsing rejects bad input") {
    CHECK_THROWS_AS(parse_spec(R"({"stagez": 3})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"params": {"not_a_param": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"params": {"beta": "high"}})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"stages": 2.5})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"stages": -1})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"rp_values": [-1]})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"tp_values": [-0.5]})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"beta_values": [1.5]})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"secretion_preset": "extreme"})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"seed": -3})"), ConfigError);
    CHECK_THROWS_AS(parse_spec("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_spec("{not json"), ConfigError);
    CHECK_THROWS_AS(load_spec("/nonexistent/spec.json"), ConfigError);
}

TEST_CASE("parameters are validated before a run") {
    ModelParams p;
    p.D_m = 0.0;
    CHECK_THROWS_AS(run_simulation(p, 1, 1), ConfigError);
    p = ModelParams{};
    p.beta = 1.0;
    CHECK_THROWS_AS(run_simulation(p, 1, 1), ConfigError);
    CHECK_THROWS_AS(run_simulation(ModelParams{}, -1, 1), ConfigError);
}

TEST_CASE("secretion presets") {
    ModelParams p;
    apply_preset(p, secretion_preset("medium"));
    CHECK(p.beta_lc == 2.0);
    CHECK(p.beta_Fc == 1.0);
    CHECK(p.alpha_c == 0.42);
    CHECK_THROWS_AS(secretion_preset(""), ConfigError);
}

TEST_CASE("zero stages records only the initial state") {
    const ModelParams p;
    const RunResult r = run_simulation(p, 0, 1);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.checks.empty());

    const MacroGrid g = simulation_grid(p);
    const Mask tumour = initial_tumour(g);
    const TumourState u0 = initial_state(g, tumour);
    double sum = 0.0;
    for (std::size_t k = 0; k < u0.c.size(); ++k) sum += u0.c[k];
    CHECK(r.rows[0].mass == doctest::Approx(g.h * g.h * sum).epsilon(1e-14));
    CHECK(r.rows[0].stage == 0);
    CHECK(r.rows[0].time == 0.0);
    // nodes within 0.25 of the centre: 8 grid spacings
    const auto nodes = std::count(tumour.data.begin(), tumour.data.end(), 1);
    CHECK(r.rows[0].spread == doctest::Approx(g.h * g.h * static_cast<double>(nodes)));
    CHECK(tumour(64, 64) == 1);
    CHECK(tumour(72, 64) == 1);
    CHECK(tumour(73, 64) == 0);
}

TEST_CASE("initial state") {
    const ModelParams p;
    const MacroGrid g = simulation_grid(p);
    const Mask tumour = initial_tumour(g);
    const TumourState u = initial_state(g, tumour);
    CHECK(u.c(64, 64) == doctest::Approx(0.5));
    CHECK(u.c(0, 0) == 0.0);
    CHECK(u.m1(64, 64) == 1e-2);
    CHECK(u.m2(0, 64) == 0.0);
    for (std::size_t k = 0; k < u.l.size(); ++k) {
        CHECK_MESSAGE(u.l[k] + u.c[k] <= 1.0 + 1e-15, k);
        CHECK(u.sigma[k] == 0.4);
    }
}

TEST_CASE("all rates zero leaves the state bit-identical") {
    const ModelParams p = frozen_params();
    const RunResult r0 = run_simulation(p, 0, 3);
    const RunResult r = run_simulation(p, 3, 3);
    for (auto [a, b] : {std::pair{&r0.state.c, &r.state.c}, {&r0.state.m1, &r.state.m1}, {&r0.state.m2, &r.state.m2},
                        {&r0.state.l, &r.state.l}, {&r0.state.f, &r.state.f}, {&r0.state.sigma, &r.state.sigma},
                        {&r0.state.theta_x, &r.state.theta_x}, {&r0.state.theta_y, &r.state.theta_y}})
        CHECK(same_bits(*a, *b));
    CHECK(r.tumour == r0.tumour);
    for (const StageChecks& c : r.checks) {
        CHECK(c.added == 0);
        CHECK(c.moving == 0);
        CHECK(c.fibre_mass_error == 0.0);
    }
}

TEST_CASE("short baseline run keeps the per-stage invariants") {
    const ModelParams p;
    const RunResult r = run_simulation(p, 4, 1);
    REQUIRE(r.rows.size() == 5);
    REQUIRE(r.checks.size() == 4);
    for (std::size_t s = 1; s < r.rows.size(); ++s) {
        const MetricsRow& row = r.rows[s];
        CHECK(row.stage == static_cast<int>(s));
        CHECK(row.time == doctest::Approx(0.1 * s));
        CHECK(std::isfinite(row.mass));
        CHECK(row.mass > 0.0);
        CHECK(row.spread >= r.rows[s - 1].spread);
        CHECK(row.min_c >= 0.0);
        CHECK(row.min_sigma >= 0.0);
        CHECK(row.max_sigma <= 0.4 + 1e-12);
        CHECK(row.clipped_mass <= 0.01 * row.mass);
        CHECK(row.sor_iters > 0);
    }
    for (const StageChecks& c : r.checks) {
        CHECK(c.fibre_mass_error <= 1e-12);
        CHECK(c.fibre_min >= 0.0);
        CHECK(c.fibre_max <= p.f_max);
        CHECK(c.fibre_amount_gap <= 1e-12);
        CHECK(c.mde_identity_error <= 1e-10);
        CHECK(c.domain_monotone);
        if (c.patches > 0) {
            CHECK(c.q_min >= 0.0);
            CHECK(c.q_max <= 1.0);
        }
    }
}

TEST_CASE("identical seeds give identical metrics") {
    ModelParams p;
    p.R_p = p.h_L;
    const std::string a = metrics_csv(run_simulation(p, 3, 11).rows);
    const std::string b = metrics_csv(run_simulation(p, 3, 11).rows);
    CHECK(a == b);
}

TEST_CASE("re-polarisation that never switches on matches no re-polarisation") {
    const int stages = 3;
    ModelParams off;
    off.p_21 = 0.0;
    const std::string baseline = metrics_csv(run_simulation(off, stages, 5).rows);

    ModelParams late;  // starts exactly at the final time
    late.R_p = late.h_L;
    late.t_p = stages * late.dt_stage;
    CHECK(metrics_csv(run_simulation(late, stages, 5).rows) == baseline);

    ModelParams zero_radius = off;  // rp {0} with no re-polarisation rate
    zero_radius.R_p = 0.0;
    CHECK(metrics_csv(run_simulation(zero_radius, stages, 5).rows) == baseline);
}

TEST_CASE("metrics and sweep tables") {
    const std::string& h = metrics_header();
    CHECK(h.rfind("stage,time,mass,spread,min_c,max_c", 0) == 0);
    const std::string tail = "clipped_mass,alpha_c,alpha_m1,alpha_m2,sor_iters";
    REQUIRE(h.size() >= tail.size());
    CHECK(h.substr(h.size() - tail.size()) == tail);

    MetricsRow row;
    row.stage = 2;
    row.sor_iters = 17;
    const std::string csv = metrics_csv({row});
    CHECK(csv.rfind(h + "\n2,", 0) == 0);
    CHECK(csv.substr(csv.size() - 4) == ",17\n");

    SweepCell ok{0.75, 1.0, 0.0, "high", true, "", 1.5, 0.25};
    SweepCell bad{0.825, 2.0, 5.0, "low", false, "stage 3: blew, up\nhere", 0.0, 0.0};
    const std::string table = sweep_csv({ok, bad});
    CHECK(table.rfind("beta,rp,tp,preset,status,final_mass,final_spread,error\n", 0) == 0);
    CHECK(table.find(",high,ok,") != std::string::npos);
    CHECK(table.find(",low,failed,") != std::string::npos);
    CHECK(table.find("blew; up here") != std::string::npos);
}

TEST_CASE("sweeps record failures and keep going") {
    ExperimentSpec spec;
    spec.stages = 1;
    spec.beta_values = {0.75};
    spec.rp_values = {0.0, 1.0};
    spec.params.blowup = 1e-9;  // every run trips the blow-up guard
    const auto failed = run_rp_sweep(spec);
    REQUIRE(failed.size() == 2);
    for (const SweepCell& c : failed) {
        CHECK_FALSE(c.ok);
        CHECK(c.error.find("stage 1") != std::string::npos);
    }

    spec.params = ModelParams{};
    spec.tp_values = {0.0, 1.0};
    spec.secretion_presets = {"high", "low"};
    spec.jobs = 2;
    const auto cells = run_tp_sweep(spec);
    REQUIRE(cells.size() == 4);
    CHECK(cells[1].preset == "low");
    CHECK(cells[2].tp == 1.0);
    for (const SweepCell& c : cells) CHECK(c.ok);
}

TEST_CASE("snapshots are written at the cadence") {
    const auto dir = std::filesystem::temp_directory_path() / "invasion_snapshot_test";
    std::filesystem::remove_all(dir);
    RunOptions opt;
    opt.snapshot_dir = dir.string();
    opt.snapshot_every = 2;
    int seen = 0;
    opt.on_stage = [&](const MetricsRow&) { ++seen; };
    run_simulation(ModelParams{}, 2, 1, opt);
    CHECK(seen == 3);
    for (const char* name : {"c_00000.csv", "c_00002.csv", "sigma_00002.csv", "theta_x_00002.csv",
                             "boundary_00002.csv"})
        CHECK_MESSAGE(std::filesystem::exists(dir / name), name);
    CHECK_FALSE(std::filesystem::exists(dir / "c_00001.csv"));
    std::filesystem::remove_all(dir);
}
