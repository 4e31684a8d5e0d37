#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "invasion/adhesion.hpp"
#include "invasion/field.hpp"
#include "invasion/grid.hpp"
#include "invasion/nutrients.hpp"
#include "invasion/params.hpp"
#include "invasion/state.hpp"
#include "invasion/weno.hpp"

namespace invasion {

// Everything the right-hand side needs that stays fixed during one stage.
struct MacroContext {
    const MacroGrid* grid = nullptr;
    const DomainMask* mask = nullptr;
    const ModelParams* params = nullptr;
    const SensingKernels* kernels = nullptr;
    WenoConfig weno;
    Field influx;          // M_0 times the mollified outer-boundary indicator, on the tumour
    Field repolarisation;  // mollified re-polarisation domain indicator, on the tumour
    bool repolarisation_on = false;
    AdhesionOptions adhesion;
};

// Builds the per-stage context; `stage_time` decides whether re-polarisation is active.
MacroContext make_context(const MacroGrid& grid, const DomainMask& mask, const ModelParams& params,
                          const SensingKernels& kernels, double stage_time, std::uint64_t seed);

NutrientParams nutrient_params(const ModelParams& p);

Field diffusion_coeff_c(const TumourState& u, const ModelParams& p);
Field diffusion_coeff_M(const TumourState& u, const ModelParams& p);

struct SourceTerms {
    Field P_c, Q_c, P_M1, P_M2, Q_M1, Q_M2, T_12, T_21, M_I;
    Field l, f;  // full matrix tendencies
};

SourceTerms source_terms(const TumourState& u, const MacroContext& ctx);

struct AdhesionFluxes {
    VectorField c, m1, m2;  // density times adhesion velocity
};

AdhesionFluxes adhesion_fluxes(const TumourState& u, const MacroContext& ctx);

struct Speeds {
    double c_x = 0, c_y = 0, m1_x = 0, m1_y = 0, m2_x = 0, m2_y = 0;
    int capped = 0;  // number of estimates that hit the iteration cap
    double max_c() const { return std::max(c_x, c_y); }
    double max_m1() const { return std::max(m1_x, m1_y); }
    double max_m2() const { return std::max(m2_x, m2_y); }
    double max() const;
};

// Warm-start vectors carried between stages, one per component and direction.
struct SpeedMemory {
    std::vector<int> nodes;
    std::vector<std::vector<double>> vectors = std::vector<std::vector<double>>(6);
};

Speeds propagation_speeds(const TumourState& u, const MacroContext& ctx, SpeedMemory* memory = nullptr);

struct Tendencies {
    Field c, m1, m2, l, f;
};

Tendencies rhs(const TumourState& u, const MacroContext& ctx, const Speeds& alpha);

struct StageDiagnostics {
    int substeps = 0;
    double clipped_mass = 0.0;
    long long sor_iterations = 0;
    double sigma_min = 0.0, sigma_max = 0.0;  // over every nutrient solve in the stage
    double max_rho = 0.0;
};

struct BlowUpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Substep count from the advective and diffusive limits, floored at min_substeps.
int choose_substeps(const TumourState& u, const MacroContext& ctx, const Speeds& alpha, double dt_stage);

// Heun substeps; sigma is re-solved at the start of each substep.
TumourState step_stage(const TumourState& u, const MacroContext& ctx, const Speeds& alpha, double dt_stage,
                       int substeps, StageDiagnostics* diag = nullptr);

}  // namespace invasion
