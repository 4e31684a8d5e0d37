#include "invasion/params.hpp"

#include <cmath>
#include <variant>

namespace invasion {

namespace {

using Slot = std::variant<double ModelParams::*, int ModelParams::*>;
struct Entry {
    const char* name;
    Slot slot;
};

#define P(x) Entry{#x, &ModelParams::x}
const Entry kEntries[] = {
    P(D_c), P(D_cM1), P(D_cM2), P(D_cF), P(D_M), P(D_MF), P(D_sigma), P(D_m),
    P(S_max), P(S_min), P(S_cl), P(S_cF), P(S_cM), P(S_M1M), P(S_M2M), P(S_Mc), P(S_Msigma),
    P(mu_c), P(mu_cM1), P(mu_cM2), P(M_0), P(mu_M), P(mu_MF), P(d_c), P(d_cM1), P(d_M), P(d_sigma),
    P(beta_lc), P(beta_lM1), P(beta_lM2), P(beta_Fc), P(beta_FM1), P(beta_FM2), P(gamma_0), P(gamma_M2),
    P(p_12), P(p_21), P(t_p), P(R_p),
    P(sigma_nor), P(sigma_p), P(sigma_n), P(psi_p_max), P(psi_d_max), P(psi_dM_min), P(psi_M_max), P(psi_M_min),
    P(alpha_c), P(alpha_M1), P(alpha_M2),
    P(beta), P(R), P(r), P(f_max), P(h_L), P(eps), P(delta), P(L),
    P(rho_influx), P(rho_repol), P(gamma_h), P(mde_band), P(fibre_ratio),
    P(dt_stage), P(cfl_adv), P(cfl_diff), P(blowup), P(min_substeps),
    P(sor_omega), P(sor_tol), P(sor_max_iters), P(mde_sor_omega), P(mde_sor_tol),
    P(mde_cells), P(mde_dyadic_level), P(mde_substeps), P(fibre_cells), P(sector_annuli), P(sector_exponent),
    P(weno_p), P(weno_eps), P(power_tol), P(power_max_iters),
};
#undef P

const Entry* find(const std::string& name) {
    for (const auto& e : kEntries)
        if (name == e.name) return &e;
    return nullptr;
}

}  // namespace

std::vector<std::string> param_names() {
    std::vector<std::string> out;
    for (const auto& e : kEntries) out.emplace_back(e.name);
    return out;
}

void set_param(ModelParams& p, const std::string& name, double value) {
    const Entry* e = find(name);
    if (!e) throw ConfigError("unknown parameter '" + name + "'");
    if (auto d = std::get_if<double ModelParams::*>(&e->slot)) {
        p.*(*d) = value;
    } else {
        if (value != std::floor(value)) throw ConfigError("parameter '" + name + "' must be an integer");
        p.*std::get<int ModelParams::*>(e->slot) = static_cast<int>(value);
    }
}

double get_param(const ModelParams& p, const std::string& name) {
    const Entry* e = find(name);
    if (!e) throw ConfigError("unknown parameter '" + name + "'");
    if (auto d = std::get_if<double ModelParams::*>(&e->slot)) return p.*(*d);
    return p.*std::get<int ModelParams::*>(e->slot);
}

EffectParams ModelParams::effects() const {
    return {sigma_n, sigma_p, sigma_nor, psi_p_max, psi_d_max, psi_dM_min, psi_M_max, psi_M_min};
}

AdhesionStrengths ModelParams::strengths() const {
    AdhesionStrengths s;
    s.S_min = S_min;
    s.S_max = S_max;
    s.S_cl = S_cl;
    s.S_cF = S_cF;
    s.S_cM = S_cM;
    s.S_Mc = S_Mc;
    s.S_Msigma = S_Msigma;
    s.S_M1M = S_M1M;
    s.S_M2M = S_M2M;
    return s;
}

WenoConfig ModelParams::weno(std::uint64_t seed) const {
    WenoConfig w;
    w.p = weno_p;
    w.eps = weno_eps;
    w.power_tol = power_tol;
    w.power_max_iters = power_max_iters;
    w.seed = seed;
    return w;
}

void ModelParams::validate() const {
    for (const auto& e : kEntries)
        if (!(get_param(*this, e.name) >= 0.0)) throw ConfigError(std::string("parameter '") + e.name + "' must be >= 0");
    effects().validate();
    if (!(D_m > 0.0)) throw ConfigError("MDE diffusion coefficient D_m must be positive");
    if (!(h_L > 0.0 && dt_stage > 0.0)) throw ConfigError("h_L and dt_stage must be positive");
    if (std::abs(delta - h_L) > 1e-12) throw ConfigError("fibre micro-domain side delta must equal h_L");
    if (!(sor_omega > 0.0 && sor_omega < 2.0) || !(mde_sor_omega > 0.0 && mde_sor_omega < 2.0))
        throw ConfigError("SOR relaxation must lie in (0, 2)");
    if (fibre_cells < 1 || fibre_cells % 2 == 0) throw ConfigError("fibre_cells must be odd");
    if (mde_cells % (1 << mde_dyadic_level) != 0) throw ConfigError("mde_cells must be divisible by 2^mde_dyadic_level");
    if (min_substeps < 1 || mde_substeps < 1) throw ConfigError("substep counts must be >= 1");
    if (!(mde_band > 0.0 && mde_band < gamma_h)) throw ConfigError("need 0 < mde_band < gamma_h");
    if (!(fibre_ratio < 1.0)) throw ConfigError("fibre_ratio must be < 1");
    if (fibre_pattern != "cross" && fibre_pattern != "offset-cross" && fibre_pattern != "uniform")
        throw ConfigError("fibre_pattern must be 'cross', 'offset-cross' or 'uniform'");
    if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("beta must lie in (0, 1)");
}

}  // namespace invasion
