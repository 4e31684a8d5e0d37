#pragma once

#include <string>
#include <vector>

#include "invasion/adhesion.hpp"
#include "invasion/effects.hpp"
#include "invasion/grid.hpp"
#include "invasion/weno.hpp"

namespace invasion {

struct ModelParams {
    // diffusion
    double D_c = 1e-4, D_cM1 = 4.5, D_cM2 = 1.8, D_cF = 8.0;
    double D_M = 5e-5, D_MF = 16.0, D_sigma = 1.0, D_m = 2.5e-3;
    // adhesion
    double S_max = 0.5, S_min = 0.01, S_cl = 0.01, S_cF = 0.3, S_cM = 0.125;
    double S_M1M = 0.175, S_M2M = 0.05, S_Mc = 0.125, S_Msigma = 0.1;
    // proliferation, death, influx
    double mu_c = 0.25, mu_cM1 = 4.0, mu_cM2 = 1.4, M_0 = 0.05, mu_M = 0.2, mu_MF = 1.8;
    double d_c = 0.1, d_cM1 = 50.0, d_M = 0.03, d_sigma = 80.0;
    // matrix degradation and remodelling
    double beta_lc = 3.0, beta_lM1 = 3.84, beta_lM2 = 0.96;
    double beta_Fc = 1.5, beta_FM1 = 1.92, beta_FM2 = 0.48;
    double gamma_0 = 0.0, gamma_M2 = 0.0;
    // polarisation
    double p_12 = 14.0, p_21 = 6.0, t_p = 0.0, R_p = 0.0;
    // nutrient thresholds and effect extrema
    double sigma_nor = 0.4, sigma_p = 0.35, sigma_n = 0.2;
    double psi_p_max = 1.0, psi_d_max = 5.0, psi_dM_min = 1.0, psi_M_max = 2.0, psi_M_min = 1.0;
    // enzyme secretion
    double alpha_c = 0.625, alpha_M1 = 0.8, alpha_M2 = 0.2;
    // geometry and scales
    double beta = 0.75, R = 0.15, r = 0.0016, f_max = 0.636;
    double h_L = 0.03125, eps = 0.0625, delta = 0.03125, L = 4.0;
    double rho_influx = 0.0625, rho_repol = 0.0625, gamma_h = 0.0625, mde_band = 0.03125;
    double fibre_ratio = 0.2;
    // time stepping
    double dt_stage = 0.1, cfl_adv = 0.45, cfl_diff = 0.2, blowup = 1e3;
    int min_substeps = 20;
    // solvers
    double sor_omega = 0.5, sor_tol = 1e-5;
    int sor_max_iters = 500000;
    double mde_sor_omega = 1.2, mde_sor_tol = 1e-11;
    int mde_cells = 16, mde_dyadic_level = 3, mde_substeps = 20;
    int fibre_cells = 11;
    int sector_annuli = 5, sector_exponent = 2;
    double weno_p = 2.0, weno_eps = 1e-6, power_tol = 1e-14;
    int power_max_iters = 20;
    std::string fibre_pattern = "cross";

    EffectParams effects() const;
    AdhesionStrengths strengths() const;
    WenoConfig weno(std::uint64_t seed) const;
    void validate() const;
};

// Names of all numeric fields, as used in configuration files.
std::vector<std::string> param_names();
// Throws ConfigError for unknown names or wrong types.
void set_param(ModelParams& p, const std::string& name, double value);
double get_param(const ModelParams& p, const std::string& name);

}  // namespace invasion
