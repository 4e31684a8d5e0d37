#pragma once

namespace invasion {

struct EffectParams {
    double sigma_n = 0.2;
    double sigma_p = 0.35;
    double sigma_nor = 0.4;
    double psi_p_max = 1.0;
    double psi_d_max = 5.0;
    double psi_dM_min = 1.0;
    double psi_M_max = 2.0;
    double psi_M_min = 1.0;

    void validate() const;
};

// Cosine blend between phi_min and phi_max over (sigma_n, sigma_p), shifted by phi_L.
double transition_phi(double sigma, double phi_max, double phi_min, double phi_L, const EffectParams& p);

// Proliferation enhancement: 0 below sigma_n, psi_p_max above sigma_p.
double psi_p(double sigma, const EffectParams& p);
// Cancer cell death enhancement: psi_d_max below sigma_n, 0 above sigma_p.
double psi_dc(double sigma, const EffectParams& p);
// Macrophage death enhancement: psi_d_max below sigma_n, psi_dM_min above sigma_p.
double psi_dM(double sigma, const EffectParams& p);
// M1 -> M2 polarisation enhancement: psi_M_max below sigma_n, psi_M_min from sigma_p on.
double psi_M(double sigma, const EffectParams& p);

}  // namespace invasion
