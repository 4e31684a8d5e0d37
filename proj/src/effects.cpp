#include "invasion/effects.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "invasion/grid.hpp"

namespace invasion {

void EffectParams::validate() const {
    if (!(sigma_nor > sigma_p && sigma_p > sigma_n && sigma_n > 0.0))
        throw ConfigError("effects: need sigma_nor > sigma_p > sigma_n > 0");
    if (!(psi_d_max >= psi_dM_min && psi_dM_min > 0.0))
        throw ConfigError("effects: need psi_d_max >= psi_dM_min > 0");
    if (!(psi_M_max >= psi_M_min && psi_M_min > 0.0))
        throw ConfigError("effects: need psi_M_max >= psi_M_min > 0");
    if (!(psi_p_max > 0.0)) throw ConfigError("effects: psi_p_max must be positive");
}

double transition_phi(double sigma, double phi_max, double phi_min, double phi_L, const EffectParams& p) {
    const double arg = std::numbers::pi * (sigma - p.sigma_n - phi_L) / (p.sigma_p - p.sigma_n);
    return 0.5 * (phi_max - phi_min) * (std::cos(arg) + 1.0) + phi_min;
}

namespace {
void check(double sigma) {
    if (!(sigma >= 0.0)) throw std::domain_error("effect function: nutrient level must be nonnegative");
}
}  // namespace

double psi_p(double sigma, const EffectParams& p) {
    check(sigma);
    if (sigma <= p.sigma_n) return 0.0;
    if (sigma >= p.sigma_p) return p.psi_p_max;
    return transition_phi(sigma, p.psi_p_max, 0.0, p.sigma_p - p.sigma_n, p);
}

double psi_dc(double sigma, const EffectParams& p) {
    check(sigma);
    if (sigma <= p.sigma_n) return p.psi_d_max;
    if (sigma >= p.sigma_p) return 0.0;
    return transition_phi(sigma, p.psi_d_max, 0.0, 0.0, p);
}

double psi_dM(double sigma, const EffectParams& p) {
    check(sigma);
    if (sigma <= p.sigma_n) return p.psi_d_max;
    if (sigma >= p.sigma_p) return p.psi_dM_min;
    return transition_phi(sigma, p.psi_d_max, p.psi_dM_min, 0.0, p);
}

double psi_M(double sigma, const EffectParams& p) {
    check(sigma);
    if (sigma <= p.sigma_n) return p.psi_M_max;
    if (sigma >= p.sigma_p) return p.psi_M_min;
    return transition_phi(sigma, p.psi_M_max, p.psi_M_min, 0.0, p);
}

}  // namespace invasion
