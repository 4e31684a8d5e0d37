#include "invasion/nutrients.hpp"

#include <algorithm>

#include "invasion/state.hpp"

namespace invasion {

SorSystem nutrient_system(const TumourState& u, const DomainMask& mask, const NutrientParams& p, double h) {
    const int n = mask.n();
    SorSystem sys(static_cast<std::size_t>(n) * n);
    const double w = p.D_sigma / (h * h);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int k = j * n + i;
            if (!mask.inside[k] || mask.outer[k]) continue;
            int slot = 0;
            double diag = p.d_sigma * (u.c[k] + u.m1[k] + u.m2[k]);
            constexpr int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            for (auto& o : nb) {
                const int a = i + o[0], b = j + o[1];
                if (!mask.inside.contains(a, b) || !mask.inside(a, b)) continue;
                sys.nb[k][slot] = b * n + a;
                sys.weight[k][slot] = w;
                ++slot;
                diag += w;
            }
            if (diag == 0.0) continue;  // no coupling and no uptake: value is arbitrary, keep it
            sys.diag[k] = diag;
            ((i + j) % 2 == 0 ? sys.red : sys.black).push_back(k);
        }
    return sys;
}

NutrientSolution solve_sigma(const TumourState& u, const DomainMask& mask, const NutrientParams& p,
                             const Field& initial_guess, double h) {
    const int n = mask.n();
    NutrientSolution out{initial_guess, {}};
    Field& s = out.sigma;
    for (int k = 0; k < n * n; ++k)
        if (!mask.inside[k] || mask.outer[k]) s[k] = p.sigma_nor;
    const SorSystem sys = nutrient_system(u, mask, p, h);
    out.stats = sor_solve(sys, s.data, {p.sor_omega, p.sor_tol, p.max_iters});
    for (double& v : s.data) v = std::max(v, 0.0);
    return out;
}

}  // namespace invasion
