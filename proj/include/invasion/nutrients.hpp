#pragma once

#include "invasion/field.hpp"
#include "invasion/grid.hpp"
#include "invasion/sor.hpp"

namespace invasion {

struct TumourState;

struct NutrientParams {
    double D_sigma = 1.0;
    double d_sigma = 80.0;
    double sigma_nor = 0.4;
    double sor_omega = 0.5;
    double sor_tol = 1e-5;
    int max_iters = 500000;
};

struct NutrientSolution {
    Field sigma;
    SorResult stats;
};

// Quasi-steady nutrient: D lap(sigma) = d (c + M1 + M2) sigma on the tumour,
// sigma = sigma_nor on the outer boundary, no flux through other boundary faces.
// Nodes outside the tumour report sigma_nor.
NutrientSolution solve_sigma(const TumourState& u, const DomainMask& mask, const NutrientParams& p,
                             const Field& initial_guess, double h);

// The linear system solved above, with Dirichlet values already in x.
SorSystem nutrient_system(const TumourState& u, const DomainMask& mask, const NutrientParams& p, double h);

}  // namespace invasion
