#include "invasion/sor.hpp"

#include <algorithm>
#include <cmath>

namespace invasion {

namespace {

inline double jacobi_defect(const SorSystem& s, const std::vector<double>& x, int p) {
    double acc = s.rhs[p];
    for (int k = 0; k < 4; ++k)
        if (s.nb[p][k] >= 0) acc += s.weight[p][k] * x[s.nb[p][k]];
    return acc / s.diag[p] - x[p];
}

// One colour sweep; returns the largest residual seen before the updates.
double half_sweep(const SorSystem& s, const std::vector<int>& nodes, std::vector<double>& x, double omega) {
    const int count = static_cast<int>(nodes.size());
    double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (int k = 0; k < count; ++k) {
        const int p = nodes[k];
        const double d = jacobi_defect(s, x, p);
        x[p] += omega * d;
        worst = std::max(worst, std::abs(d) * s.diag[p]);
    }
    return worst;
}

}  // namespace

double sor_residual(const SorSystem& sys, const std::vector<double>& x) {
    double worst = 0.0;
    for (const auto* set : {&sys.red, &sys.black})
        for (int p : *set) worst = std::max(worst, std::abs(jacobi_defect(sys, x, p)) * sys.diag[p]);
    return worst;
}

SorResult sor_solve(const SorSystem& sys, std::vector<double>& x, const SorOptions& opt) {
    SorResult res;
    if (sys.red.empty() && sys.black.empty()) return res;
    for (int it = 1; it <= opt.max_iters; ++it) {
        const double a = half_sweep(sys, sys.red, x, opt.omega);
        const double b = half_sweep(sys, sys.black, x, opt.omega);
        res.iterations = it;
        if (std::max(a, b) <= opt.tol) {
            res.residual = sor_residual(sys, x);
            if (res.residual <= opt.tol) return res;
        }
    }
    res.residual = sor_residual(sys, x);
    if (res.residual <= opt.tol) return res;
    throw SolverError("SOR did not converge in " + std::to_string(opt.max_iters) +
                      " iterations, residual " + std::to_string(res.residual));
}

}  // namespace invasion
