#include "invasion/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "invasion/adhesion.hpp"
#include "invasion/diffusion.hpp"
#include "invasion/grid.hpp"
#include "invasion/state.hpp"
#include "invasion/weno.hpp"

namespace invasion {

namespace {

double rel_max(const Field& a, const Field& b) {
    double err = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        err = std::max(err, std::abs(a[k] - b[k]));
        scale = std::max(scale, std::abs(b[k]));
    }
    return scale > 0.0 ? err / scale : err;
}

void fill(Field& f, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    for (double& v : f.data) v = d(rng);
}

}  // namespace

bool run_selftest(std::ostream& out) {
    bool all = true;
    auto report = [&](const char* name, double err, double tol) {
        const bool ok = err <= tol;
        all = all && ok;
        out << (ok ? "PASS " : "FAIL ") << name << "  error=" << err << "  tol=" << tol << "\n";
    };
    std::mt19937_64 rng(20240601);

    const MacroGrid grid = build_grid(1.0, 1.0 / 32);
    Mask disc(grid.n);
    for (int j = 0; j < grid.n; ++j)
        for (int i = 0; i < grid.n; ++i) disc(i, j) = std::hypot(i - 16.0, j - 16.0) <= 12.5;
    const DomainMask mask = compute_masks(disc, grid);

    double diff_err = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Field D(grid.n), u(grid.n);
        fill(D, rng, 0.1, 1.0);
        fill(u, rng, -1.0, 1.0);
        diff_err = std::max(diff_err, rel_max(diffusion_interior(D, u, mask, grid.h),
                                              reference::diffusion_interior(D, u, mask, grid.h)));
    }
    report("diffusion kernels vs direct stencil", diff_err, 1e-12);

    double weno_err = 0.0;
    const WenoConfig cfg;
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        Window a, b;
        for (int q = 0; q < 7; ++q) {
            a[q] = d(rng);
            b[q] = d(rng);
        }
        const Reconstruction x = reconstruct(a, b), y = reference::reconstruct(a, b);
        for (int part = 0; part < 2; ++part)
            for (int face = 0; face < 2; ++face)
                for (int k = 0; k < 3; ++k) {
                    const double s = std::max(1.0, std::abs(y.eno[part][face][k]));
                    const double t = std::max(1.0, std::abs(y.is[part][face][k]));
                    weno_err = std::max({weno_err, std::abs(x.eno[part][face][k] - y.eno[part][face][k]) / s,
                                         std::abs(x.is[part][face][k] - y.is[part][face][k]) / t});
                }
        weno_err = std::max(weno_err, std::abs(flux_difference(a, b, cfg) - reference::flux_difference(a, b, cfg)));
    }
    report("weno kernels vs direct indexing", weno_err, 1e-13);

    const SensingKernels K = build_sensing_kernels(0.15, 5, 2, grid);
    const AdhesionStrengths st;
    double adh_err = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        TumourState u(grid.n);
        for (Field* f : {&u.c, &u.m1, &u.m2, &u.l, &u.f, &u.theta_x, &u.theta_y, &u.sigma}) fill(*f, rng, 0.0, 0.2);
        for (std::size_t k = 0; k < u.c.size(); ++k)
            if (!mask.inside[k]) u.c[k] = u.m1[k] = u.m2[k] = 0.0;
        const VectorField a = adhesion_c(u, K, st, mask), b = reference::adhesion_c(u, K, st, mask);
        const VectorField p = adhesion_M(u, K, st.S_M1M, st, mask), q = reference::adhesion_M(u, K, st.S_M1M, st, mask);
        adh_err = std::max({adh_err, rel_max(a.x, b.x), rel_max(a.y, b.y), rel_max(p.x, q.x), rel_max(p.y, q.y)});
    }
    report("adhesion kernels vs direct interpolation", adh_err, 1e-12);
    return all;
}

}  // namespace invasion
