#pragma once

// Brute-force polar quadrature of the sensing integrals for analytic fields,
// shared by the unit tests and the acceptance binary.

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "invasion/adhesion.hpp"

namespace adhesion_oracle {

using namespace invasion;
using namespace testing_util;

constexpr double kPi = std::numbers::pi;

// A smooth positive field: a0 + sum of a few plane waves.
struct Smooth {
    double a0 = 0;
    double a[3]{}, kx[3]{}, ky[3]{}, ph[3]{};
    double operator()(double x, double y) const {
        double v = a0;
        for (int q = 0; q < 3; ++q) v += a[q] * std::sin(kx[q] * x + ky[q] * y + ph[q]);
        return v;
    }
};

inline Smooth random_smooth(std::mt19937_64& rng, double base, double amp) {
    std::uniform_real_distribution<double> d(0, 1);
    Smooth s;
    s.a0 = base;
    for (int q = 0; q < 3; ++q) {
        s.a[q] = amp * d(rng) / 3;
        const double k = 2 * kPi * (0.5 + 1.0 * d(rng)), t = 2 * kPi * d(rng);
        s.kx[q] = k * std::cos(t);
        s.ky[q] = k * std::sin(t);
        s.ph[q] = 2 * kPi * d(rng);
    }
    return s;
}

struct Scene {
    Smooth c, m1, m2, l, f, sigma, tx, ty;
};

inline Scene random_scene(std::mt19937_64& rng) {
    Scene s;
    s.c = random_smooth(rng, 0.2, 0.15);
    s.m1 = random_smooth(rng, 0.05, 0.04);
    s.m2 = random_smooth(rng, 0.05, 0.04);
    s.l = random_smooth(rng, 0.3, 0.2);
    s.f = random_smooth(rng, 0.08, 0.06);
    s.sigma = random_smooth(rng, 0.3, 0.1);
    s.tx = random_smooth(rng, 0.0, 0.05);
    s.ty = random_smooth(rng, 0.0, 0.05);
    return s;
}

inline TumourState sample(const Scene& s, const MacroGrid& g) {
    TumourState u(g.n);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const double x = g.coord(i), y = g.coord(j);
            u.c(i, j) = s.c(x, y);
            u.m1(i, j) = s.m1(x, y);
            u.m2(i, j) = s.m2(x, y);
            u.l(i, j) = s.l(x, y);
            u.f(i, j) = s.f(x, y);
            u.sigma(i, j) = s.sigma(x, y);
            u.theta_x(i, j) = s.tx(x, y);
            u.theta_y(i, j) = s.ty(x, y);
        }
    return u;
}

inline double kernel(double r, double R) {
    const double z = r / R;
    return z < 1 ? std::exp(-1.0 / (1.0 - z * z)) / mollifier_integral() : 0.0;
}

// Midpoint rule on a polar mesh of the sensing disc, with the integrand
// evaluated from the analytic fields at x + y.
template <class Integrand>
inline std::array<double, 2> polar(double x, double y, double R, Integrand g) {
    const int Nr = 120, Nt = 256;
    double ax = 0, ay = 0;
    for (int a = 0; a < Nr; ++a) {
        const double r = (a + 0.5) * R / Nr;
        const double w = kernel(r, R) * r * (R / Nr) * (2 * kPi / Nt);
        for (int b = 0; b < Nt; ++b) {
            const double t = (b + 0.5) * 2 * kPi / Nt;
            const double yx = r * std::cos(t), yy = r * std::sin(t);
            const auto v = g(x + yx, y + yy, yx, yy);
            ax += w * v[0];
            ay += w * v[1];
        }
    }
    return {ax / R, ay / R};
}

inline std::array<double, 2> oracle_M(const Scene& s, const AdhesionStrengths& st, double S_MM, double x, double y, double R) {
    return polar(x, y, R, [&](double px, double py, double yx, double yy) {
        const double rho = s.c(px, py) + s.m1(px, py) + s.m2(px, py) + s.l(px, py) + s.f(px, py);
        const double g = (st.S_Msigma * (1 - s.sigma(px, py)) + st.S_Mc * s.c(px, py) +
                          S_MM * (s.m1(px, py) + s.m2(px, py))) *
                         std::max(0.0, 1 - rho);
        const double r = std::hypot(yx, yy);
        return std::array<double, 2>{g * yx / r, g * yy / r};
    });
}

inline std::array<double, 2> oracle_c(const Scene& s, const AdhesionStrengths& st, double x, double y, double R) {
    return polar(x, y, R, [&](double px, double py, double yx, double yy) {
        const double c = s.c(px, py), l = s.l(px, py), M = s.m1(px, py) + s.m2(px, py), F = s.f(px, py);
        const double sat = std::max(0.0, 1 - (c + M + l + F));
        const double cells = (s_cc(l, st) * c + st.S_cl * l + st.S_cM * M) * sat;
        const double r = std::hypot(yx, yy);
        const double vx = yx + s.tx(px, py), vy = yy + s.ty(px, py);
        const double len = std::hypot(vx, vy);
        const double fib = st.S_cF * F * sat;
        return std::array<double, 2>{cells * yx / r + fib * vx / len, cells * yy / r + fib * vy / len};
    });
}

struct Errors {
    double c = 0, M = 0;
};

// Relative L2 errors of both operators against the polar oracle, pooled
// over `fields` random scenes sampled on a block of nodes.
inline Errors quadrature_errors(int s, int m, int fields, int stride = 8) {
    const auto g = build_grid(4.0, 0.03125);
    const auto mask = compute_masks(full_mask(g.n), g);
    const AdhesionStrengths st;
    const double R = 0.15;
    const auto K = build_sensing_kernels(R, s, m, g);
    std::mt19937_64 rng(2024);
    double num_c = 0, den_c = 0, num_m = 0, den_m = 0;
    for (int t = 0; t < fields; ++t) {
        const Scene sc = random_scene(rng);
        const auto u = sample(sc, g);
        const auto Ac = adhesion_c(u, K, st, mask);
        const auto Am = adhesion_M(u, K, st.S_M1M, st, mask);
        for (int j = 48; j <= 80; j += stride)
            for (int i = 48; i <= 80; i += stride) {
                const auto oc = oracle_c(sc, st, g.coord(i), g.coord(j), R);
                const auto om = oracle_M(sc, st, st.S_M1M, g.coord(i), g.coord(j), R);
                num_c += std::pow(Ac.x(i, j) - oc[0], 2) + std::pow(Ac.y(i, j) - oc[1], 2);
                den_c += oc[0] * oc[0] + oc[1] * oc[1];
                num_m += std::pow(Am.x(i, j) - om[0], 2) + std::pow(Am.y(i, j) - om[1], 2);
                den_m += om[0] * om[0] + om[1] * om[1];
            }
    }
    return {std::sqrt(num_c / den_c), std::sqrt(num_m / den_m)};
}

}  // namespace adhesion_oracle
