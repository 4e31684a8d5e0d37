#pragma once

// Independent reference implementations shared by the unit tests and the
// acceptance runner.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "invasion/diffusion.hpp"
#include "invasion/nutrients.hpp"
#include "invasion/weno.hpp"

namespace oracles {

using namespace invasion;
using namespace testing_util;

// Five-point flux form written out by hand.
inline Field direct_interior(const Field& D, const Field& u, const DomainMask& m, double h) {
    Field out(u.n);
    for (int j = 0; j < u.n; ++j)
        for (int i = 0; i < u.n; ++i) {
            if (!m.interior(i, j)) continue;
            const double c = D(i, j);
            double s = (D(i + 1, j) + c) * (u(i + 1, j) - u(i, j)) - (c + D(i - 1, j)) * (u(i, j) - u(i - 1, j));
            s += (D(i, j + 1) + c) * (u(i, j + 1) - u(i, j)) - (c + D(i, j - 1)) * (u(i, j) - u(i, j - 1));
            out(i, j) = 0.5 * s / (h * h);
        }
    return out;
}

inline double diffusion_order_error(int n) {
    const double h = 1.0 / (n - 1);
    const auto g = build_grid(1.0, h);
    const auto m = compute_masks(full_mask(g.n), g);
    Field D(n), u(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            D(i, j) = 1.0 + i * h + j * h;
            u(i, j) = std::sin(std::numbers::pi * i * h) * std::sin(std::numbers::pi * j * h);
        }
    const auto L = diffusion_interior(D, u, m, h);
    const double pi = std::numbers::pi;
    double err = 0.0;
    for (int j = 1; j < n - 1; ++j)
        for (int i = 1; i < n - 1; ++i) {
            const double x = i * h, y = j * h;
            const double exact = -2 * pi * pi * (1 + x + y) * std::sin(pi * x) * std::sin(pi * y) +
                                 pi * std::cos(pi * x) * std::sin(pi * y) + pi * std::sin(pi * x) * std::cos(pi * y);
            err = std::max(err, std::abs(L(i, j) - exact));
        }
    return err;
}

// Worst relative gap between the library operators (parallel and serial)
// and the hand stencil over random coefficient and data fields.
inline double diffusion_random_error(int trials) {
    const auto g = build_grid(1.0, 1.0 / 64);
    const auto m = compute_masks(disc_mask(g.n, 32, 30, 27.3), g);
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Field D(g.n), u(g.n);
        fill_uniform(D, rng, 0.0, 2.0);
        fill_uniform(u, rng, -1.0, 1.0);
        const auto a = diffusion_interior(D, u, m, g.h);
        worst = std::max(worst, max_rel_diff(a, direct_interior(D, u, m, g.h)));
        worst = std::max(worst, max_rel_diff(reference::diffusion_interior(D, u, m, g.h), direct_interior(D, u, m, g.h)));
    }
    return worst;
}

// Candidate values and indicators written with explicit indices; f[3] is the
// centre node. Returns [face][k] for the plus part and the minus part.
struct Direct {
    double eno[2][2][3];
    double is[2][2][3];
};

inline Direct direct(const Window& p, const Window& m) {
    Direct d{};
    for (int face = 0; face < 2; ++face) {
        const int c = 3 - face;  // node left of the face
        auto P = [&](int o) { return p[c + o]; };
        auto M = [&](int o) { return m[c + o]; };
        d.eno[0][face][0] = (2 * P(-2) - 7 * P(-1) + 11 * P(0)) / 6;
        d.eno[0][face][1] = (-P(-1) + 5 * P(0) + 2 * P(1)) / 6;
        d.eno[0][face][2] = (2 * P(0) + 5 * P(1) - P(2)) / 6;
        d.is[0][face][0] = std::pow(P(-2) - 4 * P(-1) + 3 * P(0), 2);
        d.is[0][face][1] = std::pow(P(1) - P(-1), 2);
        d.is[0][face][2] = std::pow(3 * P(0) - 4 * P(1) + P(2), 2);
        d.eno[1][face][0] = (11 * M(1) - 7 * M(2) + 2 * M(3)) / 6;
        d.eno[1][face][1] = (2 * M(0) + 5 * M(1) - M(2)) / 6;
        d.eno[1][face][2] = (-M(-1) + 5 * M(0) + 2 * M(1)) / 6;
        d.is[1][face][0] = std::pow(3 * M(1) - 4 * M(2) + M(3), 2);
        d.is[1][face][1] = std::pow(M(2) - M(0), 2);
        d.is[1][face][2] = std::pow(M(-1) - 4 * M(0) + 3 * M(1), 2);
    }
    return d;
}

inline double direct_difference(const Window& p, const Window& m, const WenoConfig& cfg) {
    const auto d = direct(p, m);
    double face[2] = {0, 0};
    for (int part = 0; part < 2; ++part)
        for (int f = 0; f < 2; ++f) {
            double a[3], s = 0;
            for (int k = 0; k < 3; ++k) {
                a[k] = cfg.linear_weights[k] / std::pow(cfg.eps + d.is[part][f][k], 2);
                s += a[k];
            }
            for (int k = 0; k < 3; ++k) face[f] += a[k] / s * d.eno[part][f][k];
        }
    return face[0] - face[1];
}

inline double periodic_error(int cells) {
    const double h = 1.0 / cells;
    std::vector<double> u(cells), flux(cells);
    for (int i = 0; i < cells; ++i) {
        u[i] = std::sin(2 * std::numbers::pi * i * h);
        flux[i] = u[i];
    }
    WenoConfig cfg;
    const auto d = weno_divergence_periodic(flux, u, 1.5, h, cfg);
    double err = 0.0;
    for (int i = 0; i < cells; ++i)
        err = std::max(err, std::abs(d[i] - 2 * std::numbers::pi * std::cos(2 * std::numbers::pi * i * h)));
    return err;
}

struct WindowErrors {
    double stencils = 0.0;    // candidates and indicators
    double difference = 0.0;  // full flux difference
};

inline WindowErrors weno_window_errors(int trials) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    WenoConfig cfg;
    double worst = 0.0, worst_diff = 0.0;
    for (int t = 0; t < trials; ++t) {
        Window p, m;
        for (int q = 0; q < 7; ++q) {
            p[q] = dist(rng);
            m[q] = dist(rng);
        }
        const auto r = reconstruct(p, m);
        const auto d = direct(p, m);
        double scale_e = 0, scale_i = 0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int k = 0; k < 3; ++k) {
                    scale_e = std::max(scale_e, std::abs(d.eno[a][b][k]));
                    scale_i = std::max(scale_i, std::abs(d.is[a][b][k]));
                }
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int k = 0; k < 3; ++k) {
                    worst = std::max(worst, std::abs(r.eno[a][b][k] - d.eno[a][b][k]) / scale_e);
                    worst = std::max(worst, std::abs(r.is[a][b][k] - d.is[a][b][k]) / scale_i);
                }
        const double ref = direct_difference(p, m, cfg);
        worst_diff = std::max(worst_diff, std::abs(flux_difference(p, m, cfg) - ref) / std::max(1.0, std::abs(ref)));
        worst_diff = std::max(worst_diff, std::abs(reference::flux_difference(p, m, cfg) - ref) / std::max(1.0, std::abs(ref)));
    }
    return {worst, worst_diff};
}

// Largest |eigenvalue| of a forward-difference Jacobian of F at u.
inline double fd_jacobian_radius(const FluxMap& F, const std::vector<double>& u, double step = 1e-7) {
    const int n = static_cast<int>(u.size());
    Eigen::MatrixXd J(n, n);
    const auto base = F(u);
    for (int c = 0; c < n; ++c) {
        auto up = u;
        up[c] += step;
        const auto fu = F(up);
        for (int r = 0; r < n; ++r) J(r, c) = (fu[r] - base[r]) / step;
    }
    return J.eigenvalues().cwiseAbs().maxCoeff();
}

// Same discrete problem assembled from scratch and solved densely.
inline Field dense_sigma(const TumourState& u, const DomainMask& m, const NutrientParams& p, double h) {
    const int n = m.n();
    std::map<int, int> id;
    for (int k = 0; k < n * n; ++k)
        if (m.inside[k] && !m.outer[k]) id.emplace(k, static_cast<int>(id.size()));
    const int N = static_cast<int>(id.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(N);
    const double w = p.D_sigma / (h * h);
    for (auto [k, r] : id) {
        const int i = k % n, j = k / n;
        A(r, r) = p.d_sigma * (u.c[k] + u.m1[k] + u.m2[k]);
        const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
        for (auto& q : nb) {
            if (!m.inside.contains(q[0], q[1]) || !m.inside(q[0], q[1])) continue;
            const int kk = q[1] * n + q[0];
            A(r, r) += w;
            if (m.outer[kk])
                b(r) += w * p.sigma_nor;
            else
                A(r, id.at(kk)) -= w;
        }
    }
    const Eigen::VectorXd x = A.partialPivLu().solve(b);
    Field s(n, p.sigma_nor);
    for (auto [k, r] : id) s[k] = x(r);
    return s;
}

inline TumourState random_cells(int n, std::mt19937_64& rng, double top) {
    TumourState u(n);
    fill_uniform(u.c, rng, 0.0, top);
    fill_uniform(u.m1, rng, 0.0, top / 4);
    fill_uniform(u.m2, rng, 0.0, top / 4);
    return u;
}

inline double max_diff(const Field& a, const Field& b) {
    double e = 0;
    for (std::size_t k = 0; k < a.size(); ++k) e = std::max(e, std::abs(a[k] - b[k]));
    return e;
}

}  // namespace oracles
