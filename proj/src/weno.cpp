#include "invasion/weno.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace invasion {

const WenoKernels& weno_kernels() {
    static const WenoKernels k = [] {
        WenoKernels w{};
        constexpr double a = 11.0 / 6.0, b = -7.0 / 6.0, c = 1.0 / 3.0, d = 5.0 / 6.0, e = -1.0 / 6.0;
        w.eno[0][0] = {{{0, 0, 0, a, b, c, 0}, {0, 0, c, d, e, 0, 0}, {0, e, d, c, 0, 0, 0}}};
        w.eno[1][0] = {{{c, b, a, 0, 0, 0, 0}, {0, e, d, c, 0, 0, 0}, {0, 0, c, d, e, 0, 0}}};
        w.eno[0][1] = {{{0, 0, 0, 0, a, b, c}, {0, 0, 0, c, d, e, 0}, {0, 0, e, d, c, 0, 0}}};
        w.eno[1][1] = {{{0, c, b, a, 0, 0, 0}, {0, 0, e, d, c, 0, 0}, {0, 0, 0, c, d, e, 0}}};
        w.smooth[0][0] = {{{0, 0, 0, 3, -4, 1, 0}, {0, 0, -1, 0, 1, 0, 0}, {0, 1, -4, 3, 0, 0, 0}}};
        w.smooth[1][0] = {{{1, -4, 3, 0, 0, 0, 0}, {0, 1, 0, -1, 0, 0, 0}, {0, 0, 3, -4, 1, 0, 0}}};
        w.smooth[0][1] = {{{0, 0, 0, 0, 3, -4, 1}, {0, 0, 0, -1, 0, 1, 0}, {0, 0, 1, -4, 3, 0, 0}}};
        w.smooth[1][1] = {{{0, 1, -4, 3, 0, 0, 0}, {0, 0, 1, 0, -1, 0, 0}, {0, 0, 0, 3, -4, 1, 0}}};
        return w;
    }();
    return k;
}

namespace {

inline double conv7(const WenoKernels::Vec7& K, const Window& s) {
    double acc = 0.0;
    for (int q = 0; q < 7; ++q) acc += K[q] * s[6 - q];
    return acc;
}

double combine(const Reconstruction& r, const WenoConfig& cfg) {
    double faces[2] = {0.0, 0.0};
    for (int part = 0; part < 2; ++part)
        for (int face = 0; face < 2; ++face) {
            const auto w = nonlinear_weights(r.is[part][face], cfg);
            faces[face] += w[0] * r.eno[part][face][0] + w[1] * r.eno[part][face][1] + w[2] * r.eno[part][face][2];
        }
    return faces[0] - faces[1];
}

}  // namespace

Reconstruction reconstruct(const Window& fplus, const Window& fminus) {
    const auto& K = weno_kernels();
    Reconstruction r;
    for (int part = 0; part < 2; ++part) {
        const Window& s = part == 0 ? fplus : fminus;
        for (int face = 0; face < 2; ++face)
            for (int k = 0; k < 3; ++k) {
                r.eno[part][face][k] = conv7(K.eno[part][face][k], s);
                const double g = conv7(K.smooth[part][face][k], s);
                r.is[part][face][k] = g * g;
            }
    }
    return r;
}

std::array<double, 3> nonlinear_weights(const std::array<double, 3>& is, const WenoConfig& cfg) {
    std::array<double, 3> a{};
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double base = cfg.eps + is[k];
        a[k] = cfg.linear_weights[k] / (cfg.p == 2.0 ? base * base : std::pow(base, cfg.p));
        sum += a[k];
    }
    for (double& v : a) v /= sum;
    return a;
}

double flux_difference(const Window& fplus, const Window& fminus, const WenoConfig& cfg) {
    return combine(reconstruct(fplus, fminus), cfg);
}

SplitFlux rusanov_split(const Field& flux, const Field& u, double alpha) {
    SplitFlux s{Field(flux.n), Field(flux.n)};
    for (std::size_t k = 0; k < flux.size(); ++k) {
        s.plus[k] = 0.5 * (flux[k] + alpha * u[k]);
        s.minus[k] = 0.5 * (flux[k] - alpha * u[k]);
    }
    return s;
}

namespace {

struct Splits {
    SplitFlux x, y;
};

Splits split_both(const Field& Fx, const Field& Fy, const Field& u, double ax, double ay) {
    return {rusanov_split(Fx, u, ax), rusanov_split(Fy, u, ay)};
}

}  // namespace

Field weno_divergence_inside(const Field& Fx, const Field& Fy, const Field& u, double alpha_x, double alpha_y,
                             const DomainMask& mask, double h, const WenoConfig& cfg) {
    const int n = u.n;
    const Splits s = split_both(Fx, Fy, u, alpha_x, alpha_y);
    Field out(n);
#pragma omp parallel for schedule(static)
    for (int j = 3; j < n - 3; ++j)
        for (int i = 3; i < n - 3; ++i) {
            if (!mask.weno_inside(i, j)) continue;
            Window xp, xm, yp, ym;
            for (int o = -3; o <= 3; ++o) {
                xp[o + 3] = s.x.plus(i + o, j);
                xm[o + 3] = s.x.minus(i + o, j);
                yp[o + 3] = s.y.plus(i, j + o);
                ym[o + 3] = s.y.minus(i, j + o);
            }
            out(i, j) = (flux_difference(xp, xm, cfg) + flux_difference(yp, ym, cfg)) / h;
        }
    return out;
}

namespace {

// Reflect index t into the run [lo, hi] by repeated mirroring about its ends.
inline int mirror(int t, int lo, int hi) {
    if (lo == hi) return lo;
    while (t < lo || t > hi) t = t > hi ? 2 * hi - t : 2 * lo - t;
    return t;
}

}  // namespace

Field weno_divergence_layer(const Field& Fx, const Field& Fy, const Field& u, double alpha_x, double alpha_y,
                            const DomainMask& mask, double h, const WenoConfig& cfg) {
    const int n = u.n;
    const Splits s = split_both(Fx, Fy, u, alpha_x, alpha_y);
    const Mask& in = mask.inside;
    Field out(n);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!mask.weno_layer(i, j)) continue;
            int lo = i, hi = i;
            while (lo - 1 >= 0 && in(lo - 1, j) && i - lo < 3) --lo;
            while (hi + 1 < n && in(hi + 1, j) && hi - i < 3) ++hi;
            Window p, m;
            for (int o = -3; o <= 3; ++o) {
                const int t = mirror(i + o, lo, hi);
                p[o + 3] = s.x.plus(t, j);
                m[o + 3] = s.x.minus(t, j);
            }
            double acc = flux_difference(p, m, cfg);
            lo = hi = j;
            while (lo - 1 >= 0 && in(i, lo - 1) && j - lo < 3) --lo;
            while (hi + 1 < n && in(i, hi + 1) && hi - j < 3) ++hi;
            for (int o = -3; o <= 3; ++o) {
                const int t = mirror(j + o, lo, hi);
                p[o + 3] = s.y.plus(i, t);
                m[o + 3] = s.y.minus(i, t);
            }
            acc += flux_difference(p, m, cfg);
            out(i, j) = acc / h;
        }
    return out;
}

std::vector<double> weno_divergence_periodic(const std::vector<double>& flux, const std::vector<double>& u,
                                             double alpha, double h, const WenoConfig& cfg) {
    const int n = static_cast<int>(flux.size());
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        Window p, m;
        for (int o = -3; o <= 3; ++o) {
            const int t = ((i + o) % n + n) % n;
            p[o + 3] = 0.5 * (flux[t] + alpha * u[t]);
            m[o + 3] = 0.5 * (flux[t] - alpha * u[t]);
        }
        out[i] = flux_difference(p, m, cfg) / h;
    }
    return out;
}

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

SpectralEstimate spectral_radius(const FluxMap& flux, const std::vector<double>& u, const WenoConfig& cfg,
                                 const std::vector<double>* start) {
    SpectralEstimate est;
    const std::size_t n = u.size();
    if (n == 0) return est;
    std::vector<double> v(n);
    if (start && start->size() == n && norm2(*start) > 0.0) {
        v = *start;
    } else {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (double& x : v) x = dist(rng);
    }
    double nv = norm2(v);
    for (double& x : v) x /= nv;

    const std::vector<double> base = flux(u);
    const double shift = std::sqrt((1.0 + norm2(u)) * std::numeric_limits<double>::epsilon());
    std::vector<double> probe(n);
    double previous = -1.0;
    for (int it = 1; it <= cfg.power_max_iters; ++it) {
        for (std::size_t k = 0; k < n; ++k) probe[k] = u[k] + shift * v[k];
        const std::vector<double> moved = flux(probe);
        std::vector<double> w(n);
        for (std::size_t k = 0; k < n; ++k) w[k] = (moved[k] - base[k]) / shift;
        const double growth = norm2(w);
        est.iterations = it;
        est.value = growth;
        if (growth == 0.0) {
            est.vector = v;
            return est;
        }
        for (std::size_t k = 0; k < n; ++k) v[k] = w[k] / growth;
        if (previous >= 0.0 && std::abs(growth - previous) <= cfg.power_tol * growth) {
            est.vector = v;
            return est;
        }
        previous = growth;
    }
    est.capped = true;
    est.vector = v;
    return est;
}

namespace reference {

Reconstruction reconstruct(const Window& fp, const Window& fm) {
    Reconstruction r;
    // face 0 is i+1/2 (shift 0), face 1 is i-1/2 (every index moved left by one)
    for (int face = 0; face < 2; ++face) {
        const int s = -face;
        auto P = [&](int o) { return fp[o + s + 3]; };
        auto M = [&](int o) { return fm[o + s + 3]; };
        r.eno[0][face][0] = (2 * P(-2) - 7 * P(-1) + 11 * P(0)) / 6.0;
        r.eno[0][face][1] = (-P(-1) + 5 * P(0) + 2 * P(1)) / 6.0;
        r.eno[0][face][2] = (2 * P(0) + 5 * P(1) - P(2)) / 6.0;
        r.eno[1][face][0] = (11 * M(1) - 7 * M(2) + 2 * M(3)) / 6.0;
        r.eno[1][face][1] = (2 * M(0) + 5 * M(1) - M(2)) / 6.0;
        r.eno[1][face][2] = (-M(-1) + 5 * M(0) + 2 * M(1)) / 6.0;
        auto sq = [](double x) { return x * x; };
        r.is[0][face][0] = sq(P(-2) - 4 * P(-1) + 3 * P(0));
        r.is[0][face][1] = sq(P(-1) - P(1));
        r.is[0][face][2] = sq(3 * P(0) - 4 * P(1) + P(2));
        r.is[1][face][0] = sq(M(3) - 4 * M(2) + 3 * M(1));
        r.is[1][face][1] = sq(M(2) - M(0));
        r.is[1][face][2] = sq(3 * M(1) - 4 * M(0) + M(-1));
    }
    return r;
}

double flux_difference(const Window& fplus, const Window& fminus, const WenoConfig& cfg) {
    const Reconstruction r = reconstruct(fplus, fminus);
    double faces[2] = {0.0, 0.0};
    for (int face = 0; face < 2; ++face)
        for (int part = 0; part < 2; ++part) {
            double a[3], sum = 0.0;
            for (int k = 0; k < 3; ++k) {
                a[k] = cfg.linear_weights[k] / std::pow(cfg.eps + r.is[part][face][k], cfg.p);
                sum += a[k];
            }
            for (int k = 0; k < 3; ++k) faces[face] += a[k] / sum * r.eno[part][face][k];
        }
    return faces[0] - faces[1];
}

}  // namespace reference

}  // namespace invasion
