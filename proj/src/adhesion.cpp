#include "invasion/adhesion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "invasion/state.hpp"

namespace invasion {

int sector_count(int s, int m) {
    int total = 0;
    for (int k = 1; k <= s; ++k) total += 1 << (m + k - 1);
    return total;
}

double s_cc(double l, const AdhesionStrengths& st) {
    if (!(l > 0.0 && l < 2.0)) return st.S_min;
    const double a = 1.0 - l;
    return st.S_min + (st.S_max - st.S_min) * std::exp(1.0 - 1.0 / (1.0 - a * a));
}

SensingKernels build_sensing_kernels(double R, int s, int m, const MacroGrid& grid) {
    if (R < 2.0 * grid.h) throw ConfigError("sensing radius must be at least 2h");
    if (s < 1 || m < 1) throw ConfigError("sector annuli and exponent must be >= 1");
    SensingKernels K;
    K.R = R;
    K.h = grid.h;
    K.annuli = s;
    K.exponent = m;
    const int half = static_cast<int>(std::ceil(R / grid.h));
    K.P = 2 * half + 1;
    const double unit = mollifier_integral();

    for (int k = 1; k <= s; ++k) {
        const double r1 = R * (k - 1) / s, r2 = R * k / s;
        const int count = 1 << (m + k - 1);
        const double dth = 2.0 * std::numbers::pi / count;
        // Centroid radius of an annular sector of opening dth.
        const double rbar = (2.0 / 3.0) * (r2 * r2 * r2 - r1 * r1 * r1) / (r2 * r2 - r1 * r1) *
                            std::sin(0.5 * dth) / (0.5 * dth);
        for (int q = 0; q < count; ++q) {
            SensingSector S;
            const double th = (q + 0.5) * dth;
            S.nx = std::cos(th);
            S.ny = std::sin(th);
            S.bx = rbar * S.nx;
            S.by = rbar * S.ny;
            S.area = 0.5 * dth * (r2 * r2 - r1 * r1);
            const double z2 = (rbar / R) * (rbar / R);
            S.weight = std::exp(-1.0 / (1.0 - z2)) / unit;

            const double ox = S.bx / grid.h, oy = S.by / grid.h;
            const int ix = static_cast<int>(std::floor(ox)), iy = static_cast<int>(std::floor(oy));
            const double fx = ox - ix, fy = oy - iy;
            S.beta = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};

            std::vector<double> mat(static_cast<std::size_t>(K.P) * K.P, 0.0);
            const int di[4] = {0, 1, 0, 1}, dj[4] = {0, 0, 1, 1};
            for (int t = 0; t < 4; ++t) mat[(ix + di[t] + half) * K.P + iy + dj[t] + half] = S.beta[t];
            // Flip both axes so that the interpolation becomes a convolution.
            int t = 0;
            for (int a = 0; a < K.P; ++a)
                for (int b = 0; b < K.P; ++b) {
                    const double v = mat[(K.P - 1 - a) * K.P + (K.P - 1 - b)];
                    if (v != 0.0 && t < 4) {
                        S.tap_a[t] = a - half;
                        S.tap_b[t] = b - half;
                        S.tap_v[t] = v;
                        ++t;
                    }
                }
            K.matrices.push_back(std::move(mat));
            K.sectors.push_back(S);
        }
    }
    return K;
}

namespace {

inline double sat(const TumourState& u, std::size_t k, const AdhesionOptions& opt) {
    return opt.saturation ? std::max(0.0, 1.0 - u.rho(k)) : 1.0;
}

// (K conv g) at node (i, j) for one sector; off-grid samples are zero.
inline double conv(const SensingSector& S, const Field& g, int i, int j) {
    double acc = 0.0;
    for (int t = 0; t < 4; ++t) {
        const int a = i - S.tap_a[t], b = j - S.tap_b[t];
        if (g.contains(a, b)) acc += S.tap_v[t] * g(a, b);
    }
    return acc;
}

struct MIntegrand {
    Field base, mac;  // S_Msigma(1-sigma) + S_Mc c  and  M1 + M2, both saturated and masked
};

MIntegrand m_integrand(const TumourState& u, const AdhesionStrengths& st, const DomainMask& mask,
                       const AdhesionOptions& opt) {
    const int n = u.n();
    MIntegrand g{Field(n), Field(n)};
#pragma omp parallel for schedule(static)
    for (int k = 0; k < n * n; ++k) {
        if (!mask.inside[k]) continue;
        const double s = sat(u, k, opt);
        g.base[k] = (st.S_Msigma * (1.0 - u.sigma[k]) + st.S_Mc * u.c[k]) * s;
        g.mac[k] = (u.m1[k] + u.m2[k]) * s;
    }
    return g;
}

struct CIntegrand {
    Field cells, fibre;
};

CIntegrand c_integrand(const TumourState& u, const AdhesionStrengths& st, const DomainMask& mask,
                       const AdhesionOptions& opt) {
    const int n = u.n();
    CIntegrand g{Field(n), Field(n)};
#pragma omp parallel for schedule(static)
    for (int k = 0; k < n * n; ++k) {
        if (!mask.inside[k]) continue;
        const double s = sat(u, k, opt);
        g.cells[k] = (s_cc(u.l[k], st) * u.c[k] + st.S_cl * u.l[k] + st.S_cM * (u.m1[k] + u.m2[k])) * s;
        g.fibre[k] = st.S_cF * u.f[k] * s;
    }
    return g;
}

}  // namespace

std::array<VectorField, 2> adhesion_M_pair(const TumourState& u, const SensingKernels& K,
                                           const AdhesionStrengths& st, const DomainMask& mask,
                                           const AdhesionOptions& opt) {
    const int n = u.n();
    const MIntegrand g = m_integrand(u, st, mask, opt);
    std::array<VectorField, 2> out{VectorField(n), VectorField(n)};
    const double S[2] = {st.S_M1M, st.S_M2M};
    const double invR = 1.0 / K.R;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!mask.inside(i, j)) continue;
            double bx = 0, by = 0, mx = 0, my = 0;
            for (const auto& sec : K.sectors) {
                const double w = sec.weight * sec.area;
                const double gb = w * conv(sec, g.base, i, j), gm = w * conv(sec, g.mac, i, j);
                bx += sec.nx * gb;
                by += sec.ny * gb;
                mx += sec.nx * gm;
                my += sec.ny * gm;
            }
            for (int p = 0; p < 2; ++p) {
                out[p].x(i, j) = invR * (bx + S[p] * mx);
                out[p].y(i, j) = invR * (by + S[p] * my);
            }
        }
    return out;
}

VectorField adhesion_M(const TumourState& u, const SensingKernels& K, double S_MM, const AdhesionStrengths& st,
                       const DomainMask& mask, const AdhesionOptions& opt) {
    const int n = u.n();
    const MIntegrand g = m_integrand(u, st, mask, opt);
    VectorField out(n);
    const double invR = 1.0 / K.R;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!mask.inside(i, j)) continue;
            double ax = 0, ay = 0;
            for (const auto& sec : K.sectors) {
                const double v =
                    sec.weight * sec.area * (conv(sec, g.base, i, j) + S_MM * conv(sec, g.mac, i, j));
                ax += sec.nx * v;
                ay += sec.ny * v;
            }
            out.x(i, j) = invR * ax;
            out.y(i, j) = invR * ay;
        }
    return out;
}

VectorField adhesion_c(const TumourState& u, const SensingKernels& K, const AdhesionStrengths& st,
                       const DomainMask& mask, const AdhesionOptions& opt) {
    const int n = u.n();
    const CIntegrand g = c_integrand(u, st, mask, opt);
    VectorField out(n);
    const double invR = 1.0 / K.R;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!mask.inside(i, j)) continue;
            double ax = 0, ay = 0;
            for (const auto& sec : K.sectors) {
                const double w = sec.weight * sec.area;
                const double gc = conv(sec, g.cells, i, j);
                ax += w * sec.nx * gc;
                ay += w * sec.ny * gc;
                const double gf = conv(sec, g.fibre, i, j);
                if (gf == 0.0) continue;
                // Fibre-biased direction, with the orientation sampled at x + b.
                const double vx = sec.bx + conv(sec, u.theta_x, i, j);
                const double vy = sec.by + conv(sec, u.theta_y, i, j);
                const double len = std::hypot(vx, vy);
                if (len == 0.0) continue;
                ax += w * gf * vx / len;
                ay += w * gf * vy / len;
            }
            out.x(i, j) = invR * ax;
            out.y(i, j) = invR * ay;
        }
    return out;
}

namespace reference {

namespace {

// Bilinear interpolation of a node field at the point (px, py) given in
// index units; nodes off the grid contribute zero.
double interpolate(const Field& g, double px, double py) {
    const double fx0 = std::floor(px), fy0 = std::floor(py);
    const int i0 = static_cast<int>(fx0), j0 = static_cast<int>(fy0);
    const double fx = px - fx0, fy = py - fy0;
    double acc = 0.0;
    auto at = [&](int a, int b) { return g.contains(a, b) ? g(a, b) : 0.0; };
    acc += (1 - fx) * (1 - fy) * at(i0, j0);
    acc += fx * (1 - fy) * at(i0 + 1, j0);
    acc += (1 - fx) * fy * at(i0, j0 + 1);
    acc += fx * fy * at(i0 + 1, j0 + 1);
    return acc;
}

}  // namespace

VectorField adhesion_M(const TumourState& u, const SensingKernels& K, double S_MM, const AdhesionStrengths& st,
                       const DomainMask& mask, const AdhesionOptions& opt) {
    const int n = u.n();
    Field g(n);
    for (int k = 0; k < n * n; ++k) {
        if (!mask.inside[k]) continue;
        const double s = opt.saturation ? std::max(0.0, 1.0 - u.rho(k)) : 1.0;
        g[k] = (st.S_Msigma * (1.0 - u.sigma[k]) + st.S_Mc * u.c[k] + S_MM * (u.m1[k] + u.m2[k])) * s;
    }
    VectorField out(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!mask.inside(i, j)) continue;
            double ax = 0, ay = 0;
            for (const auto& sec : K.sectors) {
                const double v = interpolate(g, i + sec.bx / K.h, j + sec.by / K.h);
                ax += sec.weight * sec.area * sec.nx * v;
                ay += sec.weight * sec.area * sec.ny * v;
            }
            out.x(i, j) = ax / K.R;
            out.y(i, j) = ay / K.R;
        }
    return out;
}

VectorField adhesion_c(const TumourState& u, const SensingKernels& K, const AdhesionStrengths& st,
                       const DomainMask& mask, const AdhesionOptions& opt) {
    const int n = u.n();
    Field gc(n), gf(n);
    for (int k = 0; k < n * n; ++k) {
        if (!mask.inside[k]) continue;
        const double s = opt.saturation ? std::max(0.0, 1.0 - u.rho(k)) : 1.0;
        gc[k] = (s_cc(u.l[k], st) * u.c[k] + st.S_cl * u.l[k] + st.S_cM * (u.m1[k] + u.m2[k])) * s;
        gf[k] = st.S_cF * u.f[k] * s;
    }
    VectorField out(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!mask.inside(i, j)) continue;
            double ax = 0, ay = 0;
            for (const auto& sec : K.sectors) {
                const double px = i + sec.bx / K.h, py = j + sec.by / K.h;
                const double w = sec.weight * sec.area;
                const double cell = interpolate(gc, px, py);
                ax += w * sec.nx * cell;
                ay += w * sec.ny * cell;
                const double fib = interpolate(gf, px, py);
                const double vx = sec.bx + interpolate(u.theta_x, px, py);
                const double vy = sec.by + interpolate(u.theta_y, px, py);
                const double len = std::sqrt(vx * vx + vy * vy);
                if (len > 0.0) {
                    ax += w * fib * vx / len;
                    ay += w * fib * vy / len;
                }
            }
            out.x(i, j) = ax / K.R;
            out.y(i, j) = ay / K.R;
        }
    return out;
}

}  // namespace reference

}  // namespace invasion
