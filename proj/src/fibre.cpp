#include "invasion/fibre.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "invasion/diffusion.hpp"

namespace invasion {

MicroFibreField::MicroFibreField(int n_, int cells_, double h_, double f_max_)
    : n(n_), cells(cells_), h(h_), f_max(f_max_) {
    if (n < 1 || cells < 1 || cells % 2 == 0) throw ConfigError("micro fibre mesh needs an odd cell count");
    f.assign(static_cast<std::size_t>(side()) * side(), 0.0);
}

double MicroFibreField::total() const { return std::accumulate(f.begin(), f.end(), 0.0); }

FibreOrientation theta_f_from_micro(const MicroFibreField& micro, int i, int j) {
    const int M = micro.cells, half = M / 2;
    const double dz = micro.dz();
    double mass = 0.0, mx = 0.0, my = 0.0;
    for (int b = 0; b < M; ++b)
        for (int a = 0; a < M; ++a) {
            const double v = micro.at(i * M + a, j * M + b);
            mass += v;
            mx += v * (a - half) * dz;
            my += v * (b - half) * dz;
        }
    FibreOrientation o;
    o.amount = mass / (M * M);
    if (mass <= 0.0) return o;
    const double bx = mx / mass, by = my / mass;
    const double len = std::hypot(bx, by);
    // offsets below rounding noise of the cell coordinates count as zero
    if (len <= 1e-12 * dz) return o;
    o.x = o.amount * bx / len;
    o.y = o.amount * by / len;
    return o;
}

void extract_orientation(const MicroFibreField& micro, TumourState& u) {
    const int n = micro.n;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const FibreOrientation o = theta_f_from_micro(micro, i, j);
            u.f(i, j) = o.amount;
            u.theta_x(i, j) = o.x;
            u.theta_y(i, j) = o.y;
        }
}

std::array<double, 2> rearrangement_vector(double c, double m1, double m2, double F,
                                           const std::array<double, 2>& flux_c, const std::array<double, 2>& flux_m1,
                                           const std::array<double, 2>& flux_m2, const std::array<double, 2>& theta) {
    const double total = c + m1 + m2 + F;
    if (!(total > 0.0)) return {0.0, 0.0};
    std::array<double, 2> r{};
    for (int d = 0; d < 2; ++d)
        r[d] = (c * flux_c[d] + m1 * flux_m1[d] + m2 * flux_m2[d] + F * theta[d]) / total;
    return r;
}

namespace {

// Central difference inside the tumour, one-sided next to its edge.
double gradient(const Field& u, const Mask& in, int i, int j, int di, int dj, double h) {
    const int n = u.n;
    const int ip = i + di, jp = j + dj, im = i - di, jm = j - dj;
    const bool fwd = ip >= 0 && ip < n && jp >= 0 && jp < n && in(ip, jp);
    const bool bwd = im >= 0 && im < n && jm >= 0 && jm < n && in(im, jm);
    if (fwd && bwd) return (u(ip, jp) - u(im, jm)) / (2.0 * h);
    if (fwd) return (u(ip, jp) - u(i, j)) / h;
    if (bwd) return (u(i, j) - u(im, jm)) / h;
    return 0.0;
}

}  // namespace

MigrationFluxes migration_fluxes(const TumourState& u, const MacroContext& ctx) {
    const int n = u.n();
    const double h = ctx.grid->h;
    const Mask& in = ctx.mask->inside;
    const AdhesionFluxes adv = adhesion_fluxes(u, ctx);
    const Field Dc = diffusion_coeff_c(u, *ctx.params), DM = diffusion_coeff_M(u, *ctx.params);
    MigrationFluxes out{VectorField(n), VectorField(n), VectorField(n)};
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!in(i, j)) continue;
            const std::size_t k = static_cast<std::size_t>(j) * n + i;
            out.c.x[k] = Dc[k] * gradient(u.c, in, i, j, 1, 0, h) - adv.c.x[k];
            out.c.y[k] = Dc[k] * gradient(u.c, in, i, j, 0, 1, h) - adv.c.y[k];
            out.m1.x[k] = DM[k] * gradient(u.m1, in, i, j, 1, 0, h) - adv.m1.x[k];
            out.m1.y[k] = DM[k] * gradient(u.m1, in, i, j, 0, 1, h) - adv.m1.y[k];
            out.m2.x[k] = DM[k] * gradient(u.m2, in, i, j, 1, 0, h) - adv.m2.x[k];
            out.m2.y[k] = DM[k] * gradient(u.m2, in, i, j, 0, 1, h) - adv.m2.y[k];
        }
    return out;
}

namespace {

struct Transfer {
    std::size_t source = 0, target = 0;
    double amount = 0.0;
};

}  // namespace

RearrangeStats rearrange_micro(MicroFibreField& micro, const Field& rx, const Field& ry, const Field& F,
                               const Mask& active) {
    const int n = micro.n, M = micro.cells, half = M / 2, S = micro.side();
    const double dz = micro.dz(), fmax = micro.f_max, reach = micro.h;

    // phase 1: every block proposes its transfers from the current field
    std::vector<std::vector<Transfer>> proposals(static_cast<std::size_t>(n) * n);
#pragma omp parallel for schedule(dynamic, 4)
    for (int node = 0; node < n * n; ++node) {
        if (!active[node]) continue;
        const int i = node % n, j = node / n;
        const double r0 = rx[node], r1 = ry[node];
        // nothing drives the block without a rearrangement vector
        if (r0 == 0.0 && r1 == 0.0) continue;
        const double saturation = F[node] / fmax;
        auto& list = proposals[node];
        for (int b = 0; b < M; ++b)
            for (int a = 0; a < M; ++a) {
                const int I = i * M + a, J = j * M + b;
                const double fz = micro.at(I, J);
                if (!(fz > 0.0)) continue;
                const double dx = (a - half) * dz, dy = (b - half) * dz;
                const double denom = saturation + std::hypot(r0 - dx, r1 - dy);
                if (!(denom > 0.0)) continue;
                const double scale = fz * (fmax - fz) / denom;
                double vx = (dx + r0) * scale, vy = (dy + r1) * scale;
                const double big = std::max(std::abs(vx), std::abs(vy));
                if (big > reach) {
                    vx *= reach / big;
                    vy *= reach / big;
                }
                const int It = std::clamp(I + static_cast<int>(std::lround(vx / dz)), 0, S - 1);
                const int Jt = std::clamp(J + static_cast<int>(std::lround(vy / dz)), 0, S - 1);
                if (It == I && Jt == J) continue;
                const double p_move = std::max(0.0, (fmax - micro.at(It, Jt)) / fmax);
                if (!(p_move > 0.0)) continue;
                list.push_back({static_cast<std::size_t>(J) * S + I, static_cast<std::size_t>(Jt) * S + It,
                                p_move * fz});
            }
    }

    // phase 2: serial application in node order; a full target keeps the rest at the source
    RearrangeStats stats;
    for (const auto& list : proposals)
        for (const Transfer& t : list) {
            const double room = std::max(0.0, fmax - micro.f[t.target]);
            const double amount = std::min({t.amount, room, micro.f[t.source]});
            if (!(amount > 0.0)) {
                stats.held_back += t.amount;
                continue;
            }
            // debit what actually arrived so rounding can neither overshoot the cap nor lose mass
            const double before = micro.f[t.target];
            micro.f[t.target] = std::min(fmax, before + amount);
            const double landed = micro.f[t.target] - before;
            micro.f[t.source] = std::max(0.0, micro.f[t.source] - landed);
            stats.held_back += t.amount - landed;
            stats.moved += landed;
            ++stats.transfers;
        }
    return stats;
}

namespace {

double strip(double d, double width) {
    const double s = d / width;
    if (std::abs(s) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

std::vector<double> block_pattern(const std::string& pattern, int M, double dz, double width) {
    std::vector<double> p(static_cast<std::size_t>(M) * M, 1.0);
    if (pattern == "uniform") return p;
    int shift = 0;
    if (pattern == "offset-cross")
        shift = 1;
    else if (pattern != "cross")
        throw ConfigError("unknown fibre pattern '" + pattern + "'");
    const int half = M / 2;
    for (int b = 0; b < M; ++b)
        for (int a = 0; a < M; ++a) {
            const double dx = (a - half - shift) * dz, dy = (b - half - shift) * dz;
            p[static_cast<std::size_t>(b) * M + a] = 0.3 + 0.7 * std::max(strip(dx, width), strip(dy, width));
        }
    return p;
}

}  // namespace

MicroFibreField init_micro(const std::string& pattern, double ratio, const Field& l0, const MacroGrid& grid,
                           int cells, double width, double f_max) {
    if (!(ratio >= 0.0 && ratio < 1.0)) throw ConfigError("fibre ratio must lie in [0, 1)");
    if (!(width > 0.0)) throw ConfigError("fibre strip width must be positive");
    MicroFibreField micro(grid.n, cells, grid.h, f_max);
    // strips narrower than a micro cell would vanish between cell centres
    const std::vector<double> p = block_pattern(pattern, cells, micro.dz(), std::max(2.0 * width, micro.dz() * 1.5));
    const double pmean = std::accumulate(p.begin(), p.end(), 0.0) / p.size();
    const double pmax = *std::max_element(p.begin(), p.end());
    const double share = ratio / (1.0 - ratio);
    for (int j = 0; j < grid.n; ++j)
        for (int i = 0; i < grid.n; ++i) {
            const double scale = share * std::max(0.0, l0(i, j)) / pmean;
            if (scale * pmax > f_max * (1.0 + 1e-12))
                throw ConfigError("initial fibre pattern exceeds f_max; lower the fibre ratio");
            for (int b = 0; b < cells; ++b)
                for (int a = 0; a < cells; ++a) micro.at(i * cells + a, j * cells + b) = scale * p[b * cells + a];
        }
    return micro;
}

void scale_micro(MicroFibreField& micro, const Field& F_old, const Field& F_new) {
    const int n = micro.n, M = micro.cells;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double ratio = F_old(i, j) > 0.0 ? F_new(i, j) / F_old(i, j) : 0.0;
            if (ratio == 1.0) continue;
            for (int b = 0; b < M; ++b)
                for (int a = 0; a < M; ++a) {
                    double& v = micro.at(i * M + a, j * M + b);
                    v = std::min(v * ratio, micro.f_max);
                }
        }
}

}  // namespace invasion
