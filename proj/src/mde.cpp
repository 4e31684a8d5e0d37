#include "invasion/mde.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "invasion/sor.hpp"

namespace invasion {

MdePatch make_patch(int node, const MacroGrid& grid, double width, int cells) {
    if (!(width > 0.0) || cells < 1) throw ConfigError("MDE patch needs a positive width and cell count");
    MdePatch p;
    p.node = node;
    p.cx = grid.coord(node % grid.n);
    p.cy = grid.coord(node / grid.n);
    p.width = width;
    p.cells = cells;
    return p;
}

bool point_inside(const DomainMask& mask, const MacroGrid& grid, double x, double y) {
    const int i = static_cast<int>(std::lround(x / grid.h));
    const int j = static_cast<int>(std::lround(y / grid.h));
    return mask.inside.contains(i, j) && mask.inside(i, j);
}

double distance_to_tumour(const DomainMask& mask, const MacroGrid& grid, double x, double y) {
    const double h = grid.h;
    const int ci = static_cast<int>(std::lround(x / h)), cj = static_cast<int>(std::lround(y / h));
    double best = std::numeric_limits<double>::infinity();
    for (int j = cj - 3; j <= cj + 3; ++j)
        for (int i = ci - 3; i <= ci + 3; ++i) {
            if (!mask.inside.contains(i, j) || !mask.inside(i, j)) continue;
            const double ex = std::max(0.0, std::abs(x - i * h) - 0.5 * h);
            const double ey = std::max(0.0, std::abs(y - j * h) - 0.5 * h);
            best = std::min(best, std::hypot(ex, ey));
        }
    return best;
}

Field mde_secretion_mean(const TumourState& u, const DomainMask& mask, const MacroGrid& grid, const ModelParams& p) {
    const int n = grid.n;
    const int half = static_cast<int>(std::lround(p.gamma_h / grid.h));
    if (half < 1) throw ConfigError("MDE source radius must be at least one grid spacing");
    std::vector<double> w(2 * half + 1, 2.0);
    w.front() = w.back() = 1.0;
    Field secreted(n);
    for (std::size_t k = 0; k < secreted.size(); ++k)
        secreted[k] = mask.inside[k] ? p.alpha_c * u.c[k] + p.alpha_M1 * u.m1[k] + p.alpha_M2 * u.m2[k] : 0.0;
    Field mean(n);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double num = 0.0, den = 0.0;
            for (int b = -half; b <= half; ++b)
                for (int a = -half; a <= half; ++a) {
                    const int ii = i + a, jj = j + b;
                    if (!mask.inside.contains(ii, jj) || !mask.inside(ii, jj)) continue;
                    const double wt = w[a + half] * w[b + half];
                    num += wt * secreted(ii, jj);
                    den += wt;
                }
            mean(i, j) = den > 0.0 ? num / den : 0.0;
        }
    return mean;
}

namespace {

double bilinear(const Field& f, double h, double x, double y) {
    const int n = f.n;
    const double fx = std::clamp(x / h, 0.0, n - 1.0), fy = std::clamp(y / h, 0.0, n - 1.0);
    const int i = std::min(static_cast<int>(fx), n - 2), j = std::min(static_cast<int>(fy), n - 2);
    const double s = fx - i, t = fy - j;
    return (1 - s) * (1 - t) * f(i, j) + s * (1 - t) * f(i + 1, j) + (1 - s) * t * f(i, j + 1) +
           s * t * f(i + 1, j + 1);
}

}  // namespace

std::vector<double> mde_source(const MdePatch& patch, const Field& mean, const DomainMask& mask,
                               const MacroGrid& grid, double band) {
    if (!(band > 0.0)) throw ConfigError("MDE source band must be positive");
    const int M = patch.cells;
    std::vector<double> s(static_cast<std::size_t>(M) * M, 0.0);
    for (int b = 0; b < M; ++b)
        for (int a = 0; a < M; ++a) {
            const double x = patch.cell_x(a), y = patch.cell_y(b);
            const double d = distance_to_tumour(mask, grid, x, y);
            if (d >= band) continue;
            s[static_cast<std::size_t>(b) * M + a] = (1.0 - d / band) * bilinear(mean, grid.h, x, y);
        }
    return s;
}

MdeSolution solve_mde(const MdePatch& patch, const std::vector<double>& source, double D, double duration,
                      int steps, double omega, double tol) {
    if (!(D > 0.0)) throw ConfigError("MDE diffusion coefficient must be positive");
    if (!(duration > 0.0) || steps < 1) throw ConfigError("MDE solve needs a positive duration and step count");
    const int M = patch.cells;
    const std::size_t N = static_cast<std::size_t>(M) * M;
    if (source.size() != N) throw ConfigError("MDE source has the wrong size");
    const double dt = duration / steps;
    const double w = D / (patch.dy() * patch.dy());

    SorSystem sys(N);
    for (int b = 0; b < M; ++b)
        for (int a = 0; a < M; ++a) {
            const int k = b * M + a;
            ((a + b) % 2 ? sys.black : sys.red).push_back(k);
            int slot = 0;
            const int nbs[4][2] = {{a - 1, b}, {a + 1, b}, {a, b - 1}, {a, b + 1}};
            for (const auto& q : nbs) {
                if (q[0] < 0 || q[0] >= M || q[1] < 0 || q[1] >= M) continue;
                sys.nb[k][slot] = q[1] * M + q[0];
                sys.weight[k][slot] = w;
                ++slot;
            }
            sys.diag[k] = 1.0 / dt + slot * w;
        }

    MdeSolution out;
    out.m.assign(N, 0.0);
    const SorOptions opt{omega, tol, 1000000};
    for (int step = 0; step < steps; ++step) {
        for (std::size_t k = 0; k < N; ++k) sys.rhs[k] = out.m[k] / dt + source[k];
        out.iterations += sor_solve(sys, out.m, opt).iterations;
    }
    for (double& v : out.m) v = std::max(0.0, v);
    return out;
}

BoundaryMove boundary_move(const MdePatch& patch, const std::vector<double>& m, const DomainMask& mask,
                           const MacroGrid& grid, int level) {
    const int M = patch.cells;
    const int K = 1 << level;
    if (level < 0 || M % K != 0) throw ConfigError("dyadic level does not divide the patch mesh");
    const int span = M / K;
    const double area = patch.dy() * patch.dy();

    BoundaryMove out;
    double total = 0.0, exterior = 0.0;
    for (int b = 0; b < M; ++b)
        for (int a = 0; a < M; ++a) {
            const double v = m[static_cast<std::size_t>(b) * M + a] * area;
            total += v;
            if (!point_inside(mask, grid, patch.cell_x(a), patch.cell_y(b))) exterior += v;
        }
    if (!(total > 0.0)) return out;
    out.q_defined = true;
    out.q = std::clamp(exterior / total, 0.0, 1.0);

    struct Cube {
        double mass, x, y, dist;
    };
    // exterior cubes compete against their own mean; interior cubes hold the
    // secretion source and would otherwise dominate any average
    std::vector<Cube> exterior_cubes;
    for (int cb = 0; cb < K; ++cb)
        for (int ca = 0; ca < K; ++ca) {
            const double x = patch.cx + ((ca + 0.5) * span) * patch.dy() - 0.5 * patch.width;
            const double y = patch.cy + ((cb + 0.5) * span) * patch.dy() - 0.5 * patch.width;
            if (point_inside(mask, grid, x, y)) continue;
            double mass = 0.0;
            for (int b = cb * span; b < (cb + 1) * span; ++b)
                for (int a = ca * span; a < (ca + 1) * span; ++a) mass += m[static_cast<std::size_t>(b) * M + a] * area;
            exterior_cubes.push_back({mass, x, y, std::hypot(x - patch.cx, y - patch.cy)});
        }
    if (exterior_cubes.empty()) return out;
    double average = 0.0;
    for (const Cube& c : exterior_cubes) average += c.mass;
    average /= exterior_cubes.size();
    std::vector<Cube> cubes;
    for (const Cube& c : exterior_cubes)
        if (c.mass > average * (1.0 + 1e-12)) cubes.push_back(c);
    if (cubes.empty()) return out;
    double far = 0.0;
    for (const Cube& c : cubes) far = std::max(far, c.dist);
    double sx = 0.0, sy = 0.0, mass = 0.0, reach = 0.0;
    for (const Cube& c : cubes) {
        if (c.dist < far * (1.0 - 1e-12)) continue;
        sx += c.mass * (c.x - patch.cx);
        sy += c.mass * (c.y - patch.cy);
        mass += c.mass;
        reach += c.mass * c.dist;
    }
    const double len = std::hypot(sx, sy);
    if (!(len > 1e-12 * mass * patch.width)) return out;
    out.move = true;
    out.dx = sx / len;
    out.dy = sy / len;
    out.xi = reach / mass;
    return out;
}

double tissue_threshold_value(double ratio, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("tissue threshold needs beta in (0, 1)");
    const double half_pi = 0.5 * std::numbers::pi;
    if (ratio <= beta) return std::sin(half_pi * (1.0 - ratio / beta));
    return std::sin(half_pi / (1.0 - beta) * (ratio - beta));
}

bool tissue_threshold(double q, double v_star, double v_sup, double beta) {
    if (!(v_sup > 0.0)) throw std::domain_error("tissue threshold needs a positive ECM supremum");
    return q > tissue_threshold_value(v_star / v_sup, beta);
}

namespace {

struct Pt {
    double x, y;
};

double cross(const Pt& o, const Pt& a, const Pt& b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

double segment_distance(const Pt& p, const Pt& a, const Pt& b) {
    const double ex = b.x - a.x, ey = b.y - a.y;
    const double len2 = ex * ex + ey * ey;
    double t = len2 > 0.0 ? ((p.x - a.x) * ex + (p.y - a.y) * ey) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - a.x - t * ex, p.y - a.y - t * ey);
}

// Even-odd rule; points within tol of an edge count as inside.
bool in_polygon(const std::vector<Pt>& poly, const Pt& p, double tol) {
    const std::size_t E = poly.size();
    bool in = false;
    for (std::size_t k = 0; k < E; ++k) {
        const Pt& a = poly[k];
        const Pt& b = poly[(k + 1) % E];
        if (segment_distance(p, a, b) <= tol) return true;
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < x) in = !in;
        }
    }
    return in;
}

// Proper crossings only: edges that merely touch or overlap are allowed,
// which the contour of a thin neck needs.
bool self_intersects(const std::vector<Pt>& poly) {
    const std::size_t E = poly.size();
    if (E < 4) return false;
    for (std::size_t a = 0; a < E; ++a) {
        const Pt& p1 = poly[a];
        const Pt& p2 = poly[(a + 1) % E];
        for (std::size_t b = a + 2; b < E; ++b) {
            if (a == 0 && b == E - 1) continue;
            const Pt& q1 = poly[b];
            const Pt& q2 = poly[(b + 1) % E];
            const double d1 = cross(p1, p2, q1), d2 = cross(p1, p2, q2);
            const double d3 = cross(q1, q2, p1), d4 = cross(q1, q2, p2);
            if (d1 * d2 < 0.0 && d3 * d4 < 0.0) return true;
        }
    }
    return false;
}

void add_capsule(Mask& tumour, int& added, const MacroGrid& grid, const Pt& a, const Pt& b) {
    const double h = grid.h, r = 0.5 * h * (1.0 + 1e-9);
    const int i0 = std::max(0, static_cast<int>(std::floor((std::min(a.x, b.x) - r) / h)));
    const int i1 = std::min(grid.n - 1, static_cast<int>(std::ceil((std::max(a.x, b.x) + r) / h)));
    const int j0 = std::max(0, static_cast<int>(std::floor((std::min(a.y, b.y) - r) / h)));
    const int j1 = std::min(grid.n - 1, static_cast<int>(std::ceil((std::max(a.y, b.y) + r) / h)));
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i)
            if (!tumour(i, j) && segment_distance({i * h, j * h}, a, b) <= r) {
                tumour(i, j) = 1;
                ++added;
            }
}

}  // namespace

MovementResult apply_boundary_movement(const DomainMask& mask, const MacroGrid& grid,
                                       const std::vector<PatchDecision>& decisions) {
    const int n = grid.n;
    const double h = grid.h, tol = 1e-9 * h;
    MovementResult out;
    out.tumour = mask.inside;

    std::unordered_map<int, const PatchDecision*> moving;
    for (const PatchDecision& d : decisions)
        if (d.move && d.xi > 0.0) moving[d.node] = &d;
    if (moving.empty()) return out;

    auto displaced = [&](int node) {
        Pt p{(node % n) * h, (node / n) * h};
        auto it = moving.find(node);
        if (it != moving.end()) {
            p.x += it->second->xi * it->second->dx;
            p.y += it->second->xi * it->second->dy;
        }
        return p;
    };

    std::vector<char> on_contour(static_cast<std::size_t>(n) * n, 0);
    for (const auto& contour : mask.contours) {
        bool any = false;
        std::vector<Pt> before, after;
        for (int node : contour) {
            on_contour[node] = 1;
            any = any || moving.count(node);
            before.push_back({(node % n) * h, (node / n) * h});
            after.push_back(displaced(node));
        }
        if (!any) continue;
        if (contour.size() < 3 || self_intersects(before) || self_intersects(after)) {
            ++out.fallback_contours;
            for (int node : contour)
                if (moving.count(node))
                    add_capsule(out.tumour, out.added, grid, {(node % n) * h, (node / n) * h}, displaced(node));
            continue;
        }
        double xmin = after[0].x, xmax = xmin, ymin = after[0].y, ymax = ymin;
        for (const Pt& p : after) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
        const int i0 = std::max(0, static_cast<int>(std::floor(xmin / h)));
        const int i1 = std::min(n - 1, static_cast<int>(std::ceil(xmax / h)));
        const int j0 = std::max(0, static_cast<int>(std::floor(ymin / h)));
        const int j1 = std::min(n - 1, static_cast<int>(std::ceil(ymax / h)));
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) {
                if (out.tumour(i, j)) continue;
                const Pt p{i * h, j * h};
                if (in_polygon(after, p, tol) && !in_polygon(before, p, tol)) {
                    out.tumour(i, j) = 1;
                    ++out.added;
                }
            }
    }
    // boundary nodes that no contour reached move on their own
    for (const auto& [node, d] : moving)
        if (!on_contour[node])
            add_capsule(out.tumour, out.added, grid, {(node % n) * h, (node / n) * h}, displaced(node));
    return out;
}

BoundaryStage boundary_stage(const TumourState& u, const DomainMask& mask, const MacroGrid& grid,
                             const ModelParams& p, double duration) {
    BoundaryStage out;
    const std::vector<int>& nodes = mask.outer_boundary;
    out.patches = static_cast<int>(nodes.size());
    if (nodes.empty()) return out;

    double v_sup = 0.0;
    for (std::size_t k = 0; k < mask.boundary.size(); ++k)
        if (mask.boundary[k]) v_sup = std::max(v_sup, u.l[k] + u.f[k]);
    const Field mean = mde_secretion_mean(u, mask, grid, p);

    struct Result {
        PatchDecision decision;
        BoundaryMove move;
        double identity = 0.0;
        long long iterations = 0;
    };
    std::vector<Result> results(nodes.size());
    // exceptions must not leave the parallel region; keep the first and rethrow
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t q = 0; q < nodes.size(); ++q) try {
        const MdePatch patch = make_patch(nodes[q], grid, p.eps, p.mde_cells);
        const std::vector<double> src = mde_source(patch, mean, mask, grid, p.mde_band);
        const MdeSolution sol = solve_mde(patch, src, p.D_m, duration, p.mde_substeps, p.mde_sor_omega, p.mde_sor_tol);
        double ms = 0.0, mm = 0.0;
        for (std::size_t k = 0; k < src.size(); ++k) {
            ms += src[k];
            mm += sol.m[k];
        }
        Result& r = results[q];
        r.identity = std::abs(mm / src.size() - ms / src.size() * duration);
        r.iterations = sol.iterations;
        r.move = boundary_move(patch, sol.m, mask, grid, p.mde_dyadic_level);
        r.decision.node = nodes[q];
        const double v_star = u.l[nodes[q]] + u.f[nodes[q]];
        r.decision.move =
            r.move.move && r.move.q_defined && v_sup > 0.0 && tissue_threshold(r.move.q, v_star, v_sup, p.beta);
        r.decision.dx = r.move.dx;
        r.decision.dy = r.move.dy;
        r.decision.xi = r.move.xi;
    } catch (...) {
#pragma omp critical(mde_failure)
        if (!failure) failure = std::current_exception();
    }
    if (failure) std::rethrow_exception(failure);
    for (const Result& r : results) {
        out.decisions.push_back(r.decision);
        out.moving += r.decision.move ? 1 : 0;
        if (r.move.q_defined) {
            out.q_min = std::min(out.q_min, r.move.q);
            out.q_max = std::max(out.q_max, r.move.q);
        }
        out.mean_identity_error = std::max(out.mean_identity_error, r.identity);
        out.sor_iterations += r.iterations;
    }
    return out;
}

}  // namespace invasion
