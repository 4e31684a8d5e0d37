#include "invasion/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numbers>

namespace invasion {

MacroGrid build_grid(double L, double h) {
    if (!(L > 0.0) || !(h > 0.0)) throw ConfigError("grid: L and h must be positive");
    const double cells = L / h;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells) || rounded < 1.0)
        throw ConfigError("grid: L/h = " + std::to_string(cells) + " is not an integer");
    MacroGrid g;
    g.L = L;
    g.h = h;
    g.n = static_cast<int>(rounded) + 1;
    return g;
}

std::size_t DomainMask::count() const {
    return static_cast<std::size_t>(std::count(inside.data.begin(), inside.data.end(), 1));
}

namespace {

// Clockwise ring starting west; y points up.
constexpr std::array<std::array<int, 2>, 8> kRing{{{-1, 0}, {-1, 1}, {0, 1}, {1, 1},
                                                    {1, 0}, {1, -1}, {0, -1}, {-1, -1}}};

int ring_index(int dx, int dy) {
    for (int d = 0; d < 8; ++d)
        if (kRing[d][0] == dx && kRing[d][1] == dy) return d;
    return -1;
}

bool on(const Mask& m, int i, int j) { return m.contains(i, j) && m(i, j) != 0; }

double signed_area(const Mask& m, const std::vector<int>& poly) {
    double a = 0.0;
    const int n = m.n;
    for (std::size_t k = 0; k < poly.size(); ++k) {
        const int p = poly[k], q = poly[(k + 1) % poly.size()];
        a += static_cast<double>(p % n) * (q / n) - static_cast<double>(q % n) * (p / n);
    }
    return 0.5 * a;
}

}  // namespace

std::vector<int> trace_contour(const Mask& tumour, int start) {
    const int n = tumour.n;
    std::vector<int> out{start};
    int pi = start % n, pj = start / n;
    int back = 0;  // west of the lowest-leftmost node is never tumour
    int first_move = -1;
    const std::size_t cap = 4 * tumour.size() + 16;
    for (std::size_t step = 0; step < cap; ++step) {
        int found = -1;
        for (int k = 1; k <= 8; ++k) {
            const int d = (back + k) % 8;
            if (on(tumour, pi + kRing[d][0], pj + kRing[d][1])) {
                found = d;
                break;
            }
        }
        if (found < 0) return out;  // isolated node
        // Jacob's criterion: leaving the start the same way as the first time closes the loop
        if (pi + pj * n == start) {
            if (first_move < 0)
                first_move = found;
            else if (found == first_move)
                break;
        }
        const int prev = (found + 7) % 8;
        const int bi = pi + kRing[prev][0], bj = pj + kRing[prev][1];
        pi += kRing[found][0];
        pj += kRing[found][1];
        back = ring_index(bi - pi, bj - pj);
        out.push_back(pi + pj * n);
    }
    // the walk ends back on the start node
    if (out.size() > 1 && out.back() == start) out.pop_back();
    if (signed_area(tumour, out) < 0.0) std::reverse(out.begin() + 1, out.end());
    return out;
}

std::vector<int> outer_boundary(const DomainMask& mask) {
    std::vector<int> out;
    for (std::size_t k = 0; k < mask.outer.size(); ++k)
        if (mask.outer[k]) out.push_back(static_cast<int>(k));
    return out;
}

DomainMask compute_masks(const Mask& tumour, const MacroGrid& grid) {
    const int n = grid.n;
    DomainMask m;
    m.inside = tumour;
    m.boundary = Mask(n);
    m.interior = Mask(n);
    m.weno_inside = Mask(n);
    m.weno_layer = Mask(n);
    m.outer = Mask(n);

#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (!tumour(i, j)) continue;
            bool edge = false;
            for (int dj = -1; dj <= 1 && !edge; ++dj)
                for (int di = -1; di <= 1; ++di)
                    if ((di || dj) && !on(tumour, i + di, j + dj)) {
                        edge = true;
                        break;
                    }
            m.boundary(i, j) = edge;
            m.interior(i, j) = !edge;
            bool cross = true;
            for (int k = 1; k <= 3 && cross; ++k)
                cross = on(tumour, i + k, j) && on(tumour, i - k, j) && on(tumour, i, j + k) &&
                        on(tumour, i, j - k);
            m.weno_inside(i, j) = cross;
            m.weno_layer(i, j) = !cross;
        }
    }

    // 4-connected flood fill of the exterior from the frame of Y.
    Mask reached(n);
    std::deque<int> queue;
    auto seed = [&](int i, int j) {
        if (!tumour(i, j) && !reached(i, j)) {
            reached(i, j) = 1;
            queue.push_back(j * n + i);
        }
    };
    for (int k = 0; k < n; ++k) {
        seed(k, 0);
        seed(k, n - 1);
        seed(0, k);
        seed(n - 1, k);
    }
    while (!queue.empty()) {
        const int p = queue.front();
        queue.pop_front();
        const int i = p % n, j = p / n;
        constexpr int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (auto& d : nb) {
            const int a = i + d[0], b = j + d[1];
            if (tumour.contains(a, b)) seed(a, b);
        }
    }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!m.boundary(i, j)) continue;
            bool escapes = false;
            for (int dj = -1; dj <= 1 && !escapes; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    if (!(di || dj)) continue;
                    if (!tumour.contains(i + di, j + dj) || reached(i + di, j + dj)) {
                        escapes = true;
                        break;
                    }
                }
            m.outer(i, j) = escapes;
        }

    // 8-connected components, discovered in raster order so each starts at
    // its lowest-then-leftmost node.
    Mask seen(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!tumour(i, j) || seen(i, j)) continue;
            std::vector<int> stack{j * n + i};
            seen(i, j) = 1;
            while (!stack.empty()) {
                const int p = stack.back();
                stack.pop_back();
                for (int dj = -1; dj <= 1; ++dj)
                    for (int di = -1; di <= 1; ++di) {
                        const int a = p % n + di, b = p / n + dj;
                        if (on(tumour, a, b) && !seen(a, b)) {
                            seen(a, b) = 1;
                            stack.push_back(b * n + a);
                        }
                    }
            }
            m.contours.push_back(trace_contour(tumour, j * n + i));
        }

    Mask listed(n);
    for (const auto& c : m.contours)
        for (int p : c)
            if (m.outer[p] && !listed[p]) {
                listed[p] = 1;
                m.outer_boundary.push_back(p);
            }
    for (std::size_t k = 0; k < m.outer.size(); ++k)
        if (m.outer[k] && !listed[k]) m.outer_boundary.push_back(static_cast<int>(k));
    return m;
}

Mask repolarisation_mask(const DomainMask& mask, const MacroGrid& grid, double R_p) {
    if (R_p < 0.0) throw ConfigError("repolarisation radius must be nonnegative");
    const int n = mask.n();
    Mask out = mask.inside;
    if (R_p == 0.0 || mask.outer_boundary.empty()) return out;
    const double r2 = (R_p / grid.h) * (R_p / grid.h) - 1e-9;
    const auto& ob = mask.outer_boundary;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!out(i, j)) continue;
            for (int p : ob) {
                const double di = i - p % n, dj = j - p / n;
                if (di * di + dj * dj < r2) {
                    out(i, j) = 0;
                    break;
                }
            }
        }
    return out;
}

double mollifier_integral() {
    // pi * int_0^1 exp(-1/s) ds = pi * (e^-1 - E1(1)), and E1(1) = -Ei(-1).
    static const double value = std::numbers::pi * (std::exp(-1.0) + std::expint(-1.0));
    return value;
}

double mollifier_value(double zx, double zy, double range) {
    const double r2 = (zx * zx + zy * zy) / (range * range);
    if (r2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r2)) / mollifier_integral() / (range * range);
}

Field mollify_indicator(const Mask& chars, const MacroGrid& grid, double range) {
    const int n = grid.n;
    const int w = static_cast<int>(std::ceil(range / grid.h));
    const int side = 2 * w + 1;
    std::vector<double> kernel(side * side);
    double mass = 0.0;
    for (int b = -w; b <= w; ++b)
        for (int a = -w; a <= w; ++a) {
            const double v = mollifier_value(a * grid.h, b * grid.h, range);
            kernel[(b + w) * side + a + w] = v;
            mass += v * grid.h * grid.h;
        }
    // Discrete convolution: sum over y of chi(y) psi(x - y) h^2.
    for (double& v : kernel) v *= grid.h * grid.h / mass;

    Field out(n);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int b = -w; b <= w; ++b)
                for (int a = -w; a <= w; ++a)
                    if (on(chars, i - a, j - b)) acc += kernel[(b + w) * side + a + w];
            out(i, j) = acc;
        }
    return out;
}

}  // namespace invasion
