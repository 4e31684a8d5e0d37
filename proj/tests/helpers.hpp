#pragma once

#include <cmath>
#include <random>

#include "invasion/field.hpp"
#include "invasion/grid.hpp"
#include "invasion/state.hpp"

namespace testing_util {

using namespace invasion;

inline Mask disc_mask(int n, double ci, double cj, double radius) {
    Mask m(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = std::hypot(i - ci, j - cj) <= radius ? 1 : 0;
    return m;
}

inline Mask box_mask(int n, int i0, int i1, int j0, int j1) {
    Mask m(n);
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) m(i, j) = 1;
    return m;
}

inline Mask full_mask(int n) {
    Mask m(n);
    for (auto& v : m.data) v = 1;
    return m;
}

inline void fill_uniform(Field& f, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    for (double& v : f.data) v = d(rng);
}

inline double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f.data) m = std::max(m, std::abs(v));
    return m;
}

inline double max_rel_diff(const Field& a, const Field& b) {
    double err = 0.0;
    const double scale = std::max(max_abs(b), 1e-300);
    for (std::size_t k = 0; k < a.size(); ++k) err = std::max(err, std::abs(a[k] - b[k]));
    return err / scale;
}

}  // namespace testing_util
