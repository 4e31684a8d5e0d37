#pragma once

#include "invasion/field.hpp"

namespace invasion {

// Macro fields on the full grid. c, m1, m2 vanish outside the tumour; the
// matrix fields l, f and the fibre orientation exist everywhere.
struct TumourState {
    Field c, m1, m2, l, f;
    Field theta_x, theta_y;  // fibre orientation, |theta| = f where defined
    Field sigma;
    double time = 0.0;

    TumourState() = default;
    explicit TumourState(int n)
        : c(n), m1(n), m2(n), l(n), f(n), theta_x(n), theta_y(n), sigma(n), time(0.0) {}

    int n() const { return c.n; }

    // Total volume fraction c + M1 + M2 + l + F at node k.
    double rho(std::size_t k) const { return c[k] + m1[k] + m2[k] + l[k] + f[k]; }

    bool operator==(const TumourState&) const = default;
};

}  // namespace invasion
