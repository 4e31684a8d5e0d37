#include <random>
#include <stdexcept>

#include "doctest.h"
#include "invasion/effects.hpp"

using namespace invasion;

TEST_CASE("transition function endpoints and midpoint") {
    EffectParams p;
    CHECK(transition_phi(p.sigma_n, 3.0, 1.0, p.sigma_p - p.sigma_n, p) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(transition_phi(p.sigma_p, 3.0, 1.0, 0.0, p) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(transition_phi(0.5 * (p.sigma_n + p.sigma_p), 3.0, 1.0, 0.0, p) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("effect extrema take the table values exactly") {
    EffectParams p;
    CHECK(psi_p(0.1, p) == 0.0);
    CHECK(psi_p(0.2, p) == 0.0);
    CHECK(psi_p(0.35, p) == 1.0);
    CHECK(psi_p(0.9, p) == 1.0);
    CHECK(psi_dc(0.0, p) == 5.0);
    CHECK(psi_dc(0.4, p) == 0.0);
    CHECK(psi_dM(0.2, p) == 5.0);
    CHECK(psi_dM(0.35, p) == 1.0);
    CHECK(psi_M(0.1, p) == 2.0);
    CHECK(psi_M(0.4, p) == 1.0);
    CHECK(psi_M(0.275, p) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("effect functions are continuous at the thresholds") {
    EffectParams p;
    const double e = 1e-15;
    for (double s : {p.sigma_n, p.sigma_p}) {
        CHECK(std::abs(psi_p(s + e, p) - psi_p(s - e, p)) <= 1e-12);
        CHECK(std::abs(psi_dc(s + e, p) - psi_dc(s - e, p)) <= 1e-12);
        CHECK(std::abs(psi_dM(s + e, p) - psi_dM(s - e, p)) <= 1e-12);
        CHECK(std::abs(psi_M(s + e, p) - psi_M(s - e, p)) <= 1e-12);
    }
}

TEST_CASE("monotone on the transition band") {
    EffectParams p;
    double prev_p = -1.0, prev_d = 1e9;
    for (int k = 0; k <= 1000; ++k) {
        const double s = p.sigma_n + (p.sigma_p - p.sigma_n) * k / 1000.0;
        CHECK(psi_p(s, p) >= prev_p);
        CHECK(psi_dM(s, p) <= prev_d);
        prev_p = psi_p(s, p);
        prev_d = psi_dM(s, p);
    }
}

TEST_CASE("bounds on random samples") {
    EffectParams p;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    bool ok = true;
    for (int k = 0; k < 1000000; ++k) {
        const double s = d(rng);
        ok &= psi_p(s, p) >= 0.0 && psi_p(s, p) <= 1.0;
        ok &= psi_dc(s, p) >= 0.0 && psi_dc(s, p) <= 5.0;
        ok &= psi_dM(s, p) >= 1.0 && psi_dM(s, p) <= 5.0;
        ok &= psi_M(s, p) >= 1.0 && psi_M(s, p) <= 2.0;
    }
    CHECK(ok);
}

TEST_CASE("negative nutrient is rejected") {
    EffectParams p;
    CHECK_THROWS_AS(psi_p(-1e-9, p), std::domain_error);
    CHECK_THROWS_AS(psi_M(-1.0, p), std::domain_error);
    EffectParams bad;
    bad.sigma_p = 0.1;
    CHECK_THROWS(bad.validate());
}
