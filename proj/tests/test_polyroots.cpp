#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "subcell/polyroots.hpp"

using namespace subcell;

TEST_CASE("roots of low-degree polynomials in an interval") {
    // (x-0.3)(x-0.7) = x^2 - x + 0.21
    const Polynomial q{{0.21, -1.0, 1.0}};
    const auto r = real_roots_in(q, 0.0, 1.0);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == Catch::Approx(0.3).margin(1e-12));
    CHECK(r[1] == Catch::Approx(0.7).margin(1e-12));

    // no roots inside
    CHECK(real_roots_in(q, 0.35, 0.65).empty());

    // cubic with three roots
    const Polynomial c{{0.0, -0.25, 0.0, 1.0}};  // x^3 - x/4 = x(x-0.5)(x+0.5)
    const auto rc = real_roots_in(c, -1.0, 1.0);
    REQUIRE(rc.size() == 3);
    CHECK(rc[0] == Catch::Approx(-0.5).margin(1e-12));
    CHECK(rc[1] == Catch::Approx(0.0).margin(1e-12));
    CHECK(rc[2] == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("degenerate leading coefficients reduce degree") {
    const Polynomial p{{-0.5, 1.0, 0.0, 0.0, 0.0}};  // effectively x - 0.5
    const auto r = real_roots_in(p, 0.0, 1.0);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == Catch::Approx(0.5).margin(1e-14));
}

TEST_CASE("random quartics: all bracketed roots recovered") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        // build quartic from known roots, count those in [-1, 1]
        double roots[4];
        for (double& x : roots) x = 2.5 * u(rng);
        Polynomial p{{1.0}};
        for (double x : roots) {
            // multiply by (t - x)
            std::vector<double> c(p.c.size() + 1, 0.0);
            for (std::size_t i = 0; i < p.c.size(); ++i) {
                c[i + 1] += p.c[i];
                c[i] -= x * p.c[i];
            }
            p = Polynomial(c);
        }
        int expected = 0;
        for (double x : roots)
            if (x >= -1.0 && x <= 1.0) ++expected;
        // skip near-multiple-root configurations (tangencies are a measure-zero
        // hazard the clamp integral never depends on)
        bool close = false;
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                if (std::abs(roots[a] - roots[b]) < 1e-3) close = true;
        if (close) continue;
        const auto got = real_roots_in(p, -1.0, 1.0);
        CHECK(static_cast<int>(got.size()) == expected);
        for (double g : got) CHECK(std::abs(p.eval(g)) < 1e-9);
    }
}

TEST_CASE("clamped integral: exact on hand cases") {
    // integral over [0,1] of clamp(x, 0, 1) = 1/2
    CHECK(integrate_clamped(Polynomial{{0.0, 1.0}}, 0.0, 1.0, 0.0, 1.0) == Catch::Approx(0.5).margin(1e-14));
    // clamp(2x - 0.5, 0, 1): zero until x=0.25, one after x=0.75, ramp between
    const double v = integrate_clamped(Polynomial{{-0.5, 2.0}}, 0.0, 1.0, 0.0, 1.0);
    CHECK(v == Catch::Approx(0.25 + 0.5 * 0.5).margin(1e-14));
    // parabola fully below the lower level
    CHECK(integrate_clamped(Polynomial{{-2.0, 0.0, 1.0}}, -1.0, 1.0, 0.0, 1.0) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("clamped integral matches Simpson on random quartics") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        Polynomial p{{u(rng), u(rng), u(rng), u(rng), u(rng)}};
        const double lo = -0.4, hi = 0.6;
        const double got = integrate_clamped(p, -1.0, 1.0, lo, hi);
        // simple Riemann reference with many panels
        const int n = 200000;
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            const double x = -1.0 + 2.0 * (k + 0.5) / n;
            acc += std::clamp(p.eval(x), lo, hi) * (2.0 / n);
        }
        CHECK(got == Catch::Approx(acc).margin(2e-7));
    }
}
