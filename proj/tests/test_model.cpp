#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "fracmp/corpus.hpp"
#include "fracmp/model.hpp"
#include "oracles.hpp"

using namespace fracmp;

TEST_CASE("nonlinearity construction and validation") {
    CHECK_THROWS_AS(Nonlinearity::pure_power(0.5, 1.0, 0.4, 1.0, 1.0), std::invalid_argument);  // q <= 1
    CHECK_THROWS_AS(Nonlinearity::pure_power(4.0, 0.0, 3.5, 1.0, 1.0), std::invalid_argument);  // a = 0
    CHECK_THROWS_AS(Nonlinearity::pure_power(4.0, 1.0, 4.5, 1.0, 1.0), std::invalid_argument);  // mu > q
    CHECK_THROWS_AS(Nonlinearity::pure_power(4.0, 1.0, 3.5, 0.0, 1.0), std::invalid_argument);  // r = 0
    CHECK_THROWS_AS(Nonlinearity::pure_power(4.0, 2.0, 3.5, 1.0, 1.0), std::invalid_argument);  // C < max a

    const Nonlinearity nl = Nonlinearity::pure_power(4.0, 1.0, 3.5, 1.0, 1.0);
    CHECK_THROWS_AS(nl.validate_against_p(4.0), std::invalid_argument);    // q == p
    CHECK_THROWS_AS(nl.validate_against_p(3.9995), std::invalid_argument); // degeneracy guard
    CHECK_NOTHROW(nl.validate_against_p(2.0));
}

TEST_CASE("eval_f pointwise values") {
    const Nonlinearity nl = Nonlinearity::pure_power(4.0, 1.0, 3.5, 1.0, 1.0);
    CHECK(nl.f(0.3, 0.0) == 0.0);
    CHECK(std::abs(nl.f(0.3, 2.0) - 8.0) < 1e-14);

    const Nonlinearity nl3 = Nonlinearity::pure_power(3.0, 1.0, 2.5, 1.0, 1.0);
    CHECK(std::abs(nl3.f(0.1, -2.0) + 4.0) < 1e-14);

    CHECK_THROWS_AS(nl.f(0.0, std::nan("")), std::invalid_argument);
}

TEST_CASE("eval_F closed form against quadrature of f") {
    const Nonlinearity nl = Nonlinearity::pure_power(4.0, 1.0, 3.5, 1.0, 1.0);
    CHECK(nl.F(0.2, 0.0) == 0.0);
    CHECK(std::abs(nl.F(0.2, 2.0) - 4.0) < 1e-14);

    Rng rng(4);
    const Nonlinearity nlw = Nonlinearity::pure_power(3.2, 1.7, 2.9, 0.5, 1.7);
    for (int trial = 0; trial < 50; ++trial) {
        const double t = rng.uniform(0.0, 1.0);
        const double xi = rng.uniform(-3.0, 3.0);
        const double quad = oracles::simpson([&](double s) { return nlw.f(t, s); }, 0.0, xi, 20000);
        CHECK(std::abs(nlw.F(t, xi) - quad) <= 1e-8);
    }
}

TEST_CASE("F is even and f is odd for the pure-power family") {
    Rng rng(8);
    const Nonlinearity nl = Nonlinearity::pure_power(3.7, 2.0, 3.0, 1.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const double t = rng.uniform(0.0, 1.0);
        const double xi = rng.uniform(-5.0, 5.0);
        CHECK(std::abs(nl.f(t, -xi) + nl.f(t, xi)) < 1e-13);
        CHECK(std::abs(nl.F(t, -xi) - nl.F(t, xi)) < 1e-13);
    }
}

TEST_CASE("sharp AR identity xi f = q F") {
    Rng rng(15);
    const Nonlinearity nl = Nonlinearity::pure_power(4.5, 1.3, 3.2, 0.7, 1.3);
    for (int i = 0; i < 200; ++i) {
        const double t = rng.uniform(0.0, 1.0);
        const double xi = rng.uniform(-4.0, 4.0);
        CHECK(std::abs(xi * nl.f(t, xi) - 4.5 * nl.F(t, xi)) < 1e-12 * (1.0 + std::abs(nl.F(t, xi))));
    }
}

TEST_CASE("check_f1: growth envelope") {
    const Nonlinearity nl = Nonlinearity::pure_power(4.0, 1.0, 3.5, 1.0, 1.0);
    std::vector<std::pair<double, double>> samples;
    Rng rng(2);
    for (int i = 0; i < 5000; ++i) samples.push_back({rng.uniform(0.0, 1.0), rng.uniform(-100.0, 100.0)});
    samples.push_back({0.5, 0.0});
    const double worst = check_f1(nl, samples);
    CHECK(worst <= 1.0);
    CHECK(check_f1(nl, {{0.5, 0.0}}) == 0.0);
}

TEST_CASE("check_f2: AR slack") {
    Rng rng(3);
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < 5000; ++i) {
        const double xi = rng.uniform(1.0, 60.0) * (rng.uniform01() < 0.5 ? -1.0 : 1.0);
        samples.push_back({rng.uniform(0.0, 1.0), xi});
    }

    // Boundary case mu = q: slack zero up to rounding of |xi|^q, accepted.
    const Nonlinearity bnd = Nonlinearity::pure_power(4.0, 1.0, 4.0, 1.0, 1.0);
    const F2Report rb = check_f2(bnd, samples);
    CHECK(std::abs(rb.min_relative_slack) < 1e-12);
    CHECK(rb.passed);

    // mu = q - 0.5: slack at xi = 2 equals 0.5 * F = 2 for q = 4, a = 1.
    const Nonlinearity nl = Nonlinearity::pure_power(4.0, 1.0, 3.5, 1.0, 1.0);
    const F2Report r1 = check_f2(nl, {{0.0, 2.0}});
    CHECK(std::abs(r1.min_slack - 2.0) < 1e-13);
    CHECK(r1.passed);

    const F2Report r2 = check_f2(nl, samples);
    CHECK(r2.min_slack > 0.0);
    CHECK(r2.min_potential > 0.0);
    CHECK(r2.passed);
}

TEST_CASE("check_f3: sublinearity at the origin") {
    // q - p large: immediate decay.
    const Nonlinearity nl = Nonlinearity::pure_power(4.0, 1.0, 3.5, 1.0, 1.0);
    const F3Report r = check_f3(nl, 2.0);
    CHECK(r.passed);
    CHECK(r.monotone);
    CHECK(r.limit_estimate <= 1e-6);

    // q = p + 0.1: slow but still convergent to zero.
    const Nonlinearity slow = Nonlinearity::pure_power(2.1, 1.0, 2.05, 1.0, 1.0);
    const F3Report rs = check_f3(slow, 2.0);
    CHECK(rs.passed);

    // Forcing mode fails by design: the ratio diverges.
    const Grid g(1.0, 32);
    const GridFunction gf = GridFunction::sample(g, [](double) { return 1.0; });
    const Nonlinearity forced = Nonlinearity::forcing_only(gf);
    const F3Report rf = check_f3(forced, 2.0);
    CHECK_FALSE(rf.passed);
    CHECK_FALSE(rf.monotone);
}

TEST_CASE("all three checkers pass on the default configuration") {
    const Nonlinearity nl = Nonlinearity::pure_power(4.0, 1.0, 3.5, 1.0, 1.0);
    Rng rng(6);
    std::vector<std::pair<double, double>> samples, big;
    for (int i = 0; i < 2000; ++i) {
        const double t = rng.uniform(0.0, 1.0);
        const double xi = rng.uniform(-40.0, 40.0);
        samples.push_back({t, xi});
        if (std::abs(xi) >= 1.0) big.push_back({t, xi});
    }
    CHECK(check_f1(nl, samples) <= 1.0);
    CHECK(check_f2(nl, big).passed);
    CHECK(check_f3(nl, 2.0).passed);
}

TEST_CASE("weighted a(t) evaluates by interpolation") {
    const Grid g(1.0, 4);
    const GridFunction a = GridFunction::sample(g, [](double t) { return 1.0 + t; });
    const Nonlinearity nl = Nonlinearity::pure_power_weighted(4.0, a, 3.5, 1.0, 2.0);
    CHECK(std::abs(nl.weight_at(0.0) - 1.0) < 1e-14);
    CHECK(std::abs(nl.weight_at(1.0) - 2.0) < 1e-14);
    CHECK(std::abs(nl.weight_at(0.125) - 1.125) < 1e-14);  // between nodes
    CHECK(nl.a_min() == 1.0);
    CHECK(nl.a_max() == 2.0);
    CHECK(std::abs(nl.f(0.5, 2.0) - 1.5 * 8.0) < 1e-13);
}
