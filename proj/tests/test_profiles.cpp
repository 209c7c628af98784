#include <doctest.h>

#include <cmath>
#include <random>

#include "itev/errors.hpp"
#include "itev/profiles.hpp"

using namespace itev;

TEST_SUITE_BEGIN("profiles");

TEST_CASE("zero-amplitude bump is the unit speed") {
    const RadialProfile p = RadialProfile::bump(0.0, 0.5);
    for (double r : {0.0, 0.1, 0.5, 0.9, 1.0}) {
        CHECK(p.c(r) == 1.0);
        CHECK(p.n(r) == 1.0);
    }
}

TEST_CASE("bump hits its nominal values at 0, rho, 1") {
    const RadialProfile p = RadialProfile::bump(0.3, 0.8);
    CHECK(p.c(0.0) == doctest::Approx(1.3).epsilon(1e-15));
    CHECK(p.c(0.8) == 1.0);
    CHECK(p.c(1.0) == 1.0);

    const RadialProfile q = RadialProfile::bump(-0.5, 0.6);
    CHECK(q.c(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q.n(0.0) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("compact support is exact past rho") {
    const RadialProfile p = RadialProfile::bump(0.3, 0.8);
    for (double r = 0.8; r <= 1.0; r += 0.01) {
        CHECK(p.c(r) == 1.0);
        CHECK(p.c_deriv(r, 1) == 0.0);
        CHECK(p.c_deriv(r, 2) == 0.0);
    }
}

TEST_CASE("constant test index") {
    const RadialProfile p = RadialProfile::constant_index(4.0);
    CHECK(p.c(0.3) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.n(0.7) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK_FALSE(p.admissible_family());
    CHECK_THROWS_AS(RadialProfile::constant_index(0.0), InputError);
    CHECK_THROWS_AS(RadialProfile::constant_index(-1.0), InputError);
}

TEST_CASE("constructor preconditions") {
    CHECK_THROWS_AS(RadialProfile::bump(-1.0, 0.5), InputError);
    CHECK_THROWS_AS(RadialProfile::bump(-1.5, 0.5), InputError);
    CHECK_THROWS_AS(RadialProfile::bump(0.3, 0.0), InputError);
    CHECK_THROWS_AS(RadialProfile::bump(0.3, 1.0), InputError);
    CHECK_THROWS_AS(RadialProfile::polynomial_window(0.2, 0.7, 3), InputError);
    CHECK_THROWS_AS(RadialProfile::annular_test(-0.5, 0.2, 0.3), InputError);
}

TEST_CASE("index consistency n c^2 = 1 at random points") {
    const RadialProfile profiles[] = {
        RadialProfile::bump(0.3, 0.8),
        RadialProfile::bump(-0.4, 0.6),
        RadialProfile::polynomial_window(0.25, 0.7),
        RadialProfile::constant_index(2.25),
    };
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (const auto& p : profiles) {
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double r = uni(rng);
            const double c = p.c(r);
            worst = std::max(worst, std::fabs(p.n(r) * c * c - 1.0));
        }
        CHECK(worst < 5e-15);
    }
}

TEST_CASE("closed-form derivatives match finite differences") {
    const RadialProfile p = RadialProfile::bump(0.3, 0.8);
    const double h = 1e-5;
    for (double r : {0.1, 0.3, 0.55, 0.7}) {
        const double fd1 = (p.c(r + h) - p.c(r - h)) / (2 * h);
        const double fd2 = (p.c(r + h) - 2 * p.c(r) + p.c(r - h)) / (h * h);
        CHECK(p.c_deriv(r, 1) == doctest::Approx(fd1).epsilon(1e-7));
        CHECK(p.c_deriv(r, 2) == doctest::Approx(fd2).epsilon(1e-4));
    }
    // same for n through the jet route
    for (double r : {0.2, 0.5}) {
        const double fd1 = (p.n(r + h) - p.n(r - h)) / (2 * h);
        CHECK(p.n_deriv(r, 1) == doctest::Approx(fd1).epsilon(1e-7));
    }
}

TEST_CASE("odd derivatives vanish at the origin") {
    for (const auto& p : {RadialProfile::bump(0.3, 0.8),
                          RadialProfile::bump(-0.4, 0.6),
                          RadialProfile::polynomial_window(0.25, 0.7)}) {
        const Jet cj = p.c_jet(0.0, 7);
        CHECK(cj.a[1] == 0.0);
        CHECK(cj.a[3] == 0.0);
        CHECK(cj.a[5] == 0.0);
        CHECK(cj.a[7] == 0.0);
    }
}

TEST_CASE("validate: admissible bump passes every check") {
    const ValidationReport rep = validate(RadialProfile::bump(0.3, 0.8), 256);
    for (const auto& check : rep.checks) {
        INFO(check.name, " margin ", check.margin);
        CHECK(check.pass);
    }
    CHECK(rep.admissible);
}

TEST_CASE("validate: constant test index fails the support checks") {
    const ValidationReport rep = validate(RadialProfile::constant_index(4.0), 64);
    bool flatness_failed = false;
    for (const auto& check : rep.checks)
        if (check.name == "boundary_flatness") flatness_failed = !check.pass;
    CHECK(flatness_failed);
    CHECK_FALSE(rep.admissible);
}

TEST_CASE("validate: near-vanishing speed reports its positivity margin") {
    const ValidationReport rep = validate(RadialProfile::bump(-0.99, 0.5), 128);
    bool found = false;
    for (const auto& check : rep.checks)
        if (check.name == "positivity") {
            found = true;
            CHECK(check.pass); // still positive
            CHECK(check.margin == doctest::Approx(0.01).epsilon(1e-10));
        }
    CHECK(found);
}

TEST_CASE("validate rejects tiny grids") {
    CHECK_THROWS_AS(validate(RadialProfile::bump(0.1, 0.5), 4), InputError);
}

TEST_CASE("json round trip preserves parameters and kind") {
    const RadialProfile profiles[] = {
        RadialProfile::bump(0.3, 0.8),
        RadialProfile::polynomial_window(-0.2, 0.6, 7),
        RadialProfile::constant_index(2.25),
        RadialProfile::annular_test(-0.55, 0.6, 0.2),
    };
    for (const auto& p : profiles) {
        const RadialProfile q = RadialProfile::from_json(p.to_json());
        CHECK(q.kind() == p.kind());
        CHECK(q.id() == p.id());
        for (double r : {0.0, 0.33, 0.61, 0.92})
            CHECK(q.c(r) == p.c(r));
    }
}

TEST_CASE("malformed profile documents are rejected") {
    CHECK_THROWS_AS(RadialProfile::from_json({{"kind", "no-such-kind"},
                                              {"params", nlohmann::json::object()}}),
                    InputError);
    CHECK_THROWS_AS(RadialProfile::from_json({{"params", nlohmann::json::object()}}),
                    InputError);
    CHECK_THROWS_AS(RadialProfile::load("/nonexistent/profile.json"), InputError);
}

TEST_CASE("sigma is the exact infimum for the window families") {
    CHECK(RadialProfile::bump(0.3, 0.8).sigma() == 1.0);
    CHECK(RadialProfile::bump(-0.25, 0.8).sigma() == doctest::Approx(0.75));
    CHECK(RadialProfile::constant_index(4.0).sigma() == doctest::Approx(0.5));
}

TEST_SUITE_END();
