#include <doctest.h>

#include <cmath>
#include <fstream>

#include "itev/errors.hpp"
#include "itev/fixtures.hpp"
#include "itev/liouville.hpp"

using namespace itev;

TEST_SUITE_BEGIN("liouville");

TEST_CASE("constant index n = 4: eta = 2r, C = 2") {
    const LiouvilleFrame f = build_frame(RadialProfile::constant_index(4.0));
    CHECK(f.endpoint() == doctest::Approx(2.0).epsilon(1e-14));
    for (double r : {0.1, 0.25, 0.5, 0.9})
        CHECK(f.eta_of_r(r) == doctest::Approx(2.0 * r).epsilon(1e-14));
    for (double eta : {0.2, 1.0, 1.7})
        CHECK(f.r_of_eta(eta) == doctest::Approx(eta / 2.0).epsilon(1e-13));
}

TEST_CASE("constant index n = 1: eta is the identity") {
    const LiouvilleFrame f = build_frame(RadialProfile::constant_index(1.0));
    CHECK(f.endpoint() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.eta_of_r(0.37) == doctest::Approx(0.37).epsilon(1e-14));
}

TEST_CASE("endpoint agrees across two quadrature resolutions") {
    const LiouvilleFrame f = build_frame(RadialProfile::bump(0.3, 0.8));
    CHECK(std::fabs(f.endpoint() - f.endpoint_coarse()) <
          1e-12 * std::max(1.0, f.endpoint()));
}

TEST_CASE("round trip r -> eta -> r") {
    const LiouvilleFrame frames[] = {
        build_frame(RadialProfile::bump(0.3, 0.8)),
        build_frame(RadialProfile::bump(-0.4, 0.6)),
        build_frame(RadialProfile::constant_index(2.25)),
    };
    for (const auto& f : frames) {
        for (int i = 0; i <= 500; ++i) {
            const double r = static_cast<double>(i) / 500;
            CHECK(std::fabs(f.r_of_eta(f.eta_of_r(r)) - r) < 1e-12);
        }
    }
}

TEST_CASE("eta is strictly increasing on sampled pairs") {
    const LiouvilleFrame f = build_frame(RadialProfile::bump(-0.4, 0.6));
    double prev = -1.0;
    for (int i = 0; i <= 2000; ++i) {
        const double eta = f.eta_of_r(static_cast<double>(i) / 2000);
        CHECK(eta > prev);
        prev = eta;
    }
}

TEST_CASE("constant index: p_m vanishes to 1e-10 on a fine grid") {
    for (double n0 : {1.0, 4.0, 2.25}) {
        const LiouvilleFrame f = build_frame(RadialProfile::constant_index(n0));
        double worst = 0.0;
        for (int m : {0, 1, 2, 5, 10}) {
            for (int i = 0; i <= 2000; ++i) {
                const double eta = f.endpoint() * static_cast<double>(i) / 2000;
                worst = std::max(worst, std::fabs(f.potential(m, eta)));
            }
        }
        INFO("n0 = ", n0, " worst |p_m| = ", worst);
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("m = 0 has no centrifugal correction") {
    const LiouvilleFrame f = build_frame(RadialProfile::bump(0.3, 0.8));
    for (double frac : {0.1, 0.4, 0.8}) {
        const double eta = frac * f.endpoint();
        const double r = f.r_of_eta(eta);
        CHECK(f.potential(0, eta) == doctest::Approx(f.curvature_terms(r)).epsilon(1e-13));
    }
}

TEST_CASE("origin limit matches the closed form for the bump family") {
    // lim (1/(r^2 n) - 1/eta^2) = -(4a/(3 rho^2))(1 + a) for c = 1 + a w(r/rho)
    const double a = 0.3, rho = 0.8;
    const LiouvilleFrame f = build_frame(RadialProfile::bump(a, rho));
    const double closed = -(4.0 * a / (3.0 * rho * rho)) * (1.0 + a);
    CHECK(f.origin_limit_pm_core() == doctest::Approx(closed).epsilon(1e-12));
    CHECK(f.origin_limit_pm_core() == doctest::Approx(-0.8125).epsilon(1e-12));
}

TEST_CASE("series and direct evaluation agree across the crossover") {
    const LiouvilleFrame f = build_frame(RadialProfile::bump(0.3, 0.8));
    const double eta_c = f.crossover_eta();
    double worst = 0.0;
    for (int i = -20; i <= 20; ++i) {
        const double eta = eta_c * (1.0 + 0.02 * i);
        worst = std::max(worst,
                         std::fabs(f.singular_core_series(eta) - f.singular_core_direct(eta)));
    }
    INFO("core disagreement around crossover: ", worst);
    CHECK(worst < 1e-9);
    // p_m continuity for a few m
    for (int m : {1, 2, 5}) {
        const double lo = f.potential(m, eta_c * (1.0 - 1e-9));
        const double hi = f.potential(m, eta_c * (1.0 + 1e-9));
        CHECK(std::fabs(lo - hi) < 1e-9 * std::max(1.0, std::fabs(lo)));
    }
}

TEST_CASE("potential is bounded and grid-stable") {
    const LiouvilleFrame f = build_frame(RadialProfile::bump(0.3, 0.8));
    for (int m : {0, 1, 3, 8}) {
        double sup_coarse = 0.0, sup_fine = 0.0;
        for (int i = 0; i <= 800; ++i)
            sup_coarse = std::max(sup_coarse,
                                  std::fabs(f.potential(m, f.endpoint() * i / 800.0)));
        for (int i = 0; i <= 1600; ++i)
            sup_fine = std::max(sup_fine,
                                std::fabs(f.potential(m, f.endpoint() * i / 1600.0)));
        CHECK(std::isfinite(sup_fine));
        CHECK(std::fabs(sup_fine - sup_coarse) < 1e-6 * std::max(1.0, sup_fine));
    }
}

TEST_CASE("fixtures: extended-precision reference values") {
    const FixtureReport rep =
        verify_fixture_file(std::string(ITEV_FIXTURE_DIR) + "/oracle_fixtures.json");
    for (const auto& r : rep.results) {
        if (r.op != "liouville_endpoint" && r.op != "pm_origin_limit" &&
            r.op != "pm_value" && r.op != "r_of_eta")
            continue;
        INFO(r.op, " ", r.inputs.dump(), " rel error ", r.rel_error);
        CHECK(r.pass);
    }
}

TEST_CASE("build rejects bad inputs") {
    CHECK_THROWS_AS(build_frame(RadialProfile::bump(0.3, 0.8), 2), InputError);
    const LiouvilleFrame f = build_frame(RadialProfile::constant_index(1.0));
    CHECK_THROWS_AS(f.potential(1, -0.5), InputError);
    CHECK_THROWS_AS(f.potential(1, f.endpoint() * 1.5), InputError);
    CHECK_THROWS_AS(f.r_of_eta(-1.0), InputError);
}

TEST_SUITE_END();
