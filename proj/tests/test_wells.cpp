#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <limits>

#include "abtunnel/wells.hpp"

using namespace abtunnel;

TEST_CASE("bump well values and derivatives")
{
    const RadialPotential p = make_bump_well(-1.0, 1.0);
    CHECK(p.v(0.0) == doctest::Approx(-1.0));
    CHECK(p.v(1.2) == 0.0);
    CHECK(p.v(1.0) == 0.0);
    CHECK(p.d2v0() == doctest::Approx(2.0));
    CHECK(estimate_v2_at_zero(p.v) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(estimate_v4_at_zero(p.v) == doctest::Approx(p.v4_0).epsilon(1e-4));
    CHECK(p.v4_0 == doctest::Approx(12.0));
    for (double r : {0.1, 0.4, 0.7, 0.95}) {
        const double s = 1e-5;
        CHECK(p.dv(r) == doctest::Approx((p.v(r + s) - p.v(r - s)) / (2 * s)).epsilon(1e-6));
        CHECK(p.d2v(r) == doctest::Approx((p.dv(r + s) - p.dv(r - s)) / (2 * s)).epsilon(1e-6));
    }
}

TEST_CASE("bump well rejects bad parameters")
{
    CHECK_THROWS_AS(make_bump_well(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_bump_well(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_bump_well(-1.0, 0.0), std::invalid_argument);
}

TEST_CASE("flux parameters")
{
    SUBCASE("generic below")
    {
        const FluxParams f = flux_params(2.3, 1.0);
        CHECK(f.e0 == doctest::Approx(0.3));
        CHECK(f.m_star == 2);
        CHECK(f.gamma0 == doctest::Approx(-0.3));
        CHECK_FALSE(f.half_integer);
    }
    SUBCASE("generic above")
    {
        const FluxParams f = flux_params(2.7, 1.0);
        CHECK(f.e0 == doctest::Approx(0.3));
        CHECK(f.m_star == 3);
        CHECK(f.gamma0 == doctest::Approx(0.3));
    }
    SUBCASE("half integer ties go down")
    {
        const FluxParams f = flux_params(2.5, 1.0);
        CHECK(f.e0 == doctest::Approx(0.5));
        CHECK(f.m_star == 2);
        CHECK(f.gamma0 == doctest::Approx(-0.5));
        CHECK(f.half_integer);
    }
    SUBCASE("gamma0 is +-e0 and the Hardy bound holds")
    {
        for (double a : {0.13, 0.77, 1.5, 3.01, 4.49}) {
            const FluxParams f = flux_params(a, 0.1);
            CHECK(std::abs(std::abs(f.gamma0) - f.e0) < 1e-12);
            for (long m = -50; m <= 80; ++m) CHECK((m - f.t) * (m - f.t) >= f.e0 * f.e0 - 1e-12);
        }
    }
}

TEST_CASE("flux residue is even and 1-periodic")
{
    for (double t : {0.0, 0.2, 0.5, 1.37, 7.81, -2.4}) {
        CHECK(flux_residue(t + 1.0) == doctest::Approx(flux_residue(t)));
        CHECK(flux_residue(-t) == doctest::Approx(flux_residue(t)));
        CHECK(flux_residue(t) >= 0.0);
        CHECK(flux_residue(t) <= 0.5);
    }
    // alpha -> alpha + h leaves e0 unchanged.
    CHECK(flux_params(0.33 + 0.1, 0.1).e0 == doctest::Approx(flux_params(0.33, 0.1).e0));
}

TEST_CASE("well validation")
{
    CHECK(validate_well(make_bump_well(-1.0, 1.0)).ok());
    CHECK(validate_well(make_bump_well(-0.7, 1.3)).ok());

    RadialPotential zero = make_bump_well(-1.0, 1.0);
    zero.v = [](double) { return 0.0; };
    zero.dv = [](double) { return 0.0; };
    zero.d2v = [](double) { return 0.0; };
    CHECK_FALSE(validate_well(zero).ok());

    RadialPotential narrow = make_bump_well(-1.0, 1.0);
    narrow.sigma = 0.5;
    const WellReport rep = validate_well(narrow);
    CHECK_FALSE(rep.ok());
    CHECK(rep.measured_d2v0 == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("well pair separation")
{
    const RadialPotential p = make_bump_well(-1.0, 1.0);
    CHECK_NOTHROW(make_well_pair(p, 2.5, flux_params(0.5, 0.1)));
    CHECK_THROWS(make_well_pair(p, 2.0, flux_params(0.5, 0.1)));
}
