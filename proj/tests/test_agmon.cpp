#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "abtunnel/agmon.hpp"

using namespace abtunnel;

namespace {
const RadialPotential bump = make_bump_well(-1.0, 1.0);
}

TEST_CASE("tabulated Agmon distance matches adaptive quadrature")
{
    const WKBData w(bump, 0.3);
    for (double r : {0.0, 1e-4, 0.05, 0.3, 0.77, 1.0, 1.25, 2.9})
        CHECK(w.d(r) == doctest::Approx(agmon_distance(bump, r)).epsilon(1e-11));
    CHECK(w.d(1.0) == doctest::Approx(0.54120487).epsilon(1e-7));
    // Linear beyond the support with slope sqrt(|v(0)|).
    CHECK(w.d(2.0) - w.d(1.5) == doctest::Approx(0.5).epsilon(1e-12));
    for (double r : {0.2, 0.6, 0.9}) CHECK(w.dprime(r) == doctest::Approx(std::sqrt(bump.v(r) + 1.0)));
}

TEST_CASE("action S")
{
    const WellPairConfig cfg = make_well_pair(bump, 2.5, flux_params(0.5, 0.1));
    CHECK(action_S(cfg) == doctest::Approx(1.58240975).epsilon(1e-8));
}

TEST_CASE("Agmon distance rejects a well dipping below v(0)")
{
    RadialPotential p = bump;
    p.v = [](double r) { return r < 0.3 ? -1.0 + r * r : (r < 0.6 ? -1.5 : 0.0); };
    CHECK_THROWS_AS(agmon_distance(p, 0.9), std::domain_error);
}

TEST_CASE("leading amplitude")
{
    CHECK(amplitude_constant(bump, 0.0) == doctest::Approx(std::sqrt(2.0)));
    const WKBData w(bump, 0.3);
    CHECK(w.a0(0.0) == doctest::Approx(w.A0()));
    for (double r : {0.1, 0.5, 0.9, 1.4}) {
        const double s = 1e-5;
        const double fd = (w.a0(r + s) - w.a0(r - s)) / (2 * s);
        CHECK(w.a0_prime(r) == doctest::Approx(fd).epsilon(1e-6));
    }
    // p ~ p'(0) r near the origin.
    CHECK(w.p(1e-4) / 1e-4 == doctest::Approx(w.p_slope_at_zero()).epsilon(1e-6));
}

TEST_CASE("tunneling prefactor closed forms agree")
{
    const double expect[] = {5.5207, 6.7570, 7.2848};
    const double e0s[] = {0.0, 0.3, 0.5};
    for (int i = 0; i < 3; ++i) {
        const Prefactor pf = prefactor_C(bump, 2.5, e0s[i]);
        CHECK(pf.relative_gap <= 1e-10);
        CHECK(pf.value == doctest::Approx(expect[i]).epsilon(1e-4));
    }
    // Formal use with 1 - e0 > 1/2.
    CHECK(prefactor_C(bump, 2.5, 0.7).relative_gap <= 1e-10);
}
