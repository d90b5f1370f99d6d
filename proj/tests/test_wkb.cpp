#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "abtunnel/wkb.hpp"

using namespace abtunnel;

namespace {
const RadialPotential bump = make_bump_well(-1.0, 1.0);
}

TEST_CASE("Fuchs solutions satisfy the transport equation")
{
    const WKBData w(bump, 0.3);
    const auto g = [](double r) { return r * r; };
    const FuchsSolution reg = fuchs_solve(w, g, 0.7, FuchsCase::regular, 0.0, 1.5);
    CHECK(reg.regular_at_zero);
    CHECK(reg.a_hat(0.0) == doctest::Approx(0.7).epsilon(1e-8));
    for (double r : {0.1, 0.4, 0.8}) CHECK(fuchs_residual(w, reg, g, r) < 1e-6);
    const FuchsSolution tail = fuchs_solve(w, [](double) { return 0.0; }, 1.2, FuchsCase::tail, 1.0);
    CHECK(tail.a_hat(1.0) == doctest::Approx(1.2));
    for (double r : {1.2, 2.0}) CHECK(fuchs_residual(w, tail, [](double) { return 0.0; }, r) < 1e-6);
}

TEST_CASE("first correction vanishes at the origin and fixes mu2")
{
    for (double e0 : {0.0, 0.3, 0.5}) {
        const WKBData w(bump, e0);
        const A1Correction c = a1_correction(w, 1.5);
        CHECK(c.a1.a_hat(0.0) == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(std::abs(c.mu2_hat - c.mu2) <= 1e-4 * std::abs(c.mu2));
    }
}

TEST_CASE("quasimode residual order")
{
    // sup e^{d/h} |(T - E_N) psi_N| ~ h^{N + 2 - (1 + e0)/2}.
    const double e0 = 0.3;
    const WkbExpansion x(WKBData(bump, e0), 1.5);
    for (int N : {0, 1}) {
        const double a = wkb_residual(x, N, 0.05, 0.2, 0.8), b = wkb_residual(x, N, 0.025, 0.2, 0.8);
        CHECK(std::log2(a / b) == doctest::Approx(N + 2.0 - (1.0 + e0) / 2.0).epsilon(0.05));
    }
}

TEST_CASE("quasimode scaling")
{
    const WkbExpansion x(WKBData(bump, 0.5), 1.5);
    const double h = 0.08, r = 0.6;
    CHECK(x.quasimode(0, h, r) ==
          doctest::Approx(x.scaled_quasimode(0, h, r) * std::exp(-x.data().d(r) / h)).epsilon(1e-12));
    CHECK(wkb_quasimode(x, 1, h, r) == doctest::Approx(x.quasimode(1, h, r)));
    CHECK(x.norm(0, h) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("numerical ground state tracks the WKB profile")
{
    const double e0 = 0.3;
    const WKBData w(bump, e0);
    double prev = 1e300;
    for (double h : {0.1, 0.05}) {
        const EigenSolution s = solve_lowest(assemble_fiber(bump, h, e0, make_radial_grid(0.001, 3.0)), 1);
        const GroundStateDiscrepancy g = compare_gs_wkb(s, w, h, 0.2, 0.9);
        const double scale = std::pow(h, -(1.0 + e0) / 2.0);
        CHECK(g.value / scale < prev);
        prev = g.value / scale;
    }
    CHECK(prev < 0.2);
}
