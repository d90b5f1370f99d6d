#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <numeric>

#include "abtunnel/fiber1d.hpp"

using namespace abtunnel;

TEST_CASE("radial grid layout")
{
    const RadialGrid g = make_radial_grid(0.01, 3.0);
    REQUIRE(g.size() > 0);
    CHECK(g.r.front() == doctest::Approx(0.005));
    CHECK(g.r[1] - g.r[0] == doctest::Approx(0.01));
    CHECK(g.r_max == doctest::Approx(g.r.back() + 0.01));
    CHECK(std::abs(g.r_max - 3.0) <= 0.005 + 1e-12);
}

TEST_CASE("default radial extent")
{
    const RadialPotential p = make_bump_well(-1.0, 1.0);
    CHECK(default_r_max(p) == doctest::Approx(3.0));
    CHECK(default_r_max(p, 2.5) == doctest::Approx(4.5));
}

TEST_CASE("harmonic fiber eigenvalues")
{
    for (double e0 : {0.0, 0.25, 0.5}) {
        const RadialPotential p = make_quadratic_well(0.0, 1.0);
        const std::vector<double> ev = richardson_eigenvalues(p, 1.0, e0, 0.002, 12.0, 4);
        for (int n = 0; n < 4; ++n) {
            const double ex = harmonic_exact(1.0, e0, n);
            CHECK(std::abs(ev[static_cast<std::size_t>(n)] - ex) / ex < 1e-6);
        }
    }
}

TEST_CASE("second order convergence without extrapolation")
{
    const RadialPotential p = make_quadratic_well(0.0, 1.0);
    for (double e0 : {0.0, 0.3}) {
        const double ex = harmonic_exact(1.0, e0, 0);
        double err[2];
        int i = 0;
        for (double dr : {0.02, 0.01}) {
            const EigenSolution s = solve_lowest(assemble_fiber(p, 1.0, e0, make_radial_grid(dr, 10.0)), 1);
            err[i++] = std::abs(s.eigenvalues[0] - ex);
        }
        CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.1));
    }
}

TEST_CASE("ground state is positive, normalized and matches the closed form")
{
    const RadialPotential p = make_quadratic_well(0.0, 1.0);
    const double e0 = 0.4;
    const FiberOperator op = assemble_fiber(p, 1.0, e0, make_radial_grid(0.002, 10.0));
    const EigenSolution s = solve_lowest(op, 2);
    CHECK(op.inner(s.vectors[0], s.vectors[0]) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(op.inner(s.vectors[0], s.vectors[1])) < 1e-10);
    for (double res : s.residuals) CHECK(res < 1e-9);
    const RadialState st = s.state();
    for (double r : {0.3, 1.0, 2.0}) {
        CHECK(st.psi(r) > 0.0);
        CHECK(st.psi(r) == doctest::Approx(harmonic_ground_state(1.0, e0, r)).epsilon(1e-4));
    }
    CHECK(st.psi(20.0) == 0.0);
}

TEST_CASE("weights reduce to r dr for e = 0")
{
    const RadialPotential p = make_bump_well(-1.0, 1.0);
    const FiberOperator op = assemble_fiber(p, 0.1, 0.0, make_radial_grid(0.01, 3.0));
    for (std::size_t i = 0; i < op.grid().size(); i += 37)
        CHECK(op.weights()[i] == doctest::Approx(op.grid().r[i] * 0.01).epsilon(1e-12));
}

TEST_CASE("apply agrees with the symmetric form")
{
    const RadialPotential p = make_bump_well(-1.0, 1.0);
    const FiberOperator op = assemble_fiber(p, 0.2, 0.35, make_radial_grid(0.01, 3.0));
    const EigenSolution s = solve_lowest(op, 1);
    const std::vector<double> tu = op.apply(s.vectors[0]);
    double err = 0.0;
    for (std::size_t i = 0; i < tu.size(); ++i)
        err = std::max(err, std::abs(tu[i] - s.eigenvalues[0] * s.vectors[0][i]));
    CHECK(err < 1e-8);
}

TEST_CASE("harmonic series coefficients")
{
    const RadialPotential q = make_quadratic_well(-1.0, 2.0);
    const HarmonicSeries mu = harmonic_series_mu(q, 0.5);
    CHECK(mu.mu0 == doctest::Approx(-1.0));
    CHECK(mu.mu1 == doctest::Approx(2.0 * std::sqrt(2.0) * 1.5));
    CHECK(mu.mu2 == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("single well degeneracy follows the half-integer flux")
{
    const RadialPotential p = make_bump_well(-1.0, 1.0);
    const RadialGrid g = make_radial_grid(0.002, 3.0);
    const double h = 0.1;
    const SingleWellSpectrum a = single_well_spectrum(p, flux_params(h * 2.3, h), g, 3);
    CHECK(a.degeneracy == 1);
    CHECK(a.gap > 0.0);
    CHECK_FALSE(a.edge_warning);
    const SingleWellSpectrum b = single_well_spectrum(p, flux_params(h * 2.5, h), g, 3);
    CHECK(b.degeneracy == 2);
    CHECK_FALSE(b.edge_warning);
}

TEST_CASE("ground state decays at the Agmon rate")
{
    const RadialPotential p = make_bump_well(-1.0, 1.0);
    const WKBData w(p, 0.3);
    const EigenSolution s = solve_lowest(assemble_fiber(p, 0.1, 0.3, make_radial_grid(0.002, 3.0)), 1);
    CHECK(std::isfinite(decay_check(s, w, 0.1)));
    CHECK(decay_check(s, w, 0.1) < 100.0);
}
