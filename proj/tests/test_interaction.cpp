#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "abtunnel/interaction.hpp"

using namespace abtunnel;

namespace {

const RadialPotential bump = make_bump_well(-1.0, 1.0);

WellPairConfig pair_at(double h, double e0) { return make_well_pair(bump, 2.5, flux_params(h * (2.0 + e0), h)); }

EigenSolution ground(const WellPairConfig& cfg, double e0)
{
    const double h = cfg.flux.h;
    return solve_lowest(assemble_fiber(bump, h, e0, make_radial_grid(std::min(0.002, h / 50.0), default_r_max(bump, 2.5))),
                        1);
}

}  // namespace

TEST_CASE("splitting prediction approaches the closed form")
{
    double prev = 0.0;
    for (double h : {0.2, 0.1}) {
        const SplittingPrediction s = predict_splitting(pair_at(h, 0.3));
        CHECK(s.S == doctest::Approx(1.58240975).epsilon(1e-8));
        CHECK(s.numeric_2J1 > 0.0);
        CHECK(s.ratio > 0.5);
        CHECK(s.ratio < 2.0);
        if (prev > 0.0) CHECK(std::abs(std::log(s.ratio)) < std::abs(std::log(prev)));
        prev = s.ratio;
    }
}

TEST_CASE("hatted coefficient mirrors J1 at half-integer flux")
{
    const double e0 = 0.5;
    double prev_gap = 1.0, prev_g = 1.0;
    for (double h : {0.2, 0.1}) {
        const WellPairConfig cfg = pair_at(h, e0);
        const EigenSolution sol = ground(cfg, e0);
        const cplx j1 = j1_numeric(sol, cfg);
        const JHat1 jh = jhat1_numeric(sol.state(), cfg);
        const double gap = std::abs(jh.value / j1 + 1.0);
        CHECK(gap < 0.25);
        CHECK(gap < prev_gap);
        CHECK(jh.f_term.imag() == 0.0);
        const double g_rel = std::abs(jh.g_term) / std::abs(jh.f_term);
        CHECK(g_rel <= 0.3);
        CHECK(g_rel < prev_g);
        prev_gap = gap;
        prev_g = g_rel;
        CHECK(std::abs(j1_numeric(sol.state(), cfg) - j1) <= 1e-10 * std::abs(j1));
        CHECK(std::abs(j0_numeric(sol.state(), cfg)) <= 1e-12 * std::abs(j1));
    }
}

TEST_CASE("two by two splitting")
{
    InteractionCoeffs c;
    c.J1 = cplx(0.3, -0.4);
    const Splitting2 s = splitting_2x2(c);
    CHECK(s.gap == doctest::Approx(1.0));
    CHECK(s.eigenvalues[0] == doctest::Approx(-0.5));
    CHECK((s.U - s.U.adjoint()).norm() < 1e-14);
}

TEST_CASE("four by four matrix is Hermitian")
{
    InteractionCoeffs c;
    c.J0 = cplx(0.0, 0.0);
    c.J1 = cplx(0.2, 0.1);
    c.Jhat0 = cplx(0.05, -0.02);
    c.Jhat1 = cplx(-0.2, -0.1);
    const Splitting4 s = matrix_4x4(c);
    CHECK(s.hermiticity_defect < 1e-14);
    for (int i = 1; i < 4; ++i) CHECK(s.eigenvalues[static_cast<std::size_t>(i)] >= s.eigenvalues[static_cast<std::size_t>(i - 1)]);
    for (int i = 0; i < 4; ++i) {
        const Eigen::Vector4cd v = s.eigenvectors.col(i);
        CHECK((s.U * v - s.eigenvalues[static_cast<std::size_t>(i)] * v).norm() < 1e-12);
    }
}

TEST_CASE("idealized matrix eigenpairs")
{
    const IdealU ideal = idealized_U();
    CHECK((ideal.U - ideal.U.adjoint()).norm() < 1e-14);
    for (std::size_t i = 0; i < 4; ++i) {
        const Eigen::Vector4cd& v = ideal.eigenvectors[i];
        CHECK(v.norm() == doctest::Approx(1.0));
        CHECK((ideal.U * v - ideal.eigenvalues[i] * v).norm() < 1e-12);
    }
}

TEST_CASE("lambda4 - lambda3 needs positive e0")
{
    CHECK_THROWS(lambda43_asymptotic(pair_at(0.2, 0.0), 0.2));
    CHECK(lambda43_asymptotic(pair_at(0.2, 0.3), 0.2) > 0.0);
}

TEST_CASE("quasimode overlap")
{
    const double h = 0.15, e0 = 0.3;
    const WellPairConfig cfg = pair_at(h, e0);
    const EigenSolution sol = ground(cfg, e0);
    const QuasimodeOverlap q = quasimode_overlap(sol.state(), cfg);
    CHECK(q.eps > 0.0);
    CHECK(q.norm_sq == doctest::Approx(1.0 - q.norm_deficit));
    CHECK(std::abs(q.norm_deficit) < 1e-3);
    CHECK(std::isfinite(q.bound_ratio));
    const QuasimodeOverlap s = quasimode_overlap(sol.state(), cfg, q.eps, true);
    CHECK(std::abs(s.overlap - std::conj(q.overlap)) <= 1e-8 * std::abs(q.overlap));
}
