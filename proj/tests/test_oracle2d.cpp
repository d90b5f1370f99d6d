#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "abtunnel/oracle2d.hpp"

using namespace abtunnel;
using cplx = std::complex<double>;

namespace {

const RadialPotential bump = make_bump_well(-1.0, 1.0);

WellPairConfig pair_at(double h, double e0) { return make_well_pair(bump, 2.5, flux_params(h * (2.0 + e0), h)); }

}  // namespace

TEST_CASE("plaquettes enclose the flux of each pole")
{
    const WellPairConfig cfg = pair_at(0.25, 0.3);
    const Lattice2D lat = make_double_well_lattice(cfg, 10);
    const LinkField f = make_link_field(lat, cfg.flux.alpha, 0.25);
    const PlaquetteReport rep = check_plaquettes(lat, f, cfg.flux.alpha, 0.25);
    CHECK(rep.pole_plaquettes == 2);
    CHECK(rep.ok(1e-12));
}

TEST_CASE("grid sides are padded to a 7-smooth transform length")
{
    const Lattice2D lat = make_double_well_lattice(pair_at(0.25, 0.0), 57);
    CHECK(lat.nx == 524);
    CHECK(lat.spacing == doctest::Approx(2.5 / 114.0));
    // Poles sit at cell centres.
    const double gx = (lat.poles[1][0] - lat.origin[0]) / lat.spacing;
    CHECK(std::abs(gx - std::floor(gx) - 0.5) < 1e-9);
}

TEST_CASE("Hamiltonian is Hermitian and the kernels agree")
{
    const WellPairConfig cfg = pair_at(0.25, 0.3);
    const Lattice2D lat = make_double_well_lattice(cfg, 8);
    const SparseHermitian H = assemble_hamiltonian(lat, make_link_field(lat, cfg.flux.alpha, 0.25), 0.25);
    const auto M = H.to_sparse();
    CHECK((Eigen::SparseMatrix<cplx>(M.adjoint()) - M).norm() < 1e-13);
    const CBlock x = CBlock::Random(static_cast<Eigen::Index>(H.dimension()), 3);
    CBlock a(x.rows(), x.cols()), b(x.rows(), x.cols());
    apply_hamiltonian_serial(H, x, a, 0.7);
    apply_hamiltonian_omp(H, x, b, 0.7);
    CHECK((a - b).norm() == 0.0);
    CHECK((a - (M * x + 0.7 * x)).norm() < 1e-12 * a.norm());
}

TEST_CASE("edge through a pole is rejected")
{
    CHECK_THROWS_AS(link_phase(Point{0.0, 0.0}, 0.3, 0.1, Point{-1.0, 0.0}, Point{1.0, 0.0}), std::domain_error);
}

TEST_CASE("free 2D harmonic oscillator")
{
    // V = |x|^2, h = 1, integer flux (gauge trivial): eigenvalues 2, 4, 4, 6.
    RadialPotential p = make_quadratic_well(0.0, 1.0);
    const LatticeSpectrum s = single_well_lattice_spectrum(p, flux_params(1.0, 1.0), 0.05, 4, 1e-8, 6.0);
    const double ex[] = {2.0, 4.0, 4.0, 6.0};
    for (std::size_t i = 0; i < 4; ++i) CHECK(s.pairs.eigenvalues[i] == doctest::Approx(ex[i]).epsilon(2e-3));
    for (double r : s.pairs.residuals) CHECK(r < 1e-7);
    const auto cl = degenerate_clusters(s.pairs);
    CHECK(cl.size() == 3);
}

TEST_CASE("solver is deterministic for a fixed seed")
{
    const WellPairConfig cfg = pair_at(0.3, 0.3);
    Oracle2DOptions opt;
    opt.m = 12;
    opt.k = 2;
    const LatticeSpectrum a = double_well_spectrum(cfg, opt);
    const LatticeSpectrum b = double_well_spectrum(cfg, opt);
    CHECK(a.pairs.eigenvalues == b.pairs.eigenvalues);
    opt.solver.parallel = false;
    const LatticeSpectrum c = double_well_spectrum(cfg, opt);
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(c.pairs.eigenvalues[i] == doctest::Approx(a.pairs.eigenvalues[i]).epsilon(1e-10));
}

TEST_CASE("single well lattice degeneracy at half-integer flux")
{
    const double h = 0.3;
    const LatticeSpectrum s = single_well_lattice_spectrum(bump, flux_params(h * 2.5, h), 0.05, 2, 1e-9);
    const double gap = s.pairs.eigenvalues[1] - s.pairs.eigenvalues[0];
    CHECK(gap < 1e-6);
    const LatticeSpectrum g = single_well_lattice_spectrum(bump, flux_params(h * 2.2, h), 0.05, 2, 1e-9);
    CHECK(g.pairs.eigenvalues[1] - g.pairs.eigenvalues[0] > 1e-3);
}

TEST_CASE("symmetry checks on a small double well")
{
    const WellPairConfig cfg = pair_at(0.3, 0.5);
    Oracle2DOptions opt;
    opt.m = 12;
    const Lattice2D lat = make_double_well_lattice(cfg, opt.m);
    const LatticeSpectrum s = double_well_spectrum(cfg, opt);
    const SymmetryReport rep = symmetry_check(s.pairs, lat, cfg.flux);
    CHECK(rep.involution_defect < 1e-12);
    CHECK(rep.kdw_checked);
    CHECK(rep.max_kdw_defect() < 1e-5);
    CHECK(rep.max_inversion_defect() < 1e-5);
}

TEST_CASE("spectrum is periodic in alpha with period h")
{
    const WellPairConfig cfg = pair_at(0.3, 0.3);
    const Lattice2D lat = make_double_well_lattice(cfg, 10);
    const FluxPeriodicityReport r = flux_periodicity_check(lat, 0.3, cfg.flux.alpha, 2, 1e-9);
    CHECK(r.max_relative_gap < 1e-7);
}

TEST_CASE("lattice JSON layout")
{
    const WellPairConfig cfg = pair_at(0.3, 0.3);
    Oracle2DOptions opt;
    opt.m = 10;
    opt.k = 2;
    const nlohmann::json j = to_json(double_well_spectrum(cfg, opt));
    for (const char* key : {"h", "alpha", "e0", "grid", "eigenvalues", "residuals", "gaps"}) CHECK(j.contains(key));
    CHECK(j["grid"].contains("nx"));
    CHECK(j["grid"].contains("spacing"));
    CHECK(j["eigenvalues"].size() == 2);
}
