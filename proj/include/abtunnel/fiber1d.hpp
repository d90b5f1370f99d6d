#pragma once

#include <memory>
#include <vector>

#include "abtunnel/agmon.hpp"
#include "abtunnel/quadrature.hpp"
#include "abtunnel/wells.hpp"

namespace abtunnel {

// Cell-centred radial grid: r_i = (i - 1/2) dr, i = 1..n, and a Dirichlet
// ghost node at r_max = (n + 1/2) dr.
struct RadialGrid {
    std::vector<double> r;
    double dr = 0.0;
    double r_max = 0.0;

    std::size_t size() const { return r.size(); }
};

// r_max is rounded to the nearest admissible ghost position.
RadialGrid make_radial_grid(double dr, double r_max);

// r_max = max(3 sigma, L + 2); L = 0 for a single well.
double default_r_max(const RadialPotential& p, double L = 0.0);

// Fiber operator T = -h^2 (d^2/dr^2 + (1/r) d/dr) + v + h^2 e^2 / r^2 on
// L^2(r dr).
//
// Discretized through psi = r^e w. The quadratic form becomes
// int (h^2 w'^2 + v w^2) r^{1+2e} dr, which is discretized by finite volumes:
// cell masses W_i = int r^{1+2e} over cell i, face conductances
// h^2 r_{i+1/2}^{1+2e} / dr. This keeps the scheme second order for every
// e >= 0 (a plain stencil on psi with the h^2 e^2/r^2 term on the diagonal
// degrades to O(dr^{2e}) near the origin).
class FiberOperator {
public:
    FiberOperator(const RadialPotential& p, double h, double e, RadialGrid grid);

    const RadialGrid& grid() const { return grid_; }
    const RadialPotential& potential() const { return pot_; }
    double h() const { return h_; }
    double e() const { return e_; }

    // Symmetric tridiagonal form S = W^{1/2} A W^{-1/2}.
    const std::vector<double>& diagonal() const { return diag_; }
    const std::vector<double>& offdiagonal() const { return off_; }

    // Discrete measure for psi values, omega_i = W_i r_i^{-2e}; equals
    // r_i dr exactly when e = 0.
    const std::vector<double>& weights() const { return omega_; }

    // (T psi)_i at the nodes.
    std::vector<double> apply(const std::vector<double>& psi) const;
    double inner(const std::vector<double>& a, const std::vector<double>& b) const;

private:
    RadialPotential pot_;
    double h_, e_;
    RadialGrid grid_;
    std::vector<double> mass_, face_, vpot_, diag_, off_, omega_;
};

FiberOperator assemble_fiber(const RadialPotential& p, double h, double e, const RadialGrid& grid);

// Applies the same stencil to samples psi(r_i) on nodes r_i = (i - 1/2) dr,
// i = i0 - 1 .. i0 + n; returns (T psi) at the n interior nodes i0..i0+n-1.
std::vector<double> apply_fiber_stencil(const RadialPotential& p, double h, double e, double dr,
                                        long i0, const std::vector<double>& psi);

// Smooth interpolant of one eigenvector: psi(r) and psi'(r) anywhere in
// (0, r_max]; zero beyond r_max.
class RadialState {
public:
    RadialState(const RadialGrid& grid, double e, const std::vector<double>& psi);

    double psi(double r) const;
    double dpsi(double r) const;
    double r_max() const { return r_max_; }

private:
    double e_;
    double r_max_;
    double r_last_;
    bool log_form_;
    std::shared_ptr<CubicSpline> spline_;
};

struct EigenSolution {
    RadialGrid grid;
    double h = 0.0;
    double e = 0.0;
    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> vectors;  // psi at nodes
    std::vector<double> weights;               // omega_i
    std::vector<double> residuals;             // ||T u - lambda u||, weighted

    RadialState state(std::size_t n = 0) const { return RadialState(grid, e, vectors.at(n)); }
};

// k lowest eigenpairs by bisection and inverse iteration (LAPACK dstevx).
// The ground state is made positive. Throws std::runtime_error when LAPACK
// reports unconverged vectors or a residual exceeds 1e-9.
EigenSolution solve_lowest(const FiberOperator& op, int k);

// Lowest k eigenvalues from (dr, dr/2) with one Richardson step.
std::vector<double> richardson_eigenvalues(const RadialPotential& p, double h, double e, double dr,
                                           double r_max, int k);

// E_n(e0) = 2 sqrt(beta) (1 + e0 + 2n) for -Delta_e + beta r^2 (h = 1).
double harmonic_exact(double beta, double e0, int n);

// Normalized ground state of the h = 1 model,
// sqrt(2) beta^{(1+e0)/4} Gamma(e0+1)^{-1/2} r^{e0} exp(-sqrt(beta) r^2 / 2).
double harmonic_ground_state(double beta, double e0, double r);

struct HarmonicSeries {
    double mu0 = 0.0, mu1 = 0.0, mu2 = 0.0;
};

// mu0 = v(0), mu1 = sqrt(2 v''(0)) (1 + e0),
// mu2 = (e0 + 1)(e0 + 2) v''''(0) / (24 beta).
HarmonicSeries harmonic_series_mu(const RadialPotential& p, double e0);

struct FiberLevel {
    long m = 0;
    double e = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

struct SingleWellSpectrum {
    std::vector<FiberLevel> fibers;
    double ground = 0.0;
    long m_ground = 0;
    int degeneracy = 1;
    double gap = 0.0;
    bool edge_warning = false;
};

// Minimizes the fiber ground energies over m in [m_star - W, m_star + W].
// Fibers are solved in parallel.
SingleWellSpectrum single_well_spectrum(const RadialPotential& p, const FluxParams& flux,
                                        const RadialGrid& grid, int m_window);

// sup over [r_lo, r_hi] of exp((1 - delta) d(r) / h) |psi(r)| for the ground
// state; defaults to [sigma, r_max - 1].
double decay_check(const EigenSolution& sol, const WKBData& w, double delta, double r_lo = -1.0,
                   double r_hi = -1.0);

}  // namespace abtunnel
