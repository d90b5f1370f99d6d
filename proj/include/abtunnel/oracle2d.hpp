#pragma once

#include "json.hpp"

#include <vector>

#include "abtunnel/eigensolver.hpp"
#include "abtunnel/lattice.hpp"
#include "abtunnel/wells.hpp"

namespace abtunnel {

struct Oracle2DOptions {
    int m = 57;               // cells per half pole distance; m = 57 gives a 524^2 grid at L = 2.5
    double half_width = 0.0;  // 0: L + 3 sigma
    int k = 4;
    double tol = 1e-8;
    LobpcgOptions solver;
};

struct LatticeSpectrum {
    double h = 0.0;
    double alpha = 0.0;
    double e0 = 0.0;
    int nx = 0, ny = 0;
    double spacing = 0.0;
    LatticeEigenpairs pairs;
    std::vector<double> gaps;  // consecutive differences
};

LatticeSpectrum solve_lattice(const Lattice2D& lat, double alpha, double h, int k, double tol,
                              const LobpcgOptions& solver = {});

LatticeSpectrum double_well_spectrum(const WellPairConfig& cfg, const Oracle2DOptions& opt = {});

// Single well centred on the pole at the origin.
LatticeSpectrum single_well_lattice_spectrum(const RadialPotential& p, const FluxParams& flux, double spacing,
                                             int k, double tol, double half_width = 0.0,
                                             const LobpcgOptions& solver = {});

// Runs of consecutive eigenvalues whose gaps fall below 10 times the
// largest residual.
std::vector<std::vector<int>> degenerate_clusters(const LatticeEigenpairs& e);

struct SymmetryReport {
    std::vector<std::vector<int>> clusters;
    std::vector<double> inversion_defect;  // min over sign of ||L u -+ u||; -1 inside a cluster
    std::vector<int> inversion_sign;       // +1, -1, or 0 when skipped
    double involution_defect = 0.0;        // ||L^2 u - u|| over all vectors
    bool kdw_checked = false;
    std::vector<double> kdw_defect;        // per cluster, ||K u - P K u|| maximized over the cluster
    double max_inversion_defect() const;
    double max_kdw_defect() const;
};

// Point inversion x -> -x is the node reversal on the symmetric grid. The
// antilinear K u = e^{i zeta} conj(u), zeta = 2 (alpha/h)(eta_l + eta_r),
// is checked when 2 alpha/h is an integer.
SymmetryReport symmetry_check(const LatticeEigenpairs& e, const Lattice2D& lat, const FluxParams& flux);

struct FluxPeriodicityReport {
    std::vector<double> base, shifted;
    double max_relative_gap = 0.0;
};

// Spectra at alpha and alpha + h on the same lattice.
FluxPeriodicityReport flux_periodicity_check(const Lattice2D& lat, double h, double alpha, int k, double tol,
                                             const LobpcgOptions& solver = {});

nlohmann::json to_json(const LatticeSpectrum& s);

}  // namespace abtunnel
