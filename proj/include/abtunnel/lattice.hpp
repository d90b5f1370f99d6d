#pragma once

#include <Eigen/Sparse>

#include <array>
#include <complex>
#include <vector>

#include "abtunnel/wells.hpp"

namespace abtunnel {

using Point = std::array<double, 2>;

// Uniform node grid x_i = origin + i * spacing. Poles sit at plaquette
// centres; the outer ring of ghost nodes is Dirichlet.
struct Lattice2D {
    int nx = 0, ny = 0;
    double spacing = 0.0;
    Point origin{0.0, 0.0};
    std::vector<Point> poles;
    std::vector<double> potential;  // V at every node, index j * nx + i

    double x(int i) const { return origin[0] + i * spacing; }
    double y(int j) const { return origin[1] + j * spacing; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
};

// Symmetric grid around the origin with nodes at (k + 1/2) s, s = L / (2m),
// so both poles (-L/2, 0), (L/2, 0) land on plaquette centres. half_width = 0
// means L + 3 sigma.
Lattice2D make_double_well_lattice(const WellPairConfig& cfg, int m, double half_width = 0.0);

// One well and one pole at the origin; half_width = 0 means 4 sigma.
Lattice2D make_single_well_lattice(const RadialPotential& p, double spacing, double half_width = 0.0);

// exp(i (alpha/h) dtheta) for the edge a -> b, dtheta the signed angle the
// edge subtends at the pole. Throws if the edge passes within 1e-9 of it.
std::complex<double> link_phase(const Point& pole, double alpha, double h, const Point& a, const Point& b);

// Phases of the oriented edges (i,j) -> (i+1,j) and (i,j) -> (i,j+1),
// multiplied over all poles.
struct LinkField {
    int nx = 0, ny = 0;
    std::vector<std::complex<double>> ux;  // (nx-1) * ny, index j * (nx-1) + i
    std::vector<std::complex<double>> uy;  // nx * (ny-1), index j * nx + i
};

LinkField make_link_field(const Lattice2D& lat, double alpha, double h);

struct PlaquetteReport {
    double max_free_defect = 0.0;  // |prod - 1| on pole-free plaquettes
    double max_pole_defect = 0.0;  // |prod - e^{2 pi i alpha/h}| around a pole
    int pole_plaquettes = 0;
    bool ok(double tol = 1e-12) const { return max_free_defect <= tol && max_pole_defect <= tol; }
};

PlaquetteReport check_plaquettes(const Lattice2D& lat, const LinkField& links, double alpha, double h);

// Gauged 5-point stencil: diagonal 4 h^2/s^2 + V, hopping -(h^2/s^2) U
// with H(b, a) = -c U_{a->b}. Kept in stencil form; to_sparse() gives the
// explicit matrix.
struct SparseHermitian {
    int nx = 0, ny = 0;
    double c = 0.0;
    std::vector<double> diag;
    std::vector<std::complex<double>> ux, uy;

    std::size_t dimension() const { return diag.size(); }
    Eigen::SparseMatrix<std::complex<double>> to_sparse() const;
};

SparseHermitian assemble_hamiltonian(const Lattice2D& lat, const LinkField& links, double h);

// eta(x - pole) in [0, 2 pi) at every node.
std::vector<double> node_angles(const Lattice2D& lat, const Point& pole);

}  // namespace abtunnel
