#include "abtunnel/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace abtunnel {

namespace {

using cplx = std::complex<double>;

double seg_distance(const Point& p, const Point& a, const Point& b)
{
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(a[0] + t * dx - p[0], a[1] + t * dy - p[1]);
}

void fill_potential(Lattice2D& lat, const RadialPotential& p, const std::vector<Point>& centres)
{
    lat.potential.assign(lat.size(), 0.0);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < lat.ny; ++j)
        for (int i = 0; i < lat.nx; ++i) {
            double v = 0.0;
            for (const Point& c : centres) v += p.v(std::hypot(lat.x(i) - c[0], lat.y(j) - c[1]));
            lat.potential[lat.index(i, j)] = v;
        }
}

bool seven_smooth(int n)
{
    for (int p : {2, 3, 5, 7})
        while (n % p == 0) n /= p;
    return n == 1;
}

Lattice2D symmetric_grid(double s, double half_width)
{
    // Nodes at (k + 1/2) s, k = -N..N-1, with the Dirichlet ghost beyond
    // half_width. N is padded until 2N + 1 is 7-smooth, the length the sine
    // transforms of the preconditioner work with.
    int N = static_cast<int>(std::ceil(half_width / s + 0.5));
    while (!seven_smooth(2 * N + 1)) ++N;
    Lattice2D lat;
    lat.nx = lat.ny = 2 * N;
    lat.spacing = s;
    lat.origin = {(-N + 0.5) * s, (-N + 0.5) * s};
    return lat;
}

}  // namespace

Lattice2D make_double_well_lattice(const WellPairConfig& cfg, int m, double half_width)
{
    if (m < 2) throw std::invalid_argument("make_double_well_lattice: m must be at least 2");
    const double sigma = cfg.potential.sigma;
    if (half_width <= 0.0) half_width = cfg.L + 3.0 * sigma;
    Lattice2D lat = symmetric_grid(cfg.L / (2.0 * m), half_width);
    lat.poles = {Point{-0.5 * cfg.L, 0.0}, Point{0.5 * cfg.L, 0.0}};
    fill_potential(lat, cfg.potential, lat.poles);
    return lat;
}

Lattice2D make_single_well_lattice(const RadialPotential& p, double spacing, double half_width)
{
    if (half_width <= 0.0) half_width = 4.0 * p.sigma;
    Lattice2D lat = symmetric_grid(spacing, half_width);
    lat.poles = {Point{0.0, 0.0}};
    fill_potential(lat, p, lat.poles);
    return lat;
}

cplx link_phase(const Point& pole, double alpha, double h, const Point& a, const Point& b)
{
    if (seg_distance(pole, a, b) < 1e-9) throw std::domain_error("link_phase: edge passes through a pole");
    const double ax = a[0] - pole[0], ay = a[1] - pole[1];
    const double bx = b[0] - pole[0], by = b[1] - pole[1];
    const double dtheta = std::atan2(ax * by - ay * bx, ax * bx + ay * by);
    return std::polar(1.0, alpha / h * dtheta);
}

LinkField make_link_field(const Lattice2D& lat, double alpha, double h)
{
    LinkField f;
    f.nx = lat.nx;
    f.ny = lat.ny;
    f.ux.assign(static_cast<std::size_t>(lat.nx - 1) * lat.ny, cplx(1.0));
    f.uy.assign(static_cast<std::size_t>(lat.nx) * (lat.ny - 1), cplx(1.0));
    // No edge may pass near a pole; checked once here since the loop below
    // runs in a parallel region.
    for (const Point& p : lat.poles) {
        const double gx = (p[0] - lat.origin[0]) / lat.spacing, gy = (p[1] - lat.origin[1]) / lat.spacing;
        const double off = lat.spacing * std::min(std::abs(gx - std::round(gx)), std::abs(gy - std::round(gy)));
        if (off < 1e-9) throw std::domain_error("make_link_field: a pole lies on a lattice line");
    }
    // Phases are summed before exponentiation so each edge costs one polar.
    auto angle_sum = [&](const Point& a, const Point& b) {
        double acc = 0.0;
        for (const Point& p : lat.poles) {
            const double ax = a[0] - p[0], ay = a[1] - p[1];
            const double bx = b[0] - p[0], by = b[1] - p[1];
            acc += std::atan2(ax * by - ay * bx, ax * bx + ay * by);
        }
        return acc;
    };
    const double t = alpha / h;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < lat.ny; ++j)
        for (int i = 0; i < lat.nx; ++i) {
            const Point a{lat.x(i), lat.y(j)};
            if (i + 1 < lat.nx)
                f.ux[static_cast<std::size_t>(j) * (lat.nx - 1) + i] =
                    std::polar(1.0, t * angle_sum(a, Point{lat.x(i + 1), lat.y(j)}));
            if (j + 1 < lat.ny)
                f.uy[lat.index(i, j)] = std::polar(1.0, t * angle_sum(a, Point{lat.x(i), lat.y(j + 1)}));
        }
    return f;
}

PlaquetteReport check_plaquettes(const Lattice2D& lat, const LinkField& links, double alpha, double h)
{
    PlaquetteReport rep;
    const cplx enclosed = std::polar(1.0, 2.0 * std::numbers::pi * alpha / h);
    const double s = lat.spacing;
    for (int j = 0; j + 1 < lat.ny; ++j)
        for (int i = 0; i + 1 < lat.nx; ++i) {
            // Counter-clockwise: bottom, right, conj(top), conj(left).
            const cplx prod = links.ux[static_cast<std::size_t>(j) * (lat.nx - 1) + i] *
                              links.uy[lat.index(i + 1, j)] *
                              std::conj(links.ux[static_cast<std::size_t>(j + 1) * (lat.nx - 1) + i]) *
                              std::conj(links.uy[lat.index(i, j)]);
            bool has_pole = false;
            for (const Point& p : lat.poles) {
                const double px = (p[0] - lat.x(i)) / s, py = (p[1] - lat.y(j)) / s;
                if (px > 0.0 && px < 1.0 && py > 0.0 && py < 1.0) has_pole = true;
            }
            if (has_pole) {
                ++rep.pole_plaquettes;
                rep.max_pole_defect = std::max(rep.max_pole_defect, std::abs(prod - enclosed));
            } else {
                rep.max_free_defect = std::max(rep.max_free_defect, std::abs(prod - 1.0));
            }
        }
    return rep;
}

SparseHermitian assemble_hamiltonian(const Lattice2D& lat, const LinkField& links, double h)
{
    SparseHermitian H;
    H.nx = lat.nx;
    H.ny = lat.ny;
    H.c = h * h / (lat.spacing * lat.spacing);
    H.diag.resize(lat.size());
    for (std::size_t k = 0; k < lat.size(); ++k) H.diag[k] = 4.0 * H.c + lat.potential[k];
    H.ux = links.ux;
    H.uy = links.uy;
    return H;
}

Eigen::SparseMatrix<cplx> SparseHermitian::to_sparse() const
{
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(5 * dimension());
    auto idx = [&](int i, int j) { return j * nx + i; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int a = idx(i, j);
            t.emplace_back(a, a, diag[static_cast<std::size_t>(a)]);
            if (i + 1 < nx) {
                const cplx u = ux[static_cast<std::size_t>(j) * (nx - 1) + i];
                t.emplace_back(idx(i + 1, j), a, -c * u);
                t.emplace_back(a, idx(i + 1, j), -c * std::conj(u));
            }
            if (j + 1 < ny) {
                const cplx u = uy[static_cast<std::size_t>(a)];
                t.emplace_back(idx(i, j + 1), a, -c * u);
                t.emplace_back(a, idx(i, j + 1), -c * std::conj(u));
            }
        }
    Eigen::SparseMatrix<cplx> M(static_cast<int>(dimension()), static_cast<int>(dimension()));
    M.setFromTriplets(t.begin(), t.end());
    return M;
}

std::vector<double> node_angles(const Lattice2D& lat, const Point& pole)
{
    std::vector<double> eta(lat.size());
    for (int j = 0; j < lat.ny; ++j)
        for (int i = 0; i < lat.nx; ++i) {
            double t = std::atan2(lat.y(j) - pole[1], lat.x(i) - pole[0]);
            if (t < 0.0) t += 2.0 * std::numbers::pi;
            eta[lat.index(i, j)] = t;
        }
    return eta;
}

}  // namespace abtunnel
