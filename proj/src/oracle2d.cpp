#include "abtunnel/oracle2d.hpp"

#include <algorithm>
#include <cmath>

namespace abtunnel {

namespace {

using cplx = std::complex<double>;

std::vector<double> diffs(const std::vector<double>& v)
{
    std::vector<double> g;
    for (std::size_t i = 1; i < v.size(); ++i) g.push_back(v[i] - v[i - 1]);
    return g;
}

}  // namespace

LatticeSpectrum solve_lattice(const Lattice2D& lat, double alpha, double h, int k, double tol,
                              const LobpcgOptions& solver)
{
    const LinkField links = make_link_field(lat, alpha, h);
    const PlaquetteReport pr = check_plaquettes(lat, links, alpha, h);
    if (!pr.ok(1e-12)) throw std::logic_error("solve_lattice: plaquette flux invariant violated");
    const SparseHermitian H = assemble_hamiltonian(lat, links, h);

    LatticeSpectrum s;
    s.h = h;
    s.alpha = alpha;
    s.e0 = flux_residue(alpha / h);
    s.nx = lat.nx;
    s.ny = lat.ny;
    s.spacing = lat.spacing;
    s.pairs = solve_lowest_k(H, k, tol, solver);
    s.gaps = diffs(s.pairs.eigenvalues);
    return s;
}

LatticeSpectrum double_well_spectrum(const WellPairConfig& cfg, const Oracle2DOptions& opt)
{
    const Lattice2D lat = make_double_well_lattice(cfg, opt.m, opt.half_width);
    return solve_lattice(lat, cfg.flux.alpha, cfg.flux.h, opt.k, opt.tol, opt.solver);
}

LatticeSpectrum single_well_lattice_spectrum(const RadialPotential& p, const FluxParams& flux, double spacing,
                                             int k, double tol, double half_width, const LobpcgOptions& solver)
{
    const Lattice2D lat = make_single_well_lattice(p, spacing, half_width);
    return solve_lattice(lat, flux.alpha, flux.h, k, tol, solver);
}

std::vector<std::vector<int>> degenerate_clusters(const LatticeEigenpairs& e)
{
    const double rmax = e.residuals.empty() ? 0.0 : *std::max_element(e.residuals.begin(), e.residuals.end());
    const double thr = 10.0 * rmax;
    std::vector<std::vector<int>> out;
    for (std::size_t i = 0; i < e.eigenvalues.size(); ++i) {
        if (i > 0 && e.eigenvalues[i] - e.eigenvalues[i - 1] < thr)
            out.back().push_back(static_cast<int>(i));
        else
            out.push_back({static_cast<int>(i)});
    }
    return out;
}

double SymmetryReport::max_inversion_defect() const
{
    double m = 0.0;
    for (double d : inversion_defect) m = std::max(m, d);
    return m;
}

double SymmetryReport::max_kdw_defect() const
{
    double m = 0.0;
    for (double d : kdw_defect) m = std::max(m, d);
    return m;
}

SymmetryReport symmetry_check(const LatticeEigenpairs& e, const Lattice2D& lat, const FluxParams& flux)
{
    SymmetryReport rep;
    rep.clusters = degenerate_clusters(e);
    const CBlock& U = e.vectors;
    const Eigen::Index n = U.rows();

    auto invert = [&](const Eigen::VectorXcd& u) { return Eigen::VectorXcd(u.reverse()); };

    rep.inversion_defect.assign(static_cast<std::size_t>(U.cols()), -1.0);
    rep.inversion_sign.assign(static_cast<std::size_t>(U.cols()), 0);
    for (Eigen::Index j = 0; j < U.cols(); ++j) {
        const Eigen::VectorXcd u = U.col(j);
        const Eigen::VectorXcd Lu = invert(u);
        rep.involution_defect = std::max(rep.involution_defect, (invert(Lu) - u).norm());
        bool alone = false;
        for (const auto& c : rep.clusters)
            if (c.size() == 1 && c.front() == j) alone = true;
        if (!alone) continue;
        const double dp = (Lu - u).norm(), dm = (Lu + u).norm();
        rep.inversion_defect[static_cast<std::size_t>(j)] = std::min(dp, dm) / u.norm();
        rep.inversion_sign[static_cast<std::size_t>(j)] = dp <= dm ? 1 : -1;
    }

    const double two_t = 2.0 * flux.t;
    if (std::abs(two_t - std::round(two_t)) < 1e-9 && lat.poles.size() == 2) {
        rep.kdw_checked = true;
        const std::vector<double> el = node_angles(lat, lat.poles[0]);
        const std::vector<double> er = node_angles(lat, lat.poles[1]);
        Eigen::VectorXcd phase(n);
        for (Eigen::Index a = 0; a < n; ++a)
            phase(a) = std::polar(1.0, two_t * (el[static_cast<std::size_t>(a)] + er[static_cast<std::size_t>(a)]));
        for (const auto& c : rep.clusters) {
            CBlock B(n, static_cast<Eigen::Index>(c.size()));
            for (std::size_t q = 0; q < c.size(); ++q) B.col(static_cast<Eigen::Index>(q)) = U.col(c[q]);
            // Orthonormal basis of the cluster.
            Eigen::HouseholderQR<CBlock> qr(B);
            const CBlock Q = qr.householderQ() * CBlock::Identity(n, B.cols());
            double worst = 0.0;
            for (Eigen::Index q = 0; q < Q.cols(); ++q) {
                const Eigen::VectorXcd Ku = phase.cwiseProduct(Q.col(q).conjugate());
                const Eigen::VectorXcd r = Ku - Q * (Q.adjoint() * Ku);
                worst = std::max(worst, r.norm());
            }
            rep.kdw_defect.push_back(worst);
        }
    }
    return rep;
}

FluxPeriodicityReport flux_periodicity_check(const Lattice2D& lat, double h, double alpha, int k, double tol,
                                             const LobpcgOptions& solver)
{
    FluxPeriodicityReport rep;
    rep.base = solve_lattice(lat, alpha, h, k, tol, solver).pairs.eigenvalues;
    rep.shifted = solve_lattice(lat, alpha + h, h, k, tol, solver).pairs.eigenvalues;
    for (std::size_t i = 0; i < rep.base.size(); ++i)
        rep.max_relative_gap = std::max(rep.max_relative_gap, std::abs(rep.base[i] - rep.shifted[i]) /
                                                                  std::max(std::abs(rep.base[i]), 1e-300));
    return rep;
}

nlohmann::json to_json(const LatticeSpectrum& s)
{
    nlohmann::json j;
    j["h"] = s.h;
    j["alpha"] = s.alpha;
    j["e0"] = s.e0;
    j["grid"] = {{"nx", s.nx}, {"ny", s.ny}, {"spacing", s.spacing}};
    j["eigenvalues"] = s.pairs.eigenvalues;
    j["residuals"] = s.pairs.residuals;
    nlohmann::json g = nlohmann::json::object();
    for (std::size_t i = 0; i < s.gaps.size(); ++i) g["gap" + std::to_string(i + 1) + std::to_string(i + 2)] = s.gaps[i];
    j["gaps"] = g;
    j["iterations"] = s.pairs.iterations;
    return j;
}

}  // namespace abtunnel
