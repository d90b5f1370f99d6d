#include "abtunnel/fiber1d.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace abtunnel {

RadialGrid make_radial_grid(double dr, double r_max)
{
    if (!(dr > 0.0) || !(r_max > 4.0 * dr)) throw std::invalid_argument("radial grid: need 0 < 4 dr < r_max");
    const long n = std::lround(r_max / dr - 0.5);
    RadialGrid g;
    g.dr = dr;
    g.r_max = (static_cast<double>(n) + 0.5) * dr;
    g.r.resize(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) g.r[static_cast<std::size_t>(i)] = (static_cast<double>(i) + 0.5) * dr;
    return g;
}

double default_r_max(const RadialPotential& p, double L) { return std::max(3.0 * p.sigma, L + 2.0); }

namespace {

struct CellGeometry {
    double mass;   // W_i
    double face_in;  // h^2 r_{i-1/2}^{1+2e} / dr
    double face_out; // h^2 r_{i+1/2}^{1+2e} / dr
};

// Node i (1-based) of a grid with spacing dr.
CellGeometry cell(long i, double dr, double h, double e)
{
    const double a = (static_cast<double>(i) - 1.0) * dr;
    const double b = static_cast<double>(i) * dr;
    const double q = 2.0 + 2.0 * e;
    CellGeometry c;
    c.mass = (std::pow(b, q) - std::pow(a, q)) / q;
    c.face_in = a > 0.0 ? h * h * std::pow(a, 1.0 + 2.0 * e) / dr : 0.0;
    c.face_out = h * h * std::pow(b, 1.0 + 2.0 * e) / dr;
    return c;
}

}  // namespace

FiberOperator::FiberOperator(const RadialPotential& p, double h, double e, RadialGrid grid)
    : pot_(p), h_(h), e_(e), grid_(std::move(grid))
{
    if (!(h > 0.0)) throw std::invalid_argument("assemble_fiber: h must be positive");
    if (!(e >= 0.0)) throw std::invalid_argument("assemble_fiber: e must be non-negative");
    if (grid_.r.empty() || !(grid_.r.front() > 0.0))
        throw std::invalid_argument("assemble_fiber: grid must not contain r = 0");

    const std::size_t n = grid_.size();
    mass_.resize(n);
    face_.resize(n);  // face_[i] = conductance between node i and i+1 (or the wall)
    vpot_.resize(n);
    diag_.resize(n);
    off_.resize(n - 1);
    omega_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const CellGeometry c = cell(static_cast<long>(i) + 1, grid_.dr, h_, e_);
        mass_[i] = c.mass;
        face_[i] = c.face_out;
        vpot_[i] = pot_.v(grid_.r[i]);
        omega_[i] = c.mass * std::pow(grid_.r[i], -2.0 * e_);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double fin = i > 0 ? face_[i - 1] : 0.0;
        diag_[i] = (fin + face_[i]) / mass_[i] + vpot_[i];
        if (i + 1 < n) off_[i] = -face_[i] / std::sqrt(mass_[i] * mass_[i + 1]);
    }
}

std::vector<double> FiberOperator::apply(const std::vector<double>& psi) const
{
    const std::size_t n = grid_.size();
    if (psi.size() != n) throw std::invalid_argument("FiberOperator::apply: size mismatch");
    std::vector<double> w(n), out(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = psi[i] * std::pow(grid_.r[i], -e_);
    for (std::size_t i = 0; i < n; ++i) {
        double flux = face_[i] * (w[i] - (i + 1 < n ? w[i + 1] : 0.0));
        if (i > 0) flux += face_[i - 1] * (w[i] - w[i - 1]);
        out[i] = std::pow(grid_.r[i], e_) * (flux / mass_[i] + vpot_[i] * w[i]);
    }
    return out;
}

double FiberOperator::inner(const std::vector<double>& a, const std::vector<double>& b) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < omega_.size(); ++i) s += a[i] * b[i] * omega_[i];
    return s;
}

FiberOperator assemble_fiber(const RadialPotential& p, double h, double e, const RadialGrid& grid)
{
    return FiberOperator(p, h, e, grid);
}

std::vector<double> apply_fiber_stencil(const RadialPotential& p, double h, double e, double dr,
                                        long i0, const std::vector<double>& psi)
{
    if (i0 < 1 || psi.size() < 3) throw std::invalid_argument("apply_fiber_stencil: bad node range");
    const std::size_t n = psi.size() - 2;
    auto radius = [dr](long i) { return (static_cast<double>(i) - 0.5) * dr; };
    auto w = [&](std::size_t k) {
        const double r = radius(i0 - 1 + static_cast<long>(k));
        return r > 0.0 ? psi[k] * std::pow(r, -e) : 0.0;
    };
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const long i = i0 + static_cast<long>(k);
        const CellGeometry c = cell(i, dr, h, e);
        const double wi = w(k + 1);
        const double flux = c.face_out * (wi - w(k + 2)) + c.face_in * (wi - w(k));
        const double r = radius(i);
        out[k] = std::pow(r, e) * (flux / c.mass + p.v(r) * wi);
    }
    return out;
}

RadialState::RadialState(const RadialGrid& grid, double e, const std::vector<double>& psi)
    : e_(e), r_max_(grid.r_max), r_last_(grid.r.back())
{
    const std::size_t n = grid.size();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = psi[i] * std::pow(grid.r[i], -e);
    log_form_ = std::all_of(w.begin(), w.end(), [](double x) { return x > 0.0; });

    // w is even in r; two mirrored nodes keep the natural end condition away
    // from the first cell.
    std::vector<double> x{-grid.r[1], -grid.r[0]}, y{w[1], w[0]};
    x.insert(x.end(), grid.r.begin(), grid.r.end());
    y.insert(y.end(), w.begin(), w.end());
    if (log_form_) {
        for (double& v : y) v = std::log(v);
    } else {
        x.push_back(grid.r_max);
        y.push_back(0.0);
    }
    spline_ = std::make_shared<CubicSpline>(std::move(x), std::move(y));
}

double RadialState::psi(double r) const
{
    if (r >= r_max_ || r < 0.0) return 0.0;
    double w;
    if (log_form_ && r > r_last_)
        w = std::exp((*spline_)(r_last_)) * (r_max_ - r) / (r_max_ - r_last_);
    else
        w = log_form_ ? std::exp((*spline_)(r)) : (*spline_)(r);
    return std::pow(r, e_) * w;
}

double RadialState::dpsi(double r) const
{
    if (r >= r_max_ || r <= 0.0) return 0.0;
    double w, dw;
    if (log_form_ && r > r_last_) {
        const double wl = std::exp((*spline_)(r_last_));
        w = wl * (r_max_ - r) / (r_max_ - r_last_);
        dw = -wl / (r_max_ - r_last_);
    } else if (log_form_) {
        w = std::exp((*spline_)(r));
        dw = spline_->derivative(r) * w;
    } else {
        w = (*spline_)(r);
        dw = spline_->derivative(r);
    }
    const double re = std::pow(r, e_);
    return (e_ == 0.0 ? 0.0 : e_ * re / r * w) + re * dw;
}

EigenSolution solve_lowest(const FiberOperator& op, int k)
{
    if (k < 1 || k > 10) throw std::invalid_argument("solve_lowest: k must be in [1, 10]");
    const RadialGrid& g = op.grid();
    const lapack_int n = static_cast<lapack_int>(g.size());
    if (k > n) throw std::invalid_argument("solve_lowest: k exceeds grid size");

    std::vector<double> d = op.diagonal(), e = op.offdiagonal();
    e.push_back(0.0);
    std::vector<double> w(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(n) * k);
    std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
    lapack_int found = 0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    const lapack_int info = LAPACKE_dstevx(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, k,
                                           abstol, &found, w.data(), z.data(), n, ifail.data());
    if (info != 0 || found != k)
        throw std::runtime_error("solve_lowest: dstevx failed (info " + std::to_string(info) + ", found " +
                                 std::to_string(found) + ")");

    EigenSolution sol;
    sol.grid = g;
    sol.h = op.h();
    sol.e = op.e();
    sol.weights = op.weights();
    const auto& dg = op.diagonal();
    const auto& od = op.offdiagonal();
    for (int j = 0; j < k; ++j) {
        const double* y = z.data() + static_cast<std::size_t>(j) * n;
        // Residual of the symmetric form equals the weighted residual of psi.
        double res = 0.0;
        for (lapack_int i = 0; i < n; ++i) {
            double s = dg[i] * y[i] - w[j] * y[i];
            if (i > 0) s += od[i - 1] * y[i - 1];
            if (i + 1 < n) s += od[i] * y[i + 1];
            res += s * s;
        }
        res = std::sqrt(res);
        if (res > 1e-9 * std::max(1.0, std::abs(w[j])))
            throw std::runtime_error("solve_lowest: residual " + std::to_string(res) + " for eigenvalue " +
                                     std::to_string(j));

        std::vector<double> psi(static_cast<std::size_t>(n));
        for (lapack_int i = 0; i < n; ++i) {
            const double m = op.weights()[i] * std::pow(g.r[i], 2.0 * op.e());  // cell mass W_i
            psi[i] = y[i] / std::sqrt(m) * std::pow(g.r[i], op.e());
        }
        if (j == 0) {
            const double s = std::accumulate(psi.begin(), psi.end(), 0.0);
            if (s < 0.0)
                for (double& v : psi) v = -v;
        }
        sol.eigenvalues.push_back(w[j]);
        sol.vectors.push_back(std::move(psi));
        sol.residuals.push_back(res);
    }
    return sol;
}

std::vector<double> richardson_eigenvalues(const RadialPotential& p, double h, double e, double dr,
                                           double r_max, int k)
{
    const EigenSolution coarse = solve_lowest(assemble_fiber(p, h, e, make_radial_grid(dr, r_max)), k);
    const EigenSolution fine = solve_lowest(assemble_fiber(p, h, e, make_radial_grid(0.5 * dr, r_max)), k);
    std::vector<double> out(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) out[j] = (4.0 * fine.eigenvalues[j] - coarse.eigenvalues[j]) / 3.0;
    return out;
}

double harmonic_exact(double beta, double e0, int n)
{
    if (!(beta > 0.0)) throw std::invalid_argument("harmonic_exact: beta must be positive");
    return 2.0 * std::sqrt(beta) * (1.0 + e0 + 2.0 * n);
}

double harmonic_ground_state(double beta, double e0, double r)
{
    return std::sqrt(2.0) * std::pow(beta, (1.0 + e0) / 4.0) / std::sqrt(std::tgamma(e0 + 1.0)) *
           std::pow(r, e0) * std::exp(-std::sqrt(beta) * r * r / 2.0);
}

HarmonicSeries harmonic_series_mu(const RadialPotential& p, double e0)
{
    HarmonicSeries s;
    s.mu0 = p.v(0.0);
    s.mu1 = std::sqrt(2.0 * p.d2v0()) * (1.0 + e0);
    s.mu2 = (e0 + 1.0) * (e0 + 2.0) * p.v4_0 / (24.0 * p.beta);
    return s;
}

SingleWellSpectrum single_well_spectrum(const RadialPotential& p, const FluxParams& flux,
                                        const RadialGrid& grid, int m_window)
{
    if (m_window < 3) throw std::invalid_argument("single_well_spectrum: m_window must be at least 3");
    const int count = 2 * m_window + 1;
    std::vector<FiberLevel> fibers(static_cast<std::size_t>(count));

    std::vector<std::exception_ptr> errors(fibers.size());
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < count; ++j) {
        FiberLevel& f = fibers[static_cast<std::size_t>(j)];
        f.m = flux.m_star - m_window + j;
        f.e = std::abs(static_cast<double>(f.m) - flux.t);
        try {
            const EigenSolution s = solve_lowest(assemble_fiber(p, flux.h, f.e, grid), 2);
            f.lambda1 = s.eigenvalues[0];
            f.lambda2 = s.eigenvalues[1];
        } catch (...) {
            errors[static_cast<std::size_t>(j)] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    SingleWellSpectrum out;
    out.fibers = fibers;
    auto best = std::min_element(fibers.begin(), fibers.end(),
                                 [](const FiberLevel& a, const FiberLevel& b) { return a.lambda1 < b.lambda1; });
    out.ground = best->lambda1;
    out.m_ground = best->m;
    const double tol = 1e-9 * std::max(1.0, std::abs(out.ground));
    out.degeneracy = 0;
    double next = std::numeric_limits<double>::infinity();
    for (const FiberLevel& f : fibers) {
        if (std::abs(f.lambda1 - out.ground) <= tol) {
            ++out.degeneracy;
            next = std::min(next, f.lambda2);
        } else {
            next = std::min(next, f.lambda1);
        }
    }
    out.gap = next - out.ground;
    out.edge_warning = (best == fibers.begin() || best == fibers.end() - 1);
    return out;
}

double decay_check(const EigenSolution& sol, const WKBData& w, double delta, double r_lo, double r_hi)
{
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("decay_check: delta must be in (0, 1)");
    if (r_lo < 0.0) r_lo = w.potential().sigma;
    if (r_hi < 0.0) r_hi = sol.grid.r_max - 1.0;
    double sup = 0.0;
    const auto& psi = sol.vectors.at(0);
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        const double r = sol.grid.r[i];
        if (r < r_lo || r > r_hi) continue;
        sup = std::max(sup, std::exp((1.0 - delta) * w.d(r) / sol.h) * std::abs(psi[i]));
    }
    return sup;
}

}  // namespace abtunnel
