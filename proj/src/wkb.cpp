#include "abtunnel/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "abtunnel/quadrature.hpp"

namespace abtunnel {

namespace {

double length_scale(const RadialPotential& p)
{
    return std::isfinite(p.sigma) ? p.sigma : 1.0 / std::sqrt(std::sqrt(p.beta));
}

double default_end(const RadialPotential& p)
{
    return std::isfinite(p.sigma) ? 3.0 * p.sigma + 2.0 : 12.0 * length_scale(p);
}

// Tables of m(r_j) = int_0^{r_j} p and I(r_j) = int_0^{r_j} q e^m on uniform
// knots; in-panel values by a fixed Gauss–Legendre rule, nested for e^m.
class RegularTransport {
public:
    RegularTransport(const WKBData& w, std::function<double(double)> g, double C, double r_end)
        : w_(w), g_(std::move(g)), C_(C), r_end_(r_end), knot_(r_end / kPanels)
    {
        m_.assign(kPanels + 1, 0.0);
        I_.assign(kPanels + 1, 0.0);
        for (int j = 0; j < kPanels; ++j) {
            const double a = j * knot_, b = a + knot_;
            m_[j + 1] = m_[j] + gl_([this](double r) { return w_.p(r); }, a, b);
            I_[j + 1] = I_[j] + panel_source(j, b);
        }
    }

    double operator()(double r) const
    {
        if (r < 0.0) throw std::invalid_argument("transport solution: r must be non-negative");
        if (r > r_end_) {
            // Continue with adaptive quadrature past the table.
            const double mr = m_.back() + integrate([this](double x) { return w_.p(x); }, r_end_, r).value;
            const double ir = I_.back() + integrate([this](double x) {
                                              const double mx = m_.back() +
                                                  integrate([this](double y) { return w_.p(y); }, r_end_, x).value;
                                              return q(x) * std::exp(mx);
                                          }, r_end_, r).value;
            return (C_ + ir) * std::exp(-mr);
        }
        const int j = std::min(static_cast<int>(r / knot_), kPanels - 1);
        const double mr = m_[j] + gl_([this](double x) { return w_.p(x); }, j * knot_, r);
        return (C_ + I_[j] + panel_source(j, r)) * std::exp(-mr);
    }

private:
    static constexpr int kPanels = 1000;

    double q(double r) const { return g_(r) / (2.0 * w_.dprime(r)); }

    double panel_source(int j, double r) const
    {
        const double a = j * knot_;
        if (r <= a) return 0.0;  // q is 0/0 at the origin
        return gl_(
            [&](double x) {
                const double mx = m_[j] + gl_([this](double y) { return w_.p(y); }, a, x);
                return q(x) * std::exp(mx);
            },
            a, r);
    }

    const WKBData& w_;
    std::function<double(double)> g_;
    double C_, r_end_, knot_;
    GaussLegendre gl_{10};
    std::vector<double> m_, I_;
};

}  // namespace

FuchsSolution fuchs_solve(const WKBData& w, std::function<double(double)> g, double C, FuchsCase c, double R0,
                          double r_end)
{
    const RadialPotential& pot = w.potential();
    FuchsSolution out;
    switch (c) {
    case FuchsCase::regular: {
        const double g0 = g(1e-9 * length_scale(pot));
        if (std::abs(g0) > 1e-6 * std::max(1.0, std::abs(C)))
            throw std::invalid_argument("fuchs_solve: regular case needs g(0) = 0, got " + std::to_string(g0));
        if (r_end <= 0.0) r_end = default_end(pot);
        // The table keeps a reference to w: copy it into shared state.
        auto wcopy = std::make_shared<WKBData>(w);
        auto solver = std::make_shared<RegularTransport>(*wcopy, std::move(g), C, r_end);
        out.a_hat = [wcopy, solver](double r) { return (*solver)(r); };
        out.regular_at_zero = true;
        out.boundary_value = C;
        break;
    }
    case FuchsCase::singular: {
        auto wcopy = std::make_shared<WKBData>(w);
        out.a_hat = [wcopy, g = std::move(g)](double r) {
            if (!(r > 0.0)) throw std::invalid_argument("singular transport solution: r must be positive");
            QuadOptions opt;
            opt.abs_tol = 1e-13;
            opt.rel_tol = 1e-12;
            const double s = integrate(
                                 [&](double x) { return g(x) / (2.0 * wcopy->dprime(x)) * std::exp(wcopy->m(x)); },
                                 r, 1.0, opt)
                                 .value;
            return -s * std::exp(-wcopy->m(r));
        };
        out.regular_at_zero = false;
        break;
    }
    case FuchsCase::tail: {
        if (!std::isfinite(pot.sigma) || R0 < pot.sigma)
            throw std::invalid_argument("fuchs_solve: tail case needs R0 >= sigma");
        const double e0 = w.e0(), z = w.zeta0();
        const double root = std::sqrt(std::abs(pot.k));
        out.a_hat = [=, g = std::move(g)](double r) {
            if (r < R0) throw std::invalid_argument("tail transport solution: r must be >= R0");
            const double hom = std::pow(R0 / r, e0 + 0.5) * std::exp(z * (r - R0)) * C;
            QuadOptions opt;
            opt.abs_tol = 1e-14;
            opt.rel_tol = 1e-12;
            const double src = integrate([&](double x) { return g(x) * std::pow(x, e0 + 0.5) * std::exp(-z * x); },
                                         R0, r, opt)
                                   .value;
            return hom + std::pow(r, -e0 - 0.5) * std::exp(z * r) / (2.0 * root) * src;
        };
        out.regular_at_zero = false;
        out.boundary_value = C;
        break;
    }
    }
    return out;
}

double fuchs_residual(const WKBData& w, const FuchsSolution& a, const std::function<double(double)>& g,
                      double r)
{
    // Fourth order central difference; the bump's high derivatives near the
    // edge of its support make a two point formula visibly inaccurate.
    const double s = 2e-4 * std::min(r, 1.0);
    const double ap = (8.0 * (a.a_hat(r + s) - a.a_hat(r - s)) - (a.a_hat(r + 2 * s) - a.a_hat(r - 2 * s))) /
                      (12.0 * s);
    const double d1 = w.dprime(r);
    const double lhs = 2.0 * d1 * ap + ((1.0 + 2.0 * w.e0()) * d1 / r + w.d2(r)) * a.a_hat(r) - w.mu1() * a.a_hat(r);
    return std::abs(lhs - g(r));
}

A1Correction a1_correction(const WKBData& w, double r_end)
{
    const RadialPotential& pot = w.potential();
    const double e0 = w.e0();
    A1Correction out;
    out.mu2 = harmonic_series_mu(pot, e0).mu2;

    // (L2 a0)/a0 = -p^2 + p' + (1 + 2 e0) p / r, even in r; extrapolate in r^2
    // from exact quotients well above the Taylor threshold.
    auto ratio = [&](double r) {
        const double p = w.p_quotient(r);
        return -p * p + w.dp_quotient(r) + (1.0 + 2.0 * e0) * p / r;
    };
    const double r1 = 0.1 * length_scale(pot);
    double f[4];
    for (int i = 0; i < 4; ++i) f[i] = ratio(r1 / std::pow(2.0, i));
    for (int level = 1; level < 4; ++level) {
        const double factor = std::pow(4.0, level);
        for (int i = 0; i + level < 4; ++i) f[i] = (factor * f[i + 1] - f[i]) / (factor - 1.0);
    }
    out.mu2_hat = f[0];
    if (std::abs(out.mu2_hat - out.mu2) > 1e-4 * std::abs(out.mu2) + 1e-10)
        throw std::logic_error("a1_correction: mu2_hat = " + std::to_string(out.mu2_hat) +
                               " disagrees with mu2 = " + std::to_string(out.mu2));

    auto wcopy = std::make_shared<WKBData>(w);
    const double mu2_hat = out.mu2_hat;
    out.g1 = [wcopy, mu2_hat](double r) {
        const double p = wcopy->p(r);
        const double pr = r < wcopy->r_min() ? wcopy->p_slope_at_zero() : p / r;
        return (p * p - wcopy->dp(r) - (1.0 + 2.0 * wcopy->e0()) * pr + mu2_hat) * wcopy->a0(r);
    };
    out.a1 = fuchs_solve(w, out.g1, 0.0, FuchsCase::regular, 0.0, r_end);
    return out;
}

WkbExpansion::WkbExpansion(WKBData w, double r_end) : w_(std::move(w)), a1_(a1_correction(w_, r_end)) {}

double WkbExpansion::scaled_quasimode(int N, double h, double r) const
{
    if (N < 0 || N > 1) throw std::invalid_argument("quasimode: N must be 0 or 1");
    double amp = w_.a0(r);
    if (N == 1) amp += h * a1_.a1.a_hat(r);
    return std::pow(h, -(1.0 + w_.e0()) / 2.0) * std::pow(r, w_.e0()) * amp;
}

double WkbExpansion::quasimode(int N, double h, double r) const
{
    return scaled_quasimode(N, h, r) * std::exp(-w_.d(r) / h);
}

double WkbExpansion::norm(int N, double h) const
{
    const RadialPotential& pot = w_.potential();
    // Integrate until psi^2 has dropped by e^{-60} relative to the centre.
    double cut;
    if (std::isfinite(pot.sigma)) {
        const double target = 30.0 * h;
        const double ds = w_.d(pot.sigma);
        cut = target <= ds ? pot.sigma : pot.sigma + (target - ds) / std::sqrt(std::abs(pot.k));
    } else {
        cut = std::sqrt(60.0 * h / std::sqrt(pot.beta));
    }
    auto f = [&](double r) {
        const double u = quasimode(N, h, r);
        return u * u * r;
    };
    QuadOptions opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-10;
    double s = 0.0;
    const double mid = std::min(cut, std::isfinite(pot.sigma) ? pot.sigma : cut);
    const double scale = std::sqrt(h);  // width of the bulk of the mass
    std::vector<double> breaks{0.0};
    for (double b = 4.0 * scale; b < mid; b += 4.0 * scale) breaks.push_back(b);
    breaks.push_back(mid);
    if (cut > mid) breaks.push_back(cut);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) s += integrate(f, breaks[i], breaks[i + 1], opt).value;
    return std::sqrt(s);
}

double wkb_quasimode(const WkbExpansion& x, int N, double h, double r) { return x.quasimode(N, h, r); }

double wkb_residual(const WkbExpansion& x, int N, double h, double r_a, double r_b)
{
    if (!(r_a > 0.0 && r_b > r_a)) throw std::invalid_argument("wkb_residual: need 0 < r_a < r_b");
    const WKBData& w = x.data();
    const HarmonicSeries mu = harmonic_series_mu(w.potential(), w.e0());
    double E = mu.mu0 + mu.mu1 * h;
    if (N >= 1) E += x.correction().mu2_hat * h * h;

    // Stencil truncation ~ dr^2 d'^4 / h^{4+N} relative to the residual.
    const double dr = std::min(1e-3, 0.3 * std::pow(h, 2.0 + 0.5 * N));
    const long i0 = std::max(2L, std::lround(r_a / dr + 0.5));
    const long i1 = std::lround(r_b / dr + 0.5);
    const std::size_t n = static_cast<std::size_t>(i1 - i0 + 1);

    std::vector<double> psi(n + 2), dd(n + 2);
    for (std::size_t k = 0; k < n + 2; ++k) {
        const double r = (static_cast<double>(i0 - 1 + static_cast<long>(k)) - 0.5) * dr;
        dd[k] = w.d(r);
        psi[k] = x.scaled_quasimode(N, h, r) * std::exp(-dd[k] / h);
    }
    const std::vector<double> Tpsi = apply_fiber_stencil(w.potential(), h, w.e0(), dr, i0, psi);
    double sup = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        sup = std::max(sup, std::exp(dd[k + 1] / h) * std::abs(Tpsi[k] - E * psi[k + 1]));
    return sup;
}

GroundStateDiscrepancy compare_gs_wkb(const EigenSolution& sol, const WKBData& w, double h, double r_a,
                                      double r_b)
{
    if (std::abs(sol.h - h) > 1e-14 * h || std::abs(sol.e - w.e0()) > 1e-12)
        throw std::invalid_argument("compare_gs_wkb: solution and WKB data disagree on (h, e0)");
    const RadialState st = sol.state(0);
    const double e0 = w.e0();
    GroundStateDiscrepancy out;
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        const double r = sol.grid.r[i];
        if (r < r_a || r > r_b) continue;
        const double ed = std::exp(w.d(r) / h);
        const double model = std::pow(h, -(1.0 + e0) / 2.0) * std::pow(r, e0) * w.a0(r);
        out.value = std::max(out.value, std::abs(ed * sol.vectors[0][i] - model));
        const double dmodel = std::pow(h, -(3.0 + e0) / 2.0) * w.dprime(r) * std::pow(r, e0) * w.a0(r);
        out.derivative = std::max(out.derivative, std::abs(ed * st.dpsi(r) + dmodel));
    }
    return out;
}

}  // namespace abtunnel
