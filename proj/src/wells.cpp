#include "abtunnel/wells.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace abtunnel {

RadialPotential make_bump_well(double k, double sigma)
{
    if (!(k < 0.0)) throw std::invalid_argument("bump well: depth k must be negative");
    if (!(sigma > 0.0)) throw std::invalid_argument("bump well: sigma must be positive");

    const double s2 = sigma * sigma;
    RadialPotential p;
    p.family = "bump";
    p.sigma = sigma;
    p.k = k;
    p.v = [k, s2](double r) {
        const double q = s2 - r * r;
        if (q <= 0.0) return 0.0;
        return k * std::exp(1.0 - s2 / q);
    };
    // v' = v E', v'' = v (E'^2 + E'') with E = 1 - s2/q, q = s2 - r^2.
    p.dv = [k, s2](double r) {
        const double q = s2 - r * r;
        if (q <= 0.0) return 0.0;
        const double v = k * std::exp(1.0 - s2 / q);
        return v * (-2.0 * s2 * r / (q * q));
    };
    p.d2v = [k, s2](double r) {
        const double q = s2 - r * r;
        if (q <= 0.0) return 0.0;
        const double v = k * std::exp(1.0 - s2 / q);
        const double e1 = -2.0 * s2 * r / (q * q);
        const double e2 = -2.0 * s2 / (q * q) - 8.0 * s2 * r * r / (q * q * q);
        return v * (e1 * e1 + e2);
    };
    // v = k (1 - r^2/s2 - r^4/(2 s2^2) + ...)
    p.beta = -k / s2;
    p.v4_0 = -12.0 * k / (s2 * s2);
    return p;
}

RadialPotential make_quadratic_well(double k, double beta)
{
    if (!(beta > 0.0)) throw std::invalid_argument("quadratic well: beta must be positive");
    if (k > 0.0) throw std::invalid_argument("quadratic well: k must be non-positive");
    RadialPotential p;
    p.family = "harmonic";
    p.sigma = std::numeric_limits<double>::infinity();
    p.k = k;
    p.beta = beta;
    p.v4_0 = 0.0;
    p.v = [k, beta](double r) { return k + beta * r * r; };
    p.dv = [beta](double r) { return 2.0 * beta * r; };
    p.d2v = [beta](double) { return 2.0 * beta; };
    return p;
}

double estimate_v2_at_zero(const RealFn& v, double step)
{
    auto d2 = [&](double s) { return (v(s) - 2.0 * v(0.0) + v(-s)) / (s * s); };
    return (4.0 * d2(0.5 * step) - d2(step)) / 3.0;
}

double estimate_v4_at_zero(const RealFn& v, double step)
{
    auto d4 = [&](double s) {
        return (v(2 * s) - 4.0 * v(s) + 6.0 * v(0.0) - 4.0 * v(-s) + v(-2 * s)) / (s * s * s * s);
    };
    return (4.0 * d4(0.5 * step) - d4(step)) / 3.0;
}

double flux_residue(double t)
{
    const double f = t - std::floor(t);
    return std::min(f, 1.0 - f);
}

FluxParams flux_params(double alpha, double h)
{
    if (!(alpha > 0.0)) throw std::invalid_argument("flux_params: alpha must be positive");
    if (!(h > 0.0)) throw std::invalid_argument("flux_params: h must be positive");

    FluxParams f;
    f.alpha = alpha;
    f.h = h;
    f.t = alpha / h;
    const double fl = std::floor(f.t);
    const double frac = f.t - fl;
    if (std::abs(frac - 0.5) < 1e-12) {
        f.half_integer = true;
        f.m_star = static_cast<long>(fl);
        f.e0 = 0.5;
        f.gamma0 = -0.5;
        return f;
    }
    f.m_star = static_cast<long>(frac < 0.5 ? fl : fl + 1.0);
    f.gamma0 = static_cast<double>(f.m_star) - f.t;
    f.e0 = std::abs(f.gamma0);
    return f;
}

WellPairConfig make_well_pair(RadialPotential p, double L, FluxParams flux)
{
    if (!(L > 2.0 * p.sigma))
        throw std::invalid_argument("well pair: separation L must exceed 2 sigma");
    return WellPairConfig{std::move(p), L, flux};
}

bool WellReport::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](const WellCheck& c) { return c.passed; });
}

std::string WellReport::summary() const
{
    std::ostringstream os;
    for (const auto& c : checks)
        os << (c.passed ? "ok   " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": ") << c.detail
           << '\n';
    return os.str();
}

WellReport validate_well(const RadialPotential& p, int grid_n)
{
    if (grid_n < 100) throw std::invalid_argument("validate_well: grid_n must be at least 100");

    WellReport rep;
    auto add = [&rep](std::string name, bool ok, std::string detail = {}) {
        rep.checks.push_back({std::move(name), ok, std::move(detail)});
    };

    if (!p.v || !p.dv || !p.d2v) {
        add("callables", false, "v, dv and d2v must all be set");
        return rep;
    }
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) {
        add("support", false, "sigma must be positive and finite");
        return rep;
    }

    const double sigma = p.sigma;
    const double v0 = p.v(0.0);
    rep.measured_d2v0 = estimate_v2_at_zero(p.v);
    rep.measured_v4_0 = estimate_v4_at_zero(p.v, 0.02 * sigma);

    // Compact support: v vanishes on [sigma, 3 sigma] and the last interior
    // samples are not all zero (a sigma larger than the real support is fine,
    // a smaller one is not).
    {
        double worst = 0.0;
        for (int i = 0; i <= grid_n; ++i) {
            const double r = sigma * (1.0 + 2.0 * i / grid_n);
            worst = std::max(worst, std::abs(p.v(r)));
        }
        std::ostringstream os;
        os << "max |v| on [sigma, 3 sigma] = " << worst;
        add("support", worst == 0.0, os.str());
    }

    {
        std::ostringstream os;
        os << "v(0) = " << v0 << ", k = " << p.k;
        add("negative minimum", v0 < 0.0 && std::abs(v0 - p.k) <= 1e-12 * std::max(1.0, std::abs(v0)),
            os.str());
    }

    {
        bool unique = true;
        double where = 0.0;
        for (int i = 1; i <= grid_n; ++i) {
            const double r = sigma * i / grid_n;
            if (!(p.v(r) > v0)) {
                unique = false;
                where = r;
                break;
            }
        }
        std::ostringstream os;
        if (!unique) os << "v(" << where << ") <= v(0)";
        add("unique minimum at 0", unique, os.str());
    }

    {
        const double d2 = p.d2v(0.0);
        const double d1 = p.dv(0.0);
        std::ostringstream os;
        os << "v''(0) = " << d2 << ", v'(0) = " << d1;
        add("non-degenerate minimum", d2 > 0.0 && std::abs(d1) <= 1e-10, os.str());
        std::ostringstream os2;
        os2 << "declared " << p.d2v0() << ", measured " << rep.measured_d2v0;
        add("beta consistent", std::abs(p.d2v0() - d2) <= 1e-6 * std::max(1.0, std::abs(d2)) &&
                                   std::abs(rep.measured_d2v0 - d2) <= 1e-5 * std::max(1.0, std::abs(d2)),
            os2.str());
    }

    // Derivatives against central differences. Near the edge of the support
    // the values themselves are tiny, so errors are measured against the
    // largest derivative magnitude seen on the grid.
    {
        const int n = std::min(grid_n, 400);
        double scale1 = 0.0, scale2 = 0.0, err1 = 0.0, err2 = 0.0;
        std::vector<double> rs;
        for (int i = 1; i < n; ++i) rs.push_back(0.98 * sigma * i / n);
        for (double r : rs) {
            scale1 = std::max(scale1, std::abs(p.dv(r)));
            scale2 = std::max(scale2, std::abs(p.d2v(r)));
        }
        for (double r : rs) {
            // Five point stencil: the bump varies on scale q^2 near the edge,
            // too fast for a plain central difference at this step.
            const double s = 1e-5 * sigma;
            auto fd = [s, r](const RealFn& f) {
                return (f(r - 2 * s) - 8.0 * f(r - s) + 8.0 * f(r + s) - f(r + 2 * s)) / (12.0 * s);
            };
            const double fd1 = fd(p.v);
            const double fd2 = fd(p.dv);
            err1 = std::max(err1, std::abs(fd1 - p.dv(r)) / (std::abs(p.dv(r)) + 1e-3 * scale1));
            err2 = std::max(err2, std::abs(fd2 - p.d2v(r)) / (std::abs(p.d2v(r)) + 1e-3 * scale2));
        }
        std::ostringstream os;
        os << "relative mismatch dv " << err1 << ", d2v " << err2;
        add("derivatives", err1 <= 1e-6 && err2 <= 1e-6, os.str());
    }

    return rep;
}

}  // namespace abtunnel
