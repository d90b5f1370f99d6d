#include "abtunnel/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "abtunnel/quadrature.hpp"

namespace abtunnel {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

double rho_of(const WellPairConfig& cfg, double x2)
{
    return std::hypot(x2, 0.5 * cfg.L);
}

// Breakpoints for integrands concentrated near x2 = 0 with width ~ sqrt(h).
std::vector<double> breaks(double X, double h)
{
    std::vector<double> b{0.0};
    double c = 2.0 * std::sqrt(h);
    while (c < X) {
        b.push_back(c);
        c *= 2.0;
    }
    b.push_back(X);
    return b;
}

// int_0^X f on the break set. The absolute tolerance is tied to the
// integrand scale so that a part that vanishes by parity is still resolved;
// a panel that stalls on roundoff is accepted if its error estimate is
// below 1e-11 of the scale.
cplx half_line(const std::function<cplx(double)>& f, double X, double h, double scale)
{
    const auto b = breaks(X, h);
    const double s = std::max(scale, 1e-300);
    const QuadOptions opt{1e-14 * s, 1e-12, 4000};
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        for (int part = 0; part < 2; ++part) {
            const QuadResult q = integrate([&](double x) { return part == 0 ? f(x).real() : f(x).imag(); },
                                           b[i], b[i + 1], opt);
            if (!q.converged && q.error > 1e-11 * s)
                throw std::runtime_error("interaction quadrature: error estimate " + std::to_string(q.error) +
                                         " against scale " + std::to_string(s));
            (part == 0 ? re : im) += q.value;
        }
    }
    return {re, im};
}

double scale_at_midpoint(const RadialState& psi, const WellPairConfig& cfg)
{
    const double r = 0.5 * cfg.L;
    const double a = std::abs(psi.psi(r));
    return a * (a + std::abs(psi.dpsi(r))) * (1.0 + std::abs(cfg.flux.gamma0));
}

}  // namespace

FGSample integrand_FG(const RadialState& psi, const WellPairConfig& cfg, double x2)
{
    FGSample s;
    const double rho = rho_of(cfg, x2);
    const double g0 = cfg.flux.gamma0;
    s.w = std::exp(2.0 * I * g0 * std::atan(2.0 * x2 / cfg.L));
    if (rho >= psi.r_max()) {
        s.truncated = true;
        return s;
    }
    const double u = psi.psi(rho);
    s.F = cfg.L * u * psi.dpsi(rho) / rho;
    s.G = 2.0 * g0 * x2 * u * u / (rho * rho);
    return s;
}

FGSample integrand_FG(const EigenSolution& sol, const WellPairConfig& cfg, double x2)
{
    return integrand_FG(sol.state(0), cfg, x2);
}

double x2_window(const RadialState& psi, const WellPairConfig& cfg)
{
    const double R = psi.r_max(), l = 0.5 * cfg.L;
    if (R <= l) throw std::invalid_argument("radial window does not reach the midline");
    return std::sqrt(R * R - l * l);
}

cplx j1_numeric(const RadialState& psi, const WellPairConfig& cfg)
{
    const double h = cfg.flux.h;
    const double X = x2_window(psi, cfg);
    const double sc = scale_at_midpoint(psi, cfg);
    auto f = [&](double x2) {
        const FGSample s = integrand_FG(psi, cfg, x2);
        return s.w * (s.F - I * s.G);
    };
    const cplx pos = half_line(f, X, h, sc);
    const cplx neg = half_line([&](double y) { return f(-y); }, X, h, sc);
    return h * h / pi * std::exp(-2.0 * I * pi * cfg.flux.gamma0) * (pos + neg);
}

cplx j1_numeric(const EigenSolution& sol, const WellPairConfig& cfg)
{
    return j1_numeric(sol.state(0), cfg);
}

double log_j1_asymptotic(const WellPairConfig& cfg, double h)
{
    const double e0 = cfg.flux.e0;
    const double C = prefactor_C(cfg, e0).value;
    return std::log(0.5 * C) + (0.5 - e0) * std::log(h) - action_S(cfg) / h;
}

double j1_asymptotic(const WellPairConfig& cfg, double h)
{
    return std::exp(log_j1_asymptotic(cfg, h));
}

JHat1 jhat1_numeric(const RadialState& psi, const WellPairConfig& cfg)
{
    const double h = cfg.flux.h;
    const double X = x2_window(psi, cfg);
    const double sc = scale_at_midpoint(psi, cfg);
    const double c = 2.0 * h * h / pi;
    JHat1 out;
    out.f_term = c * half_line([&](double x2) { return cplx(integrand_FG(psi, cfg, x2).F); }, X, h, sc);
    out.g_term = c * half_line(
                         [&](double x2) {
                             return integrand_FG(psi, cfg, x2).G *
                                    std::exp(I * std::atan(2.0 * x2 / cfg.L));
                         },
                         X, h, sc);
    out.value = out.f_term + out.g_term;
    return out;
}

JHat0 jhat0_numeric(const RadialState& psi, const WellPairConfig& cfg)
{
    const double h = cfg.flux.h;
    const double X = x2_window(psi, cfg);
    const double sc = scale_at_midpoint(psi, cfg);
    const double l = 0.5 * cfg.L;
    const double c = h * h / pi;
    auto g = [&](double x2) {
        return integrand_FG(psi, cfg, x2).G * std::exp(I * std::atan(2.0 * x2 / cfg.L));
    };
    auto k = [&](double x2) {
        const double rho = rho_of(cfg, x2);
        if (rho >= psi.r_max()) return cplx(0.0);
        const double u = psi.psi(rho);
        return cplx(-x2 / (x2 * x2 + l * l) * u * u);
    };
    auto both = [&](const std::function<cplx(double)>& f) {
        return half_line(f, X, h, sc) + half_line([&](double y) { return f(-y); }, X, h, sc);
    };
    JHat0 out;
    out.first = -I * c * both(g);
    out.second = -I * c * both(k);
    out.value = out.first + out.second;
    return out;
}

cplx j0_numeric(const RadialState& psi, const WellPairConfig& cfg)
{
    const double h = cfg.flux.h;
    const double X = x2_window(psi, cfg);
    const double sc = scale_at_midpoint(psi, cfg);
    auto g = [&](double x2) { return cplx(integrand_FG(psi, cfg, x2).G); };
    const cplx pos = half_line(g, X, h, sc);
    const cplx neg = half_line([&](double y) { return g(-y); }, X, h, sc);
    return -I * h * h / pi * (pos + neg);
}

Splitting2 splitting_2x2(const InteractionCoeffs& c)
{
    Splitting2 s;
    s.U << c.J0, c.J1, std::conj(c.J1), c.J0;
    const Eigen::Matrix2cd H = 0.5 * (s.U + s.U.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(H, Eigen::EigenvaluesOnly);
    s.eigenvalues = {es.eigenvalues()(0), es.eigenvalues()(1)};
    s.gap = s.eigenvalues[1] - s.eigenvalues[0];
    return s;
}

Splitting4 matrix_4x4(const InteractionCoeffs& c)
{
    Splitting4 s;
    const cplx J0 = c.J0, J1 = c.J1, K0 = c.Jhat0, K1 = c.Jhat1;
    s.U << J0, J1, std::conj(K0), K1,
           std::conj(J1), J0, std::conj(K1), K0,
           K0, K1, J0, std::conj(J1),
           std::conj(K1), std::conj(K0), J1, J0;
    s.hermiticity_defect = (s.U - s.U.adjoint()).norm();
    const Eigen::Matrix4cd H = 0.5 * (s.U + s.U.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(H);
    for (int i = 0; i < 4; ++i) s.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    s.eigenvectors = es.eigenvectors();
    return s;
}

IdealU idealized_U()
{
    InteractionCoeffs c;
    c.J1 = 1.0;
    c.Jhat1 = -1.0;
    IdealU u;
    u.U = matrix_4x4(c).U;
    u.eigenvalues = {-2.0, 0.0, 0.0, 2.0};
    u.eigenvectors[0] << -0.5, 0.5, 0.5, -0.5;
    u.eigenvectors[1] << 0.5, -0.5, 0.5, -0.5;
    u.eigenvectors[2] << 0.5, 0.5, 0.5, 0.5;
    u.eigenvectors[3] << 0.5, 0.5, -0.5, -0.5;
    return u;
}

SplittingPrediction predict_splitting(const WellPairConfig& cfg, const PipelineOptions& opt)
{
    const double h = cfg.flux.h, e0 = cfg.flux.e0;
    const RadialPotential& p = cfg.potential;
    const double dr = opt.dr > 0.0 ? opt.dr : std::min(0.002, h / 50.0);
    const double r_max = opt.r_max > 0.0 ? opt.r_max : default_r_max(p, cfg.L);

    const FiberOperator op = assemble_fiber(p, h, e0, make_radial_grid(dr, r_max));
    const EigenSolution sol = solve_lowest(op, 1);
    const RadialState psi = sol.state(0);

    SplittingPrediction out;
    out.h = h;
    out.e0 = e0;
    out.S = action_S(cfg);
    out.C = prefactor_C(cfg, e0).value;
    out.lambda_sw = sol.eigenvalues.front();
    out.coeffs.h = h;
    out.coeffs.e0 = e0;
    out.coeffs.gamma0 = cfg.flux.gamma0;
    out.coeffs.J1 = j1_numeric(psi, cfg);
    out.coeffs.J0 = j0_numeric(psi, cfg);

    const double log_asym = std::log(out.C) + (0.5 - e0) * std::log(h) - out.S / h;
    out.asymptotic = std::exp(log_asym);
    out.numeric_2J1 = 2.0 * std::abs(out.coeffs.J1);
    out.ratio = std::exp(std::log(out.numeric_2J1) - log_asym);

    if (cfg.flux.half_integer) {
        out.coeffs.Jhat1 = jhat1_numeric(psi, cfg).value;
        out.coeffs.Jhat0 = jhat0_numeric(psi, cfg).value;
        const Splitting4 s4 = matrix_4x4(out.coeffs);
        out.gaps_half = std::array<double, 3>{s4.eigenvalues[1] - s4.eigenvalues[0],
                                              s4.eigenvalues[2] - s4.eigenvalues[1],
                                              s4.eigenvalues[3] - s4.eigenvalues[2]};
    }
    return out;
}

double lambda43_asymptotic(const WellPairConfig& cfg, double h)
{
    const double e0 = cfg.flux.e0;
    if (e0 <= 0.0) throw std::invalid_argument("lambda43_asymptotic: needs e0 > 0");
    const double C = prefactor_C(cfg, 1.0 - e0).value;
    return std::exp(std::log(C) + (e0 - 0.5) * std::log(h) - action_S(cfg) / h);
}

namespace {

double bump_step(double x)
{
    return x > 0.0 ? std::exp(-1.0 / x) : 0.0;
}

// 1 below a - eps, 0 from a on, smooth in between.
double cutoff(double t, double a, double eps)
{
    if (t <= a - eps) return 1.0;
    if (t >= a) return 0.0;
    const double s = (t - (a - eps)) / eps;
    const double f0 = bump_step(1.0 - s), f1 = bump_step(s);
    return f0 / (f0 + f1);
}

double angle(double x, double y)
{
    double t = std::atan2(y, x);
    if (t < 0.0) t += 2.0 * pi;
    return t;
}

}  // namespace

QuasimodeOverlap quasimode_overlap(const RadialState& psi, const WellPairConfig& cfg, double eps,
                                   bool swap)
{
    const RadialPotential& p = cfg.potential;
    const double L = cfg.L, l = 0.5 * L, sigma = p.sigma;
    const double h = cfg.flux.h, e0 = cfg.flux.e0;
    const double a = l - sigma;
    if (!(a > 0.0)) throw std::invalid_argument("quasimode_overlap: wells overlap");

    const WKBData w(p, e0);
    const double dm = w.d(l);
    if (eps <= 0.0) eps = 0.25 * sigma;
    int halvings = 0;
    while (!(dm < std::min(2.0 * dm, w.d(L - sigma - eps)))) {
        eps *= 0.5;
        if (++halvings > 60) throw std::runtime_error("quasimode_overlap: no admissible eps");
    }

    QuasimodeOverlap out;
    out.eps = eps;
    out.S_eps = 0.5 * (dm + std::min(2.0 * dm, w.d(L - sigma - eps)));

    const double R = psi.r_max();
    const double t = cfg.flux.t;
    const double m = static_cast<double>(cfg.flux.m_star);
    const double norm = 1.0 / (2.0 * pi);

    // u_l without the (2 pi)^{-1/2}; the product of two carries norm.
    auto u_left = [&](double x1, double x2) -> cplx {
        const double r = std::hypot(x1 + l, x2);
        if (r >= R) return 0.0;
        const double ph = m * angle(x1 + l, x2) + t * angle(x1 - l, x2);
        return cutoff(x1, a, eps) * psi.psi(r) * std::exp(I * ph);
    };
    auto u_right = [&](double x1, double x2) { return std::conj(u_left(-x1, x2)); };

    auto integrand = [&](double x1, double x2) {
        return swap ? u_right(x1, x2) * std::conj(u_left(x1, x2))
                    : u_left(x1, x2) * std::conj(u_right(x1, x2));
    };

    const double peak = std::pow(psi.psi(l), 2) * norm;
    const double tol = 1e-10 * std::max(peak, 1e-300);
    QuadOptions inner_opt{tol, 1e-9, 2000};
    QuadOptions outer_opt{tol * 2.0 * a, 1e-8, 2000};

    auto inner = [&](double x1, bool imag) {
        const double Y2 = R * R - std::pow(l + std::abs(x1), 2);
        if (Y2 <= 0.0) return 0.0;
        const double Y = std::sqrt(Y2);
        double acc = 0.0;
        const double c = std::min(Y, 4.0 * std::sqrt(h));
        auto f = [&](double x2) {
            const cplx v = integrand(x1, x2);
            return imag ? v.imag() : v.real();
        };
        acc += integrate(f, -c, c, inner_opt).value;
        if (Y > c) {
            acc += integrate(f, c, Y, inner_opt).value;
            acc += integrate(f, -Y, -c, inner_opt).value;
        }
        return acc;
    };
    const double re = integrate([&](double x1) { return inner(x1, false); }, -a, a, outer_opt).value;
    const double im = integrate([&](double x1) { return inner(x1, true); }, -a, a, outer_opt).value;
    out.overlap = norm * cplx(re, im);

    const double mag = std::abs(out.overlap);
    out.bound_ratio = mag > 0.0 ? std::exp(std::log(mag) + (1.0 + e0) * std::log(h) + 2.0 * dm / h) : 0.0;

    // ||u_l||^2 = 1 - int (1 - chi^2) |phi_l|^2, the lost mass sitting in
    // x1 > a - eps.
    const double x1_hi = R - l;
    const double peak_d = std::pow(psi.psi(std::max(a - eps + l, 0.0)), 2) * norm;
    QuadOptions d_opt{1e-12 * std::max(peak_d, 1e-300), 1e-9, 2000};
    auto lost = [&](double x1) {
        const double chi = cutoff(x1, a, eps);
        const double Y2 = R * R - std::pow(x1 + l, 2);
        if (Y2 <= 0.0 || chi >= 1.0) return 0.0;
        const double Y = std::sqrt(Y2);
        const double col = integrate(
                               [&](double x2) {
                                   const double u = psi.psi(std::hypot(x1 + l, x2));
                                   return u * u;
                               },
                               0.0, Y, d_opt)
                               .value;
        return (1.0 - chi * chi) * 2.0 * col;
    };
    double deficit = integrate(lost, a - eps, a, d_opt).value;
    if (x1_hi > a) deficit += integrate(lost, a, x1_hi, d_opt).value;
    out.norm_deficit = norm * deficit;
    out.norm_sq = 1.0 - out.norm_deficit;
    return out;
}

}  // namespace abtunnel
