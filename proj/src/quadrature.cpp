#include "abtunnel/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_spline.h>

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

namespace abtunnel {

namespace {

// GSL aborts on error by default; we read status codes instead.
void silence_gsl()
{
    static std::once_flag flag;
    std::call_once(flag, [] { gsl_set_error_handler_off(); });
}

struct Trampoline {
    const std::function<double(double)>* f;
    static double call(double x, void* self) { return (*static_cast<Trampoline*>(self)->f)(x); }
};

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt)
{
    silence_gsl();
    QuadResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    Trampoline tr{&f};
    gsl_function gf{&Trampoline::call, &tr};
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(opt.max_intervals);
    const int status = gsl_integration_qag(&gf, a, b, opt.abs_tol, opt.rel_tol, opt.max_intervals,
                                           GSL_INTEG_GAUSS21, ws, &res.value, &res.error);
    gsl_integration_workspace_free(ws);
    res.converged = (status == GSL_SUCCESS);
    return res;
}

double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          const QuadOptions& opt)
{
    const QuadResult r = integrate(f, a, b, opt);
    if (!r.converged)
        throw std::runtime_error("quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                                 "] missed tolerance; error estimate " + std::to_string(r.error));
    return r.value;
}

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, double abs_tol,
                                       std::complex<double>* error)
{
    QuadOptions opt;
    opt.abs_tol = abs_tol;
    opt.rel_tol = 0.0;
    const QuadResult re = integrate([&](double x) { return f(x).real(); }, a, b, opt);
    const QuadResult im = integrate([&](double x) { return f(x).imag(); }, a, b, opt);
    if (error) *error = {re.error, im.error};
    if (!re.converged || !im.converged)
        throw std::runtime_error("complex quadrature missed absolute tolerance " +
                                 std::to_string(abs_tol));
    return {re.value, im.value};
}

GaussLegendre::GaussLegendre(int n)
{
    if (n < 1) throw std::invalid_argument("GaussLegendre: need at least one node");
    gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = 0.0, w = 0.0;
        gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &x, &w, t);
        x_.push_back(x);
        w_.push_back(w);
    }
    gsl_integration_glfixed_table_free(t);
}

struct CubicSpline::Impl {
    gsl_spline* spline = nullptr;
    ~Impl() { gsl_spline_free(spline); }
};

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)), impl_(std::make_unique<Impl>())
{
    silence_gsl();
    if (x_.size() != y_.size() || x_.size() < 3)
        throw std::invalid_argument("CubicSpline: need at least 3 matching samples");
    impl_->spline = gsl_spline_alloc(gsl_interp_cspline, x_.size());
    if (gsl_spline_init(impl_->spline, x_.data(), y_.data(), x_.size()) != GSL_SUCCESS)
        throw std::invalid_argument("CubicSpline: abscissae must be strictly increasing");
}

CubicSpline::~CubicSpline() = default;
CubicSpline::CubicSpline(CubicSpline&&) noexcept = default;
CubicSpline& CubicSpline::operator=(CubicSpline&&) noexcept = default;

// A null accelerator keeps evaluation thread safe.
double CubicSpline::operator()(double x) const
{
    double v = 0.0;
    gsl_spline_eval_e(impl_->spline, x, nullptr, &v);
    return v;
}

double CubicSpline::derivative(double x) const
{
    double v = 0.0;
    gsl_spline_eval_deriv_e(impl_->spline, x, nullptr, &v);
    return v;
}

}  // namespace abtunnel
