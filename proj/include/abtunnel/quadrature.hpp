#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

namespace abtunnel {

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_intervals = 4000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
};

// Adaptive Gauss–Kronrod (21 point rule, global subdivision). Returns the
// best estimate even when the tolerance is not met; converged says which.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt = {});

// Same, throwing std::runtime_error when the tolerance is not reached.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          const QuadOptions& opt = {});

// Real and imaginary parts integrated separately with a shared absolute
// tolerance (a relative one is meaningless for a vanishing part).
std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, double abs_tol,
                                       std::complex<double>* error = nullptr);

// Fixed n-point Gauss–Legendre rule, for short panels where the
// integrand is known to be smooth.
class GaussLegendre {
public:
    explicit GaussLegendre(int n = 10);

    template <class F>
    double operator()(F&& f, double a, double b) const
    {
        const double c = 0.5 * (a + b), s = 0.5 * (b - a);
        double acc = 0.0;
        for (std::size_t i = 0; i < x_.size(); ++i) acc += w_[i] * f(c + s * x_[i]);
        return s * acc;
    }

private:
    std::vector<double> x_, w_;
};

// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
public:
    CubicSpline(std::vector<double> x, std::vector<double> y);
    ~CubicSpline();
    CubicSpline(CubicSpline&&) noexcept;
    CubicSpline& operator=(CubicSpline&&) noexcept;
    CubicSpline(const CubicSpline&) = delete;
    CubicSpline& operator=(const CubicSpline&) = delete;

    double operator()(double x) const;
    double derivative(double x) const;
    double lo() const { return x_.front(); }
    double hi() const { return x_.back(); }

private:
    struct Impl;
    std::vector<double> x_, y_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace abtunnel
