#pragma once

#include <vector>

#include "abtunnel/wells.hpp"

namespace abtunnel {

// Agmon distance d, transport phase p_{e0}, its primitive m and the leading
// WKB amplitude a0 = A0 exp(-m), all for one well and one exponent e0.
//
// Cumulative integrals are tabulated on a uniform knot set over the support
// and completed inside a knot panel by adaptive quadrature. Beyond sigma the
// potential vanishes and d, m have closed forms.
class WKBData {
public:
    WKBData(RadialPotential p, double e0);

    const RadialPotential& potential() const { return pot_; }
    double e0() const { return e0_; }
    double A0() const { return A0_; }
    double mu1() const { return mu1_; }
    double zeta0() const { return zeta0_; }
    double r_min() const { return r_min_; }

    double d(double r) const;
    double dprime(double r) const;
    double d2(double r) const;
    double d3(double r) const;
    double p(double r) const;
    double dp(double r) const;
    double m(double r) const;
    double a0(double r) const;
    double a0_prime(double r) const { return -p(r) * a0(r); }

    // p'(0) = lim p(r)/r, from v''(0) and v''''(0).
    double p_slope_at_zero() const { return p_slope0_; }

    // p and p' from the defining quotients with no small-r guard. Only
    // meaningful well above r_min().
    double p_quotient(double r) const;
    double dp_quotient(double r) const;

private:
    double panel_integral(double (WKBData::*f)(double) const, const std::vector<double>& table,
                          double r) const;

    RadialPotential pot_;
    double e0_;
    double v0_;
    double A0_;
    double mu1_;
    double zeta0_;
    double r_min_;
    double p_slope0_;
    double r_tab_;
    double knot_;
    std::vector<double> d_tab_, m_tab_;
};

// Adaptive quadrature of sqrt(v - v(0)) on [0, min(r, sigma)] plus the
// linear tail; throws std::domain_error if v < v(0) is met.
double agmon_distance(const RadialPotential& p, double r, double tol = 1e-12);

// S = 2 d(L/2).
double action_S(const WellPairConfig& cfg);

double phase_p(const WKBData& w, double r);

double amplitude_a0(const FluxParams& flux, const RadialPotential& p, double r);

// A0 = 2^{(1-e0)/4} v''(0)^{(1+e0)/4} / sqrt(Gamma(1+e0)).
double amplitude_constant(const RadialPotential& p, double e0);

struct Prefactor {
    double value = 0.0;
    double explicit_form = 0.0;  // from exp(-2 int_0^{L/2} p) directly
    double via_a0 = 0.0;         // from 4 (L/2)^{2e0+1/2} a0(L/2)^2
    double relative_gap = 0.0;
};

// Tunneling prefactor C(L, v, e0). Both closed forms are evaluated by
// separate code paths and must agree to 1e-10 relative; a mismatch throws
// std::logic_error. e0 may exceed 1/2 (formal use with 1 - e0).
Prefactor prefactor_C(const RadialPotential& p, double L, double e0);
Prefactor prefactor_C(const WellPairConfig& cfg, double e0);

}  // namespace abtunnel
