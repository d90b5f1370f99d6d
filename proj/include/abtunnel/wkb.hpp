#pragma once

#include <functional>
#include <memory>

#include "abtunnel/agmon.hpp"
#include "abtunnel/fiber1d.hpp"

namespace abtunnel {

// Solution of the first order transport equation
//   2 d' a' + ((1 + 2 e0) d'/r + d'') a - mu1 a = g.
struct FuchsSolution {
    std::function<double(double)> a_hat;
    bool regular_at_zero = false;
    double boundary_value = 0.0;  // a(0) when regular, a(R0) for the tail form
};

enum class FuchsCase { regular, singular, tail };

// regular:  a = (C + int_0^r q e^m) e^{-m}, q = g / (2 d'); requires g(0) = 0.
// singular: a = -(int_r^1 q e^m) e^{-m}.
// tail:     closed form on r >= R0 >= sigma with a(R0) = C.
// r_end bounds the tabulated range of the regular case.
FuchsSolution fuchs_solve(const WKBData& w, std::function<double(double)> g, double C, FuchsCase c,
                          double R0 = 0.0, double r_end = 0.0);

// |(L1 - mu1) a - g| at r, with a' from central differences.
double fuchs_residual(const WKBData& w, const FuchsSolution& a, const std::function<double(double)>& g,
                      double r);

struct A1Correction {
    FuchsSolution a1;
    double mu2_hat = 0.0;  // (L2 a0)(0) / a0(0)
    double mu2 = 0.0;      // harmonic series value
    std::function<double(double)> g1;
};

// First correction a1 with a1(0) = 0. mu2_hat is extrapolated to r = 0 from
// the exact quotient -p^2 + p' + (1 + 2 e0) p / r and must match mu2 to 1e-4
// relative; a mismatch throws std::logic_error.
A1Correction a1_correction(const WKBData& w, double r_end = 0.0);

// WKB data, the a1 correction and the quasimodes built from them.
class WkbExpansion {
public:
    explicit WkbExpansion(WKBData w, double r_end = 0.0);

    const WKBData& data() const { return w_; }
    const A1Correction& correction() const { return a1_; }

    // h^{-(1+e0)/2} r^{e0} (a0 + h a1 [N = 1]) e^{-d/h}
    double quasimode(int N, double h, double r) const;
    // Same with the exponential removed.
    double scaled_quasimode(int N, double h, double r) const;
    // L^2(r dr) norm.
    double norm(int N, double h) const;

private:
    WKBData w_;
    A1Correction a1_;
};

double wkb_quasimode(const WkbExpansion& x, int N, double h, double r);

// sup over [r_a, r_b] of exp(d/h) |(T - sum_{k<=N+1} mu_k h^k) psi_N|, with T
// the discrete fiber stencil on a local grid fine enough that its own
// truncation error stays below the residual.
double wkb_residual(const WkbExpansion& x, int N, double h, double r_a, double r_b);

struct GroundStateDiscrepancy {
    double value = 0.0;       // sup |e^{d/h} psi - h^{-(1+e0)/2} r^{e0} a0|
    double derivative = 0.0;  // sup |e^{d/h} psi' + h^{-(3+e0)/2} d' r^{e0} a0|
};

GroundStateDiscrepancy compare_gs_wkb(const EigenSolution& sol, const WKBData& w, double h, double r_a,
                                      double r_b);

}  // namespace abtunnel
