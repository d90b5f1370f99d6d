#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>

#include "abtunnel/agmon.hpp"
#include "abtunnel/fiber1d.hpp"
#include "abtunnel/wells.hpp"

namespace abtunnel {

using cplx = std::complex<double>;

struct InteractionCoeffs {
    cplx J0{0.0, 0.0};
    cplx J1{0.0, 0.0};
    cplx Jhat0{0.0, 0.0};
    cplx Jhat1{0.0, 0.0};
    double h = 0.0;
    double e0 = 0.0;
    double gamma0 = 0.0;
};

struct FGSample {
    double F = 0.0;
    double G = 0.0;
    cplx w{1.0, 0.0};
    bool truncated = false;  // rho beyond r_max, psi taken as 0
};

// F = L psi psi' / rho, G = 2 gamma0 x2 psi^2 / rho^2 with
// rho = sqrt(x2^2 + (L/2)^2), and w = exp(2 i gamma0 arctan(2 x2 / L)).
FGSample integrand_FG(const RadialState& psi, const WellPairConfig& cfg, double x2);
FGSample integrand_FG(const EigenSolution& sol, const WellPairConfig& cfg, double x2);

// Half width of the x2 window, sqrt(r_max^2 - (L/2)^2).
double x2_window(const RadialState& psi, const WellPairConfig& cfg);

// Boundary integral form of J1:
//   J1 = h^2 / pi e^{-2 i pi gamma0} int w (F - i G) dx2.
// The 1/pi prefactor is the convention of the closed form, in which the
// single-well state is pi^{-1/2} psi e^{i m theta}; see README for how it
// relates to unit-normalized quasimodes.
cplx j1_numeric(const RadialState& psi, const WellPairConfig& cfg);
cplx j1_numeric(const EigenSolution& sol, const WellPairConfig& cfg);

// log of (1/2) C(L, v, e0) h^{1/2 - e0} e^{-S/h}, and its value.
double log_j1_asymptotic(const WellPairConfig& cfg, double h);
double j1_asymptotic(const WellPairConfig& cfg, double h);

struct JHat1 {
    cplx value;
    cplx f_term;  // the int F part (real)
    cplx g_term;  // the int G e^{i arctan(2 x2/L)} part
};

// Half-integer cross term,
//   Jhat1 = 2 h^2/pi int_0^X F + 2 h^2/pi int_0^X G e^{i arctan(2 x2 / L)}.
// The overall sign is the one that makes Jhat1 = -J1 + o(J1).
JHat1 jhat1_numeric(const RadialState& psi, const WellPairConfig& cfg);

struct JHat0 {
    cplx value;
    cplx first;   // -i h^2/pi int e^{i eta} G
    cplx second;  // -i h^2/pi int d1(eta) psi^2, odd integrand
};

JHat0 jhat0_numeric(const RadialState& psi, const WellPairConfig& cfg);

// J0 = -i h^2/pi int G dx2, integrated as two half lines so the parity
// cancellation is visible in the result.
cplx j0_numeric(const RadialState& psi, const WellPairConfig& cfg);

struct Splitting2 {
    Eigen::Matrix2cd U;
    std::array<double, 2> eigenvalues{};
    double gap = 0.0;
};

// U = [[J0, J1], [conj J1, J0]].
Splitting2 splitting_2x2(const InteractionCoeffs& c);

struct Splitting4 {
    Eigen::Matrix4cd U;
    std::array<double, 4> eigenvalues{};
    Eigen::Matrix4cd eigenvectors;
    double hermiticity_defect = 0.0;
};

// Half-integer interaction matrix in the basis (u_l, u_r, u_l-hat, u_r-hat).
Splitting4 matrix_4x4(const InteractionCoeffs& c);

// The idealized matrix for J0 = Jhat0 = 0, J1 = 1, Jhat1 = -1, with its
// exact eigenpairs: eigenvalues {-2, 0, 0, 2}, p1 = (-1, 1, 1, -1)/2.
struct IdealU {
    Eigen::Matrix4cd U;
    std::array<double, 4> eigenvalues{};
    std::array<Eigen::Vector4cd, 4> eigenvectors;
};
IdealU idealized_U();

struct SplittingPrediction {
    double h = 0.0;
    double e0 = 0.0;
    double S = 0.0;
    double C = 0.0;
    double asymptotic = 0.0;   // C h^{1/2-e0} e^{-S/h}
    double numeric_2J1 = 0.0;  // 2 |J1|
    double ratio = 0.0;        // numeric / asymptotic, from logs
    double lambda_sw = 0.0;    // fiber ground energy
    InteractionCoeffs coeffs;
    std::optional<std::array<double, 3>> gaps_half;  // gap12, gap23, gap34 of matrix_4x4
};

struct PipelineOptions {
    double dr = 0.0;      // 0: min(0.002, h/50)
    double r_max = 0.0;   // 0: max(3 sigma, L + 2)
};

// Fiber ground state at e0 followed by the interaction integrals.
SplittingPrediction predict_splitting(const WellPairConfig& cfg, const PipelineOptions& opt = {});

// C(L, v, 1 - e0) h^{e0 - 1/2} e^{-S/h}; rejects e0 = 0.
double lambda43_asymptotic(const WellPairConfig& cfg, double h);

struct QuasimodeOverlap {
    cplx overlap;          // <u_l, u_r>
    double bound_ratio = 0.0;  // |<u_l,u_r>| h^{1+e0} e^{2 d(L/2)/h}
    double norm_sq = 0.0;      // ||u_l||^2
    double norm_deficit = 0.0; // 1 - ||u_l||^2
    double eps = 0.0;
    double S_eps = 0.0;
};

// Quasimodes u_l = chi_l phi_l, u_r its reflection, with unit-normalized
// single-well states (2 pi)^{-1/2} psi e^{i m theta}. The cutoff margin eps
// is halved until d(L/2) < S_eps < min(2 d(L/2), d(L - sigma - eps)) has
// room. swap = true integrates <u_r, u_l> instead.
QuasimodeOverlap quasimode_overlap(const RadialState& psi, const WellPairConfig& cfg, double eps = -1.0,
                                   bool swap = false);

}  // namespace abtunnel
