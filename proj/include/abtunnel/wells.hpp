#pragma once

#include <functional>
#include <string>
#include <vector>

namespace abtunnel {

using RealFn = std::function<double(double)>;

// Radial well v(r) with its first two derivatives and the Taylor data at 0
// that the asymptotic formulas need. Treated as immutable once built.
struct RadialPotential {
    std::string family;
    RealFn v;
    RealFn dv;
    RealFn d2v;
    double sigma = 0.0;  // support radius; +inf for the global quadratic model
    double k = 0.0;      // v(0)
    double beta = 0.0;   // v''(0) / 2
    double v4_0 = 0.0;   // v''''(0)

    double d2v0() const { return 2.0 * beta; }
};

// k exp(1 - sigma^2 / (sigma^2 - r^2)) inside the support, zero outside.
RadialPotential make_bump_well(double k, double sigma);

// k + beta r^2 on the whole half line. Not compactly supported, so it fails
// validate_well; used as the exact harmonic model in fiber and WKB checks.
RadialPotential make_quadratic_well(double k, double beta);

// Fourth derivative at 0 from central differences of v (one Richardson
// level). Steps much below 0.02 sigma lose digits to roundoff.
// Enough for the four digits mu2 needs.
double estimate_v4_at_zero(const RealFn& v, double step = 0.02);

// Second derivative at 0 from central differences with Richardson.
double estimate_v2_at_zero(const RealFn& v, double step = 1e-4);

struct FluxParams {
    double alpha = 0.0;
    double h = 0.0;
    double t = 0.0;       // alpha / h
    double e0 = 0.0;      // distance from t to the integers
    long m_star = 0;      // smallest integer realizing e0
    double gamma0 = 0.0;  // m_star - t
    bool half_integer = false;
};

// e(t) = min over integers m of |t - m|.
double flux_residue(double t);

FluxParams flux_params(double alpha, double h);

struct WellPairConfig {
    RadialPotential potential;
    double L = 0.0;
    FluxParams flux;
};

// Checks L > 2 sigma.
WellPairConfig make_well_pair(RadialPotential p, double L, FluxParams flux);

struct WellCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct WellReport {
    std::vector<WellCheck> checks;
    double measured_d2v0 = 0.0;
    double measured_v4_0 = 0.0;

    bool ok() const;
    std::string summary() const;
};

// Admissibility of a compactly supported well. Never throws on a bad
// well; each violated condition becomes a failed check.
WellReport validate_well(const RadialPotential& p, int grid_n = 2000);

}  // namespace abtunnel
