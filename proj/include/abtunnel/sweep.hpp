#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "abtunnel/config.hpp"
#include "abtunnel/interaction.hpp"
#include "abtunnel/oracle2d.hpp"

namespace abtunnel {

// Round-trip formatting for CSV cells.
std::string fmt17(double x);

// h = alpha / (n + e0) for each n (e0 = 1/2 and 0 need no second branch).
std::vector<double> fixed_e0_h_values(double alpha, double e0, const std::vector<long>& n_list);

// Nearest h to target with e(alpha/h) = e0, over both branches
// alpha/(n + e0) and alpha/(n + 1 - e0).
double snap_to_fixed_e0(double alpha, double e0, double h_target);

struct SweepOptions {
    int jobs = 0;           // 0: OpenMP default
    bool oracle2d = false;  // add lattice columns
};

struct SweepPoint {
    double h = 0.0;
    double alpha = 0.0;
    SplittingPrediction pred;
    std::optional<LatticeSpectrum> lattice;
};

// The h values of a splitting sweep: n_list or snapped h_list when e0 is
// fixed, the raw h_list (or the single h) otherwise.
std::vector<double> sweep_h_values(const RunConfig& cfg);

// Points run on a worker pool; the output keeps the input order.
std::vector<SweepPoint> run_splitting_sweep(const RunConfig& cfg, const SweepOptions& opt = {});

// h,e0,S,C,gap_numeric,gap_asymptotic,ratio[,gap12,gap23,gap34][,lattice columns]
void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& pts);

struct FluxSweepRow {
    double e0 = 0.0, h = 0.0, alpha = 0.0;
    double gap_numeric = 0.0, gap_asymptotic = 0.0, ratio = 0.0;
};

struct FluxSweepFit {
    double e0 = 0.0;
    double slope = 0.0;     // of log(gap) + S/h against log h
    double expected = 0.0;  // 1/2 - e0
    int points = 0;
};

struct FluxSweepResult {
    std::vector<FluxSweepRow> rows;
    std::vector<FluxSweepFit> fits;
};

// For each e0 in e0_list (or the single e0), the fixed-e0 h-sequence from
// n_list or h_list, and a least squares power-law fit per e0.
FluxSweepResult run_flux_sweep(const RunConfig& cfg, const SweepOptions& opt = {});

void write_flux_rows_csv(std::ostream& os, const FluxSweepResult& r);
void write_flux_fits_csv(std::ostream& os, const FluxSweepResult& r);

// Least squares slope of y on x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace abtunnel
