#include "abtunnel/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>

namespace abtunnel {

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> fixed_e0_h_values(double alpha, double e0, const std::vector<long>& n_list)
{
    if (!(alpha > 0.0)) throw ConfigError("fixed-e0 sweep needs alpha > 0");
    std::vector<double> h;
    for (long n : n_list) {
        if (n + e0 <= 0.0) throw ConfigError("n + e0 must be positive");
        h.push_back(alpha / (static_cast<double>(n) + e0));
    }
    return h;
}

double snap_to_fixed_e0(double alpha, double e0, double h_target)
{
    const double t = alpha / h_target;
    double best = -1.0, best_dist = 0.0;
    for (double shift : {e0, 1.0 - e0}) {
        const double n = std::round(t - shift);
        for (double cand : {n + shift, n + 1.0 + shift}) {
            if (cand <= 0.0) continue;
            const double d = std::abs(cand - t);
            if (best < 0.0 || d < best_dist) {
                best = cand;
                best_dist = d;
            }
        }
    }
    if (best <= 0.0) throw ConfigError("no admissible h near " + fmt17(h_target));
    return alpha / best;
}

std::vector<double> sweep_h_values(const RunConfig& cfg)
{
    std::vector<double> hs;
    if (cfg.e0) {
        if (!cfg.n_list.empty())
            hs = fixed_e0_h_values(cfg.alpha, *cfg.e0, cfg.n_list);
        else
            for (double h : cfg.h_list) hs.push_back(snap_to_fixed_e0(cfg.alpha, *cfg.e0, h));
        for (double h : hs)
            if (std::abs(flux_residue(cfg.alpha / h) - *cfg.e0) > 1e-12)
                throw ConfigError("h = " + fmt17(h) + " is not in the fixed-e0 set");
    } else {
        hs = cfg.h_list;
    }
    if (hs.empty() && cfg.h > 0.0) hs.push_back(cfg.h);
    if (hs.empty()) throw ConfigError("sweep needs h, h_list or (e0, n_list)");
    return hs;
}

namespace {

PipelineOptions pipeline(const RunConfig& cfg)
{
    PipelineOptions p;
    p.dr = cfg.dr;
    p.r_max = cfg.r_max;
    return p;
}

// Runs f(i) for i < n on the worker pool and rethrows the first failure.
template <class F>
void pool_for(std::size_t n, int jobs, F&& f)
{
    std::vector<std::exception_ptr> errs(n);
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::size_t i = 0; i < n; ++i) {
        try {
            f(i);
        } catch (...) {
            errs[i] = std::current_exception();
        }
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<SweepPoint> run_splitting_sweep(const RunConfig& cfg, const SweepOptions& opt)
{
    const std::vector<double> hs = sweep_h_values(cfg);
    std::vector<SweepPoint> pts(hs.size());
    pool_for(hs.size(), opt.jobs, [&](std::size_t i) {
        pts[i].h = hs[i];
        pts[i].alpha = cfg.alpha;
        pts[i].pred = predict_splitting(cfg.pair(hs[i]), pipeline(cfg));
    });
    if (opt.oracle2d) {
        // Each lattice solve is parallel inside; run them one after another.
        for (auto& p : pts) {
            Oracle2DOptions o;
            o.m = cfg.lattice_m;
            o.half_width = cfg.lattice_half_width;
            o.tol = cfg.lattice_tol;
            o.k = std::max(cfg.lattice_k, 4);
            o.solver.seed = cfg.seed;
            p.lattice = double_well_spectrum(cfg.pair(p.h), o);
        }
    }
    return pts;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& pts)
{
    const bool half = std::any_of(pts.begin(), pts.end(), [](const SweepPoint& p) { return p.pred.gaps_half.has_value(); });
    const bool lat = std::any_of(pts.begin(), pts.end(), [](const SweepPoint& p) { return p.lattice.has_value(); });
    os << "h,e0,S,C,gap_numeric,gap_asymptotic,ratio";
    if (half) os << ",gap12,gap23,gap34";
    if (lat) os << ",lattice_gap12,lattice_gap23,lattice_gap34";
    os << '\n';
    for (const auto& p : pts) {
        const auto& r = p.pred;
        os << fmt17(p.h) << ',' << fmt17(r.e0) << ',' << fmt17(r.S) << ',' << fmt17(r.C) << ','
           << fmt17(r.numeric_2J1) << ',' << fmt17(r.asymptotic) << ',' << fmt17(r.ratio);
        if (half) {
            if (r.gaps_half)
                for (double g : *r.gaps_half) os << ',' << fmt17(g);
            else
                os << ",,,";
        }
        if (lat) {
            for (std::size_t q = 0; q < 3; ++q) {
                os << ',';
                if (p.lattice && q < p.lattice->gaps.size()) os << fmt17(p.lattice->gaps[q]);
            }
        }
        os << '\n';
    }
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("fit_slope: need at least two matching points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

FluxSweepResult run_flux_sweep(const RunConfig& cfg, const SweepOptions& opt)
{
    std::vector<double> e0s = cfg.e0_list;
    if (e0s.empty() && cfg.e0) e0s.push_back(*cfg.e0);
    if (e0s.empty()) throw ConfigError("sweep-flux needs e0_list or e0");
    if (!(cfg.alpha > 0.0)) throw ConfigError("sweep-flux needs alpha");

    struct Job {
        double e0, h;
    };
    std::vector<Job> jobs;
    for (double e0 : e0s) {
        RunConfig c = cfg;
        c.e0 = e0;
        for (double h : sweep_h_values(c)) jobs.push_back({e0, h});
    }
    FluxSweepResult res;
    res.rows.resize(jobs.size());
    pool_for(jobs.size(), opt.jobs, [&](std::size_t i) {
        const SplittingPrediction p = predict_splitting(cfg.pair(jobs[i].h), pipeline(cfg));
        res.rows[i] = {jobs[i].e0, jobs[i].h, cfg.alpha, p.numeric_2J1, p.asymptotic, p.ratio};
    });
    const double S = action_S(cfg.pair(jobs.front().h));
    for (double e0 : e0s) {
        std::vector<double> x, y;
        for (const auto& r : res.rows)
            if (r.e0 == e0) {
                x.push_back(std::log(r.h));
                y.push_back(std::log(r.gap_numeric) + S / r.h);
            }
        FluxSweepFit f;
        f.e0 = e0;
        f.expected = 0.5 - e0;
        f.points = static_cast<int>(x.size());
        f.slope = x.size() >= 2 ? fit_slope(x, y) : std::nan("");
        res.fits.push_back(f);
    }
    return res;
}

void write_flux_rows_csv(std::ostream& os, const FluxSweepResult& r)
{
    os << "e0,h,alpha,gap_numeric,gap_asymptotic,ratio\n";
    for (const auto& x : r.rows)
        os << fmt17(x.e0) << ',' << fmt17(x.h) << ',' << fmt17(x.alpha) << ',' << fmt17(x.gap_numeric) << ','
           << fmt17(x.gap_asymptotic) << ',' << fmt17(x.ratio) << '\n';
}

void write_flux_fits_csv(std::ostream& os, const FluxSweepResult& r)
{
    os << "e0,slope,expected,points\n";
    for (const auto& f : r.fits)
        os << fmt17(f.e0) << ',' << fmt17(f.slope) << ',' << fmt17(f.expected) << ',' << f.points << '\n';
}

}  // namespace abtunnel
