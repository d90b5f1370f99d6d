#include "CLI11.hpp"

#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "abtunnel/agmon.hpp"
#include "abtunnel/config.hpp"
#include "abtunnel/fiber1d.hpp"
#include "abtunnel/oracle2d.hpp"
#include "abtunnel/sweep.hpp"
#include "abtunnel/verify.hpp"
#include "abtunnel/wkb.hpp"

namespace fs = std::filesystem;
using namespace abtunnel;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

std::ofstream open_out(const fs::path& dir, const std::string& name)
{
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
}

RunConfig need_point(const RunConfig& c)
{
    if (!(c.alpha > 0.0) || !(c.h > 0.0)) throw ConfigError("this command needs alpha and h");
    return c;
}

int cmd_single_well(const RunConfig& cfg, const fs::path& out)
{
    need_point(cfg);
    const RadialPotential& p = cfg.potential;
    const FluxParams flux = cfg.flux(cfg.h);
    const double dr = cfg.dr > 0.0 ? cfg.dr : std::min(0.002, cfg.h / 50.0);
    const double r_max = cfg.r_max > 0.0 ? cfg.r_max : default_r_max(p, cfg.L);
    const RadialGrid grid = make_radial_grid(dr, r_max);

    const SingleWellSpectrum sw = single_well_spectrum(p, flux, grid, cfg.m_window);
    const EigenSolution sol = solve_lowest(assemble_fiber(p, cfg.h, flux.e0, grid), 4);
    const RadialState st = sol.state(0);

    nlohmann::json j{{"h", cfg.h}, {"e", flux.e0}, {"eigenvalues", sol.eigenvalues}};
    j["alpha"] = cfg.alpha;
    j["m_star"] = flux.m_star;
    j["lambda_sw"] = sw.ground;
    j["m_ground"] = sw.m_ground;
    j["degeneracy"] = sw.degeneracy;
    j["gap"] = sw.gap;
    j["edge_warning"] = sw.edge_warning;
    j["residuals"] = sol.residuals;

    {
        std::ofstream f = open_out(out, "eigen.csv");
        f << "r,psi,dpsi\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            f << fmt17(grid.r[i]) << ',' << fmt17(sol.vectors[0][i]) << ',' << fmt17(st.dpsi(grid.r[i])) << '\n';
    }

    if (std::isfinite(p.sigma)) {
        const WkbExpansion wkb(WKBData(p, flux.e0));
        const WKBData& w = wkb.data();
        {
            std::ofstream f = open_out(out, "agmon.csv");
            f << "r,d,p,a0\n";
            for (int i = 0; i <= 400; ++i) {
                const double r = r_max * i / 400.0;
                f << fmt17(r) << ',' << fmt17(w.d(r)) << ',' << fmt17(w.p(r)) << ',' << fmt17(w.a0(r)) << '\n';
            }
        }
        {
            std::ofstream f = open_out(out, "quasimode.csv");
            f << "r,psi_wkb,psi_numeric,discrepancy\n";
            for (int i = 1; i <= 400; ++i) {
                const double r = 2.0 * p.sigma * i / 400.0;
                const double a = wkb_quasimode(wkb, 0, cfg.h, r), b = st.psi(r);
                f << fmt17(r) << ',' << fmt17(a) << ',' << fmt17(b) << ',' << fmt17(b - a) << '\n';
            }
        }
        const GroundStateDiscrepancy g = compare_gs_wkb(sol, w, cfg.h, 0.3 * p.sigma, 1.5 * p.sigma);
        j["wkb_discrepancy"] = {{"value", g.value}, {"derivative", g.derivative}};
        j["decay"] = {{"delta", 0.1}, {"sup_scaled", decay_check(sol, w, 0.1)}};
    }
    open_out(out, "fiber.json") << j.dump(2) << '\n';

    std::cout << "lambda_sw = " << fmt17(sw.ground) << "  degeneracy " << sw.degeneracy << "  m = " << sw.m_ground
              << "  e0 = " << flux.e0 << '\n';
    return 0;
}

int cmd_splitting(const RunConfig& cfg, const fs::path& out, bool oracle, int jobs)
{
    SweepOptions o;
    o.jobs = jobs;
    o.oracle2d = oracle;
    const std::vector<SweepPoint> pts = run_splitting_sweep(cfg, o);
    std::ofstream f = open_out(out, "sweep.csv");
    write_sweep_csv(f, pts);
    write_sweep_csv(std::cout, pts);
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts[i].lattice) open_out(out, "lattice_" + std::to_string(i) + ".json") << to_json(*pts[i].lattice).dump(2) << '\n';
    return 0;
}

int cmd_sweep_flux(const RunConfig& cfg, const fs::path& out, int jobs)
{
    SweepOptions o;
    o.jobs = jobs;
    const FluxSweepResult r = run_flux_sweep(cfg, o);
    {
        std::ofstream f = open_out(out, "flux_sweep.csv");
        write_flux_rows_csv(f, r);
    }
    std::ofstream f = open_out(out, "flux_fits.csv");
    write_flux_fits_csv(f, r);
    write_flux_fits_csv(std::cout, r);
    return 0;
}

int cmd_oracle2d(const RunConfig& cfg, const fs::path& out)
{
    need_point(cfg);
    LobpcgOptions solver;
    solver.seed = cfg.seed;
    Lattice2D lat;
    if (cfg.lattice_single || cfg.L <= 0.0) {
        const double s = cfg.L > 0.0 ? cfg.L / (2.0 * cfg.lattice_m) : 2.5 / (2.0 * cfg.lattice_m);
        lat = make_single_well_lattice(cfg.potential, s, cfg.lattice_half_width);
    } else {
        lat = make_double_well_lattice(cfg.pair(cfg.h), cfg.lattice_m, cfg.lattice_half_width);
    }
    const LatticeSpectrum s = solve_lattice(lat, cfg.alpha, cfg.h, cfg.lattice_k, cfg.lattice_tol, solver);
    nlohmann::json j = to_json(s);
    const SymmetryReport sym = symmetry_check(s.pairs, lat, cfg.flux(cfg.h));
    j["symmetry"] = {{"inversion_defect", sym.inversion_defect},
                     {"inversion_sign", sym.inversion_sign},
                     {"involution_defect", sym.involution_defect},
                     {"kdw_checked", sym.kdw_checked},
                     {"kdw_defect", sym.kdw_defect},
                     {"clusters", sym.clusters}};
    open_out(out, "lattice.json") << j.dump(2) << '\n';
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_verify(bool full_level, const std::vector<int>& only, const fs::path& out)
{
    VerifyOptions o;
    o.level = full_level ? VerifyLevel::full : VerifyLevel::fast;
    o.only = only;
    o.log = &std::cout;
    const std::vector<CriterionResult> rs = run_acceptance(o);
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rs)
        j.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"skipped", r.skipped},
                     {"detail", r.detail}, {"seconds", r.seconds}});
    open_out(out, "verify.json") << j.dump(2) << '\n';
    const bool ok = all_passed(rs);
    std::cout << (ok ? "all criteria passed" : "some criteria failed") << '\n';
    return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Aharonov-Bohm double-well tunneling: fiber solver, WKB, interaction matrix and lattice oracle"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    bool oracle = false, full_level = false;
    int jobs = 0;
    std::vector<int> only;

    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* opt = sub->add_option("--config", config_path, "JSON configuration file");
        if (need_config) opt->required();
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--jobs", jobs, "worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
        sub->add_flag("--oracle2d", oracle, "add lattice oracle runs where supported");
    };
    auto* single = app.add_subcommand("single-well", "fiber spectrum, WKB comparison and decay diagnostics");
    auto* split = app.add_subcommand("splitting", "interaction-matrix splittings along an h sequence");
    auto* flux = app.add_subcommand("sweep-flux", "splitting exponents across e0 values");
    auto* lattice = app.add_subcommand("oracle2d", "2D lattice spectrum with symmetry report");
    auto* verify = app.add_subcommand("verify", "acceptance suite");
    for (auto* s : {single, split, flux, lattice}) add_common(s, true);
    add_common(verify, false);
    verify->add_flag("--full", full_level, "include the large lattice runs");
    verify->add_option("--only", only, "criterion ids to run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (jobs > 0) omp_set_num_threads(jobs);
        const fs::path out(out_dir);
        fs::create_directories(out);
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);

        if (*single) return cmd_single_well(cfg, out);
        if (*split) return cmd_splitting(cfg, out, oracle, jobs);
        if (*flux) return cmd_sweep_flux(cfg, out, jobs);
        if (*lattice) return cmd_oracle2d(cfg, out);
        if (*verify) return cmd_verify(full_level, only, out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}
