#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "abtunnel/config.hpp"
#include "abtunnel/sweep.hpp"

using namespace abtunnel;
namespace fs = std::filesystem;

namespace {

nlohmann::json base_config()
{
    return nlohmann::json::parse(R"({"well": {"family": "bump", "k": -1.0, "sigma": 1.0},
                                     "L": 2.5, "alpha": 0.23, "h": 0.1})");
}

fs::path scratch_dir(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / ("abtunnel_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

fs::path write_config(const fs::path& dir, const nlohmann::json& j)
{
    const fs::path p = dir / "config.json";
    std::ofstream(p) << j.dump(2);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args)
{
    const char* cli = std::getenv("ABTUNNEL_CLI");
    REQUIRE_MESSAGE(cli != nullptr, "ABTUNNEL_CLI not set");
    const int status = std::system((std::string(cli) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("valid configuration parses")
{
    const RunConfig c = parse_config(base_config());
    CHECK(c.family == "bump");
    CHECK(c.L == 2.5);
    CHECK(c.pair(0.1).flux.alpha == 0.23);
    CHECK(c.potential.v(0.0) == doctest::Approx(-1.0));
}

TEST_CASE("invalid configurations are rejected")
{
    auto bad = [](auto mutate) {
        nlohmann::json j = base_config();
        mutate(j);
        CHECK_THROWS_AS(parse_config(j), ConfigError);
    };
    bad([](nlohmann::json& j) { j.erase("well"); });
    bad([](nlohmann::json& j) { j["well"]["family"] = "square"; });
    bad([](nlohmann::json& j) { j["well"]["sigma"] = -1.0; });
    bad([](nlohmann::json& j) { j["well"]["k"] = 1.0; });
    bad([](nlohmann::json& j) { j["h"] = -0.1; });
    bad([](nlohmann::json& j) { j["L"] = 1.5; });
    bad([](nlohmann::json& j) { j["L"] = "wide"; });
}

TEST_CASE("fixed-e0 h values land on the requested residue")
{
    const std::vector<double> hs = fixed_e0_h_values(1.0, 0.3, {4, 6, 9, 13});
    for (double h : hs) CHECK(std::abs(flux_residue(1.0 / h) - 0.3) <= 1e-12);
    for (double target : {0.11, 0.07, 0.05}) {
        const double h = snap_to_fixed_e0(1.0, 0.3, target);
        CHECK(std::abs(flux_residue(1.0 / h) - 0.3) <= 1e-12);
        CHECK(std::abs(h - target) / target < 0.1);
    }
    CHECK_THROWS_AS(fixed_e0_h_values(0.0, 0.3, {4}), ConfigError);
}

TEST_CASE("17 digit formatting round trips")
{
    for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) CHECK(std::stod(fmt17(x)) == x);
}

TEST_CASE("slope fit")
{
    CHECK(fit_slope({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0}) == doctest::Approx(2.0));
}

TEST_CASE("sweep CSV is deterministic")
{
    nlohmann::json j = base_config();
    j.erase("h");
    j["alpha"] = 1.0;
    j["e0"] = 0.3;
    j["n_list"] = {4, 6};
    const RunConfig c = parse_config(j);
    std::ostringstream a, b;
    write_sweep_csv(a, run_splitting_sweep(c, {1, false}));
    write_sweep_csv(b, run_splitting_sweep(c, {0, false}));
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("h,e0,S,C,gap_numeric,gap_asymptotic,ratio", 0) == 0);
}

TEST_CASE("CLI exits with 2 on an invalid config")
{
    const fs::path d = scratch_dir("invalid");
    nlohmann::json j = base_config();
    j["well"]["sigma"] = 0.0;
    CHECK(run_cli("single-well --config " + write_config(d, j).string() + " --out " + d.string()) == 2);
    CHECK(run_cli("single-well --config " + (d / "missing.json").string()) == 2);
    std::ofstream(d / "garbage.json") << "{ not json";
    CHECK(run_cli("splitting --config " + (d / "garbage.json").string()) == 2);
}

TEST_CASE("CLI single-well reports the flux degeneracy")
{
    for (auto [alpha, deg] : {std::pair{0.23, 1}, std::pair{0.25, 2}}) {
        const fs::path d = scratch_dir("single" + std::to_string(deg));
        nlohmann::json j = base_config();
        j["alpha"] = alpha;
        REQUIRE(run_cli("single-well --config " + write_config(d, j).string() + " --out " + d.string()) == 0);
        const nlohmann::json out = nlohmann::json::parse(slurp(d / "fiber.json"));
        CHECK(out["degeneracy"].get<int>() == deg);
        for (const char* f : {"eigen.csv", "agmon.csv", "quasimode.csv"}) CHECK(fs::exists(d / f));
        CHECK(slurp(d / "agmon.csv").rfind("r,d,p,a0", 0) == 0);
        CHECK(slurp(d / "eigen.csv").rfind("r,psi,dpsi", 0) == 0);
        CHECK(slurp(d / "quasimode.csv").rfind("r,psi_wkb,psi_numeric,discrepancy", 0) == 0);
    }
}
