#include "abtunnel/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace abtunnel {

namespace {

double get_number(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    if (!j[key].is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
    const double v = j[key].get<double>();
    if (!std::isfinite(v)) throw ConfigError(std::string("field '") + key + "' is not finite");
    return v;
}

double opt_number(const nlohmann::json& j, const char* key, double fallback)
{
    return j.contains(key) ? get_number(j, key) : fallback;
}

template <class T>
std::vector<T> opt_list(const nlohmann::json& j, const char* key)
{
    std::vector<T> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) throw ConfigError(std::string("field '") + key + "' must be an array");
    for (const auto& x : j[key]) {
        if (!x.is_number()) throw ConfigError(std::string("field '") + key + "' must hold numbers");
        out.push_back(x.get<T>());
    }
    return out;
}

void require(bool ok, const std::string& msg)
{
    if (!ok) throw ConfigError(msg);
}

}  // namespace

FluxParams RunConfig::flux(double h_value) const
{
    require(alpha > 0.0, "flux requested but alpha is not set");
    return flux_params(alpha, h_value);
}

WellPairConfig RunConfig::pair(double h_value) const
{
    require(L > 0.0, "double-well run requested but L is not set");
    return make_well_pair(potential, L, flux(h_value));
}

RunConfig parse_config(const nlohmann::json& j)
{
    require(j.is_object(), "config must be a JSON object");
    require(j.contains("well") && j["well"].is_object(), "missing object 'well'");
    const auto& w = j["well"];
    RunConfig c;
    require(w.contains("family") && w["family"].is_string(), "well.family must be a string");
    c.family = w["family"].get<std::string>();
    c.k = get_number(w, "k");
    require(c.k < 0.0, "well.k must be negative");
    try {
        if (c.family == "bump") {
            c.sigma = get_number(w, "sigma");
            require(c.sigma > 0.0, "well.sigma must be positive");
            c.potential = make_bump_well(c.k, c.sigma);
        } else if (c.family == "harmonic") {
            c.beta = get_number(w, "beta");
            require(c.beta > 0.0, "well.beta must be positive");
            c.potential = make_quadratic_well(c.k, c.beta);
            c.sigma = c.potential.sigma;
        } else {
            throw ConfigError("unknown well.family '" + c.family + "' (expected bump or harmonic)");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid well: ") + e.what());
    }
    if (c.family == "bump") {
        const WellReport rep = validate_well(c.potential);
        require(rep.ok(), "well fails validation: " + rep.summary());
    }

    c.L = opt_number(j, "L", 0.0);
    require(c.L >= 0.0, "L must be positive");
    if (c.L > 0.0) require(c.L > 2.0 * c.sigma, "L must exceed 2 sigma");
    c.alpha = opt_number(j, "alpha", 0.0);
    require(c.alpha >= 0.0, "alpha must be positive");
    c.h = opt_number(j, "h", 0.0);
    require(c.h >= 0.0, "h must be positive");
    if (j.contains("e0")) {
        c.e0 = get_number(j, "e0");
        require(*c.e0 >= 0.0 && *c.e0 <= 0.5, "e0 must lie in [0, 1/2]");
    }
    c.e0_list = opt_list<double>(j, "e0_list");
    for (double e : c.e0_list) require(e >= 0.0 && e <= 0.5, "e0_list entries must lie in [0, 1/2]");
    c.h_list = opt_list<double>(j, "h_list");
    for (double h : c.h_list) require(h > 0.0, "h_list entries must be positive");
    c.n_list = opt_list<long>(j, "n_list");
    for (long n : c.n_list) require(n >= 0, "n_list entries must be non-negative");

    if (j.contains("grid")) {
        const auto& g = j["grid"];
        require(g.is_object(), "grid must be an object");
        c.dr = opt_number(g, "dr", 0.0);
        c.r_max = opt_number(g, "r_max", 0.0);
        c.m_window = static_cast<int>(opt_number(g, "m_window", 3));
        c.lattice_m = static_cast<int>(opt_number(g, "lattice_m", 57));
        c.lattice_half_width = opt_number(g, "lattice_half_width", 0.0);
        c.lattice_tol = opt_number(g, "lattice_tol", 1e-8);
        c.lattice_k = static_cast<int>(opt_number(g, "lattice_k", 4));
        if (g.contains("lattice_geometry")) {
            require(g["lattice_geometry"].is_string(), "grid.lattice_geometry must be a string");
            const std::string geo = g["lattice_geometry"].get<std::string>();
            require(geo == "single" || geo == "double", "grid.lattice_geometry must be single or double");
            c.lattice_single = geo == "single";
        }
        require(c.dr >= 0.0 && c.r_max >= 0.0, "grid.dr and grid.r_max must be non-negative");
        require(c.m_window >= 3, "grid.m_window must be at least 3");
        require(c.lattice_m >= 2, "grid.lattice_m must be at least 2");
        require(c.lattice_tol > 0.0, "grid.lattice_tol must be positive");
        require(c.lattice_k >= 1 && c.lattice_k <= 8, "grid.lattice_k must lie in 1..8");
    }
    if (j.contains("seed")) {
        require(j["seed"].is_number_unsigned(), "seed must be a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

nlohmann::json to_json(const RunConfig& c)
{
    nlohmann::json w{{"family", c.family}, {"k", c.k}};
    if (c.family == "bump") w["sigma"] = c.sigma;
    if (c.family == "harmonic") w["beta"] = c.beta;
    nlohmann::json j{{"well", w}};
    if (c.L > 0.0) j["L"] = c.L;
    if (c.alpha > 0.0) j["alpha"] = c.alpha;
    if (c.h > 0.0) j["h"] = c.h;
    if (c.e0) j["e0"] = *c.e0;
    if (!c.e0_list.empty()) j["e0_list"] = c.e0_list;
    if (!c.h_list.empty()) j["h_list"] = c.h_list;
    if (!c.n_list.empty()) j["n_list"] = c.n_list;
    j["seed"] = c.seed;
    return j;
}

}  // namespace abtunnel
