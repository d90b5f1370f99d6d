#pragma once

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abtunnel/wells.hpp"

namespace abtunnel {

// Raised for unreadable or inconsistent configuration; the CLI maps it to
// exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string family;
    double k = -1.0;
    double sigma = 1.0;
    double beta = 0.0;  // harmonic family only
    RadialPotential potential;

    double L = 0.0;      // 0 when absent (single-well use only)
    double alpha = 0.0;  // 0 when absent
    double h = 0.0;      // 0 when absent

    // Fixed-e0 sweeps take h = alpha / (n + e0); h_list entries are snapped
    // to the nearest such value.
    std::optional<double> e0;
    std::vector<double> e0_list;
    std::vector<double> h_list;
    std::vector<long> n_list;

    double dr = 0.0;     // 0: module default
    double r_max = 0.0;  // 0: module default
    int m_window = 3;
    int lattice_m = 57;
    double lattice_half_width = 0.0;
    double lattice_tol = 1e-8;
    int lattice_k = 4;
    bool lattice_single = false;
    std::uint64_t seed = 20261015;

    FluxParams flux(double h_value) const;
    WellPairConfig pair(double h_value) const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

nlohmann::json to_json(const RunConfig& c);

}  // namespace abtunnel
