#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dickesim/params.hpp"

namespace dicke {

struct SweepAxis {
    std::string name;  // canonical parameter name
    double min = 0.0;
    double max = 0.0;
    int count = 1;
    bool log_spacing = false;

    std::vector<double> values() const;
};

struct SolverOptions {
    int m = -1;                    // sideband truncation; -1 = automatic
    double quad_tol = 1e-6;        // relative tolerance of flux integrals
    double truncation_tol = 1e-4;  // flux-settling tolerance for automatic m
    int n_max = -1;                // oscillator levels; -1 = automatic
};

struct RunConfig {
    SystemParams params;
    std::vector<SweepAxis> axes;            // 0 (single point), 1, or 2
    std::vector<std::string> observables;   // "flux", "photons", "kz_probability"
    SolverOptions solver;
    std::string stem = "sweep";             // output file basename
};

// Strict parse: unknown keys, wrong types, or out-of-domain values raise
// ConfigError naming the offending field.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace dicke
