#include "dickesim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dicke {

namespace {

const std::set<std::string> kParamKeys = {
    "omega_a", "omega_0", "lambda", "eta",
    "g",       "gamma0",  "tau0",   "n_atoms"};

const std::set<std::string> kObservables = {"flux", "photons",
                                            "kz_probability"};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

double get_number(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int get_int(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

void set_param(SystemParams& p, const std::string& key, double v) {
    if (key == "omega_a") p.omega_a = v;
    else if (key == "omega_0") p.omega_0 = v;
    else if (key == "lambda") p.lambda = v;
    else if (key == "eta") p.eta = v;
    else if (key == "g") p.g = v;
    else if (key == "gamma0") p.gamma0 = v;
    else if (key == "tau0") p.tau0 = v;
    else if (key == "n_atoms") p.n_atoms = v;
}

}  // namespace

std::vector<double> SweepAxis::values() const {
    std::vector<double> v;
    v.reserve(count);
    if (count == 1) {
        v.push_back(min);
        return v;
    }
    for (int i = 0; i < count; ++i) {
        const double f = double(i) / double(count - 1);
        if (log_spacing) {
            v.push_back(min * std::pow(max / min, f));
        } else {
            v.push_back(min + f * (max - min));
        }
    }
    return v;
}

RunConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config root must be an object");
    for (const auto& [key, val] : j.items()) {
        (void)val;
        if (key != "params" && key != "sweep" && key != "observables" &&
            key != "solver" && key != "stem") {
            fail(key, "unknown top-level key");
        }
    }

    RunConfig cfg;
    if (!j.contains("params") || !j.at("params").is_object()) {
        throw ConfigError("params: required object is missing");
    }
    for (const auto& [key, val] : j.at("params").items()) {
        if (!kParamKeys.count(key)) fail("params." + key, "unknown parameter");
        set_param(cfg.params, key, get_number(val, "params." + key));
    }

    if (j.contains("sweep")) {
        if (!j.at("sweep").is_array()) fail("sweep", "expected an array");
        int idx = 0;
        for (const auto& a : j.at("sweep")) {
            std::ostringstream pre;
            pre << "sweep[" << idx << "]";
            if (!a.is_object()) fail(pre.str(), "expected an object");
            SweepAxis ax;
            for (const auto& [key, val] : a.items()) {
                const std::string path = pre.str() + "." + key;
                if (key == "name") {
                    if (!val.is_string()) fail(path, "expected a string");
                    ax.name = val.get<std::string>();
                } else if (key == "min") {
                    ax.min = get_number(val, path);
                } else if (key == "max") {
                    ax.max = get_number(val, path);
                } else if (key == "count") {
                    ax.count = get_int(val, path);
                } else if (key == "spacing") {
                    if (!val.is_string()) fail(path, "expected a string");
                    const std::string s = val.get<std::string>();
                    if (s == "log") ax.log_spacing = true;
                    else if (s != "linear") fail(path, "must be 'linear' or 'log'");
                } else {
                    fail(path, "unknown axis key");
                }
            }
            if (!kParamKeys.count(ax.name)) {
                fail(pre.str() + ".name", "not a sweepable parameter");
            }
            if (ax.count < 1) fail(pre.str() + ".count", "must be >= 1");
            if (ax.count > 1 && !(ax.max > ax.min)) {
                fail(pre.str(), "max must exceed min when count > 1");
            }
            if (ax.log_spacing && !(ax.min > 0.0)) {
                fail(pre.str(), "log spacing requires min > 0");
            }
            cfg.axes.push_back(ax);
            ++idx;
        }
        if (cfg.axes.size() > 2) fail("sweep", "at most two axes are supported");
        if (cfg.axes.size() == 2 && cfg.axes[0].name == cfg.axes[1].name) {
            fail("sweep", "axes must sweep distinct parameters");
        }
    }

    if (j.contains("observables")) {
        if (!j.at("observables").is_array()) fail("observables", "expected an array");
        for (const auto& o : j.at("observables")) {
            if (!o.is_string() || !kObservables.count(o.get<std::string>())) {
                fail("observables",
                     "entries must be 'flux', 'photons', or 'kz_probability'");
            }
            cfg.observables.push_back(o.get<std::string>());
        }
    }
    if (cfg.observables.empty()) cfg.observables.push_back("flux");

    if (j.contains("solver")) {
        if (!j.at("solver").is_object()) fail("solver", "expected an object");
        for (const auto& [key, val] : j.at("solver").items()) {
            const std::string path = "solver." + key;
            if (key == "m") {
                cfg.solver.m = get_int(val, path);
                if (cfg.solver.m == 0 || cfg.solver.m < -1) {
                    fail(path, "must be >= 1, or -1 for automatic");
                }
            } else if (key == "quad_tol") {
                cfg.solver.quad_tol = get_number(val, path);
                if (!(cfg.solver.quad_tol > 0.0)) fail(path, "must be > 0");
            } else if (key == "truncation_tol") {
                cfg.solver.truncation_tol = get_number(val, path);
                if (!(cfg.solver.truncation_tol > 0.0)) fail(path, "must be > 0");
            } else if (key == "n_max") {
                cfg.solver.n_max = get_int(val, path);
                if (cfg.solver.n_max == 0 || cfg.solver.n_max < -1) {
                    fail(path, "must be >= 1, or -1 for automatic");
                }
            } else {
                fail(path, "unknown solver key");
            }
        }
    }

    if (j.contains("stem")) {
        if (!j.at("stem").is_string()) fail("stem", "expected a string");
        cfg.stem = j.at("stem").get<std::string>();
        if (cfg.stem.empty() || cfg.stem.find('/') != std::string::npos) {
            fail("stem", "must be a nonempty basename without '/'");
        }
    }

    try {
        cfg.params.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid JSON in ") + path + ": " +
                          e.what());
    }
    return config_from_json(j);
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["params"] = {{"omega_a", cfg.params.omega_a},
                   {"omega_0", cfg.params.omega_0},
                   {"lambda", cfg.params.lambda},
                   {"eta", cfg.params.eta},
                   {"g", cfg.params.g},
                   {"gamma0", cfg.params.gamma0},
                   {"tau0", cfg.params.tau0},
                   {"n_atoms", cfg.params.n_atoms}};
    j["sweep"] = nlohmann::json::array();
    for (const auto& ax : cfg.axes) {
        j["sweep"].push_back({{"name", ax.name},
                              {"min", ax.min},
                              {"max", ax.max},
                              {"count", ax.count},
                              {"spacing", ax.log_spacing ? "log" : "linear"}});
    }
    j["observables"] = cfg.observables;
    j["solver"] = {{"m", cfg.solver.m},
                   {"quad_tol", cfg.solver.quad_tol},
                   {"truncation_tol", cfg.solver.truncation_tol},
                   {"n_max", cfg.solver.n_max}};
    j["stem"] = cfg.stem;
    return j;
}

}  // namespace dicke
