#include "dickesim/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <thread>

#include "dickesim/kz.hpp"
#include "dickesim/model.hpp"
#include "dickesim/observables.hpp"
#include "dickesim/version.hpp"

namespace dicke {

namespace {

namespace fs = std::filesystem;

std::string sanitize(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

struct PointTask {
    int file = 0;
    std::vector<double> keys;
    SystemParams params;
    SolverOptions solver;
    std::vector<std::string> observables;
    double spectral_omega = std::numeric_limits<double>::quiet_NaN();
};

struct PointResult {
    std::vector<double> values;
    std::string error;
};

struct FileSpec {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::size_t> rows;  // task indices, in row order
};

PointResult evaluate_point(const PointTask& t) {
    PointResult r;
    try {
        const DampingModel d{t.params.gamma0};
        int m = t.solver.m;
        auto need_m = [&]() {
            if (m < 1) m = choose_truncation(t.params, d, t.solver.truncation_tol);
            return m;
        };
        if (!std::isnan(t.spectral_omega)) {
            r.values.push_back(
                spectral_density_at(t.params, d, need_m(), t.spectral_omega));
            return r;
        }
        for (const std::string& obs : t.observables) {
            if (obs == "flux") {
                r.values.push_back(
                    output_flux(t.params, d, need_m(), t.solver.quad_tol));
            } else if (obs == "photons") {
                r.values.push_back(intracavity_photons(t.params, d, need_m(),
                                                       t.solver.quad_tol));
            } else if (obs == "kz_probability") {
                r.values.push_back(
                    excitation_probability(t.params, t.solver.n_max));
            }
        }
    } catch (const std::exception& e) {
        r.values.clear();
        r.error = sanitize(e.what());
    }
    return r;
}

void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& f) {
    if (jobs < 1) jobs = 1;
    jobs = static_cast<int>(std::min<std::size_t>(jobs, n));
    jobs = std::min(jobs, 64);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            f(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

SweepSummary execute(const std::vector<PointTask>& tasks,
                     const std::vector<FileSpec>& files,
                     const std::string& out_dir, int jobs,
                     nlohmann::json manifest,
                     const std::vector<std::string>& warnings) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<PointResult> results(tasks.size());
    parallel_for(tasks.size(), jobs,
                 [&](std::size_t i) { results[i] = evaluate_point(tasks[i]); });

    fs::create_directories(out_dir);
    SweepSummary summary;
    summary.n_points = static_cast<int>(tasks.size());
    for (const auto& r : results) {
        if (!r.error.empty()) ++summary.n_failed;
    }

    for (const auto& spec : files) {
        const fs::path path = fs::path(out_dir) / spec.name;
        std::ofstream out(path);
        if (!out) throw Error("cannot write " + path.string());
        for (std::size_t i = 0; i < spec.header.size(); ++i) {
            out << (i ? "," : "") << spec.header[i];
        }
        out << "\n";
        for (std::size_t row : spec.rows) {
            const PointTask& t = tasks[row];
            const PointResult& r = results[row];
            std::string line;
            for (double k : t.keys) line += format_double(k) + ",";
            const std::size_t n_vals = spec.header.size() - t.keys.size() - 1;
            for (std::size_t v = 0; v < n_vals; ++v) {
                line += (v < r.values.size() ? format_double(r.values[v]) : "");
                line += ",";
            }
            line += r.error;
            out << line << "\n";
        }
        summary.files.push_back(path.string());
    }

    const auto t1 = std::chrono::steady_clock::now();
    manifest["version"] = kVersion;
    manifest["n_points"] = summary.n_points;
    manifest["n_failed"] = summary.n_failed;
    manifest["wall_time_seconds"] =
        std::chrono::duration<double>(t1 - t0).count();
    manifest["warnings"] = warnings;
    {
        nlohmann::json names = nlohmann::json::array();
        for (const auto& spec : files) names.push_back(spec.name);
        manifest["files"] = names;
    }
    const fs::path mpath = fs::path(out_dir) / "manifest.json";
    std::ofstream mout(mpath);
    if (!mout) throw Error("cannot write " + mpath.string());
    mout << manifest.dump(2) << "\n";
    summary.manifest = mpath.string();
    summary.files.push_back(mpath.string());
    return summary;
}

nlohmann::json params_json(const SystemParams& p) {
    return {{"omega_a", p.omega_a}, {"omega_0", p.omega_0},
            {"lambda", p.lambda},   {"eta", p.eta},
            {"g", p.g},             {"gamma0", p.gamma0},
            {"tau0", p.tau0},       {"n_atoms", p.n_atoms}};
}

std::vector<double> linspace(double lo, double hi, int n) {
    SweepAxis ax;
    ax.min = lo;
    ax.max = hi;
    ax.count = n;
    return ax.values();
}

// Dense spectral grid: a uniform backbone plus gamma0/6 refinement inside
// +-6 gamma0 of each predicted peak.
std::vector<double> spectral_grid(const SystemParams& p, double gamma0) {
    const double eps0 =
        normal_modes_static(p.omega_a, p.omega_0, p.g).eps_minus;
    const double hi = p.eta + 2.0 * eps0 + 0.3;
    std::vector<double> grid;
    for (double w = 0.01; w < hi; w += 0.002) grid.push_back(w);
    for (double peak : predicted_peaks(p)) {
        for (double w = peak - 6.0 * gamma0; w <= peak + 6.0 * gamma0;
             w += gamma0 / 6.0) {
            if (w > 0.0) grid.push_back(w);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return b - a < 1e-9; }),
               grid.end());
    return grid;
}

SweepSummary run_fig1a(const std::string& out_dir, int jobs) {
    SystemParams base;
    base.g = 0.45;
    base.lambda = 0.005;
    base.gamma0 = 0.005;
    const double eps0 =
        normal_modes_static(base.omega_a, base.omega_0, base.g).eps_minus;
    SystemParams probe = base;
    probe.eta = 2.0 * eps0;
    const int m = choose_truncation(probe, DampingModel{base.gamma0});

    std::vector<PointTask> tasks;
    FileSpec file{"fig1a.csv", {"eta", "flux", "error"}, {}};
    for (double eta : linspace(0.02, 1.0, 200)) {
        PointTask t;
        t.keys = {eta};
        t.params = base;
        t.params.eta = eta;
        t.solver.m = m;
        t.observables = {"flux"};
        file.rows.push_back(tasks.size());
        tasks.push_back(t);
    }
    nlohmann::json man;
    man["preset"] = "fig1a";
    man["resolved_params"] = params_json(base);
    man["axis"] = {{"name", "eta"}, {"min", 0.02}, {"max", 1.0}, {"count", 200}};
    man["solver"] = {{"m", m}, {"quad_tol", 1e-6}};
    return execute(tasks, {file}, out_dir, jobs, man, {});
}

SweepSummary run_fig1b(const std::string& out_dir, int jobs) {
    SystemParams base;
    base.g = 0.45;
    base.lambda = 0.005;
    base.gamma0 = 0.005;

    // The resonance line of each g row is only a few gamma0 wide, far
    // narrower than a 20-point eta grid cell.  Derive the g grid from the
    // eta grid via g = (1 - (eta/2)^2)/2 so that every row's resonance
    // eta = 2 eps_-(g) falls exactly on a grid column and the map samples
    // each line at its crest rather than on a random point of its tail.
    // The eta range stops at 0.55 because rows with still larger g are
    // parametrically unstable at the crest for lambda = gamma0 = 0.005:
    // the drive gain exceeds the dressed damping and no steady state exists.
    const std::vector<double> etas = linspace(0.55, 1.90, 20);
    std::vector<double> gs;
    for (double eta : etas) gs.push_back(0.5 * (1.0 - 0.25 * eta * eta));
    std::sort(gs.begin(), gs.end());

    std::vector<PointTask> tasks;
    FileSpec file{"fig1b.csv", {"g", "eta", "flux", "error"}, {}};
    for (double g : gs) {
        for (double eta : etas) {
            PointTask t;
            t.keys = {g, eta};
            t.params = base;
            t.params.g = g;
            t.params.eta = eta;
            t.solver.m = -1;
            t.observables = {"flux"};
            file.rows.push_back(tasks.size());
            tasks.push_back(t);
        }
    }
    nlohmann::json man;
    man["preset"] = "fig1b";
    man["resolved_params"] = params_json(base);
    man["axes"] = {{{"name", "g"}, {"values", gs}},
                   {{"name", "eta"}, {"min", 0.55}, {"max", 1.90}, {"count", 20}}};
    man["solver"] = {{"m", "auto"}, {"quad_tol", 1e-6}};
    return execute(tasks, {file}, out_dir, jobs, man, {});
}

SweepSummary run_fig2(const std::string& out_dir, int jobs) {
    SystemParams base;
    base.g = 0.45;
    base.lambda = 0.005;
    base.gamma0 = 0.005;
    const double eps0 =
        normal_modes_static(base.omega_a, base.omega_0, base.g).eps_minus;
    const int m = 4;

    const std::vector<std::pair<double, std::string>> curves = {
        {1.0, "fig2_eta_x100.csv"},
        {0.7, "fig2_eta_x070.csv"},
        {1.3, "fig2_eta_x130.csv"}};

    std::vector<PointTask> tasks;
    std::vector<FileSpec> files;
    std::vector<std::string> warnings;
    nlohmann::json man;
    man["preset"] = "fig2";
    man["solver"] = {{"m", m}};
    man["curves"] = nlohmann::json::array();

    for (const auto& [fac, name] : curves) {
        SystemParams p = base;
        p.eta = fac * 2.0 * eps0;
        FileSpec file{name, {"omega", "S", "error"}, {}};
        const std::vector<double> grid = spectral_grid(p, base.gamma0);
        for (double w : grid) {
            PointTask t;
            t.keys = {w};
            t.params = p;
            t.solver.m = m;
            t.spectral_omega = w;
            file.rows.push_back(tasks.size());
            tasks.push_back(t);
        }
        for (const std::string& w :
             grid_coarseness_warnings(p, DampingModel{p.gamma0}, grid)) {
            warnings.push_back(name + ": " + w);
        }
        files.push_back(file);
        man["curves"].push_back({{"file", name},
                                 {"eta_over_2eps0", fac},
                                 {"resolved_params", params_json(p)},
                                 {"grid_points", grid.size()}});
    }
    return execute(tasks, files, out_dir, jobs, man, warnings);
}

SweepSummary run_fig3b(const std::string& out_dir, int jobs) {
    SystemParams base;
    base.g = 0.49;
    base.gamma0 = 0.005;
    const double eps0 =
        normal_modes_static(base.omega_a, base.omega_0, base.g).eps_minus;

    const std::vector<std::pair<double, std::string>> curves = {
        {0.005, "fig3b_lambda_0.005.csv"},
        {0.01, "fig3b_lambda_0.01.csv"},
        {0.02, "fig3b_lambda_0.02.csv"}};

    std::vector<PointTask> tasks;
    std::vector<FileSpec> files;
    nlohmann::json man;
    man["preset"] = "fig3b";
    man["eps0"] = eps0;
    man["curves"] = nlohmann::json::array();

    for (const auto& [lambda, name] : curves) {
        SystemParams p = base;
        p.lambda = lambda;
        FileSpec file{name, {"eta_over_eps0", "eta", "P", "error"}, {}};
        for (double x : linspace(1.0, 25.0, 49)) {
            PointTask t;
            t.params = p;
            t.params.eta = x * eps0;
            t.keys = {x, t.params.eta};
            t.observables = {"kz_probability"};
            file.rows.push_back(tasks.size());
            tasks.push_back(t);
        }
        files.push_back(file);
        man["curves"].push_back({{"file", name},
                                 {"resolved_params", params_json(p)},
                                 {"axis", {{"name", "eta_over_eps0"},
                                           {"min", 1.0},
                                           {"max", 25.0},
                                           {"count", 49}}}});
    }
    return execute(tasks, files, out_dir, jobs, man, {});
}

SweepSummary run_fig4(const std::string& out_dir, int jobs) {
    const std::vector<std::pair<double, std::string>> curves = {
        {0.45, "fig4_g_0.45.csv"},
        {0.48, "fig4_g_0.48.csv"},
        {0.495, "fig4_g_0.495.csv"}};

    std::vector<PointTask> tasks;
    std::vector<FileSpec> files;
    nlohmann::json man;
    man["preset"] = "fig4";
    man["curves"] = nlohmann::json::array();

    for (const auto& [g, name] : curves) {
        SystemParams p;
        p.g = g;
        p.lambda = 0.002;
        p.gamma0 = 0.001;
        // Sidebands are chosen per point: a single truncation picked at the
        // main resonance would be probed exactly where the weakly damped
        // system is parametrically unstable.  The grid starts at 0.05 so
        // that the emission line stays reachable within the sideband cap.
        FileSpec file{name, {"eta", "flux", "error"}, {}};
        for (double eta : linspace(0.05, 0.75, 150)) {
            PointTask t;
            t.keys = {eta};
            t.params = p;
            t.params.eta = eta;
            t.solver.m = -1;
            t.observables = {"flux"};
            file.rows.push_back(tasks.size());
            tasks.push_back(t);
        }
        files.push_back(file);
        man["curves"].push_back({{"file", name},
                                 {"resolved_params", params_json(p)},
                                 {"m", "auto"},
                                 {"axis", {{"name", "eta"},
                                           {"min", 0.05},
                                           {"max", 0.75},
                                           {"count", 150}}}});
    }
    return execute(tasks, files, out_dir, jobs, man, {});
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x,
                                   std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::vector<std::string> figure_presets() {
    return {"fig1a", "fig1b", "fig2", "fig3b", "fig4"};
}

SweepSummary run_figure(const std::string& preset, const std::string& out_dir,
                        int jobs) {
    if (preset == "fig1a") return run_fig1a(out_dir, jobs);
    if (preset == "fig1b") return run_fig1b(out_dir, jobs);
    if (preset == "fig2") return run_fig2(out_dir, jobs);
    if (preset == "fig3b") return run_fig3b(out_dir, jobs);
    if (preset == "fig4") return run_fig4(out_dir, jobs);
    throw ConfigError("unknown figure preset: " + preset);
}

SweepSummary run_custom(const RunConfig& cfg, const std::string& out_dir,
                        int jobs) {
    std::vector<std::vector<double>> axis_values;
    for (const auto& ax : cfg.axes) axis_values.push_back(ax.values());

    std::vector<PointTask> tasks;
    FileSpec file;
    file.name = cfg.stem + ".csv";
    for (const auto& ax : cfg.axes) file.header.push_back(ax.name);
    for (const auto& obs : cfg.observables) file.header.push_back(obs);
    file.header.push_back("error");

    auto push_task = [&](const std::vector<double>& keys) {
        PointTask t;
        t.keys = keys;
        t.params = cfg.params;
        for (std::size_t i = 0; i < keys.size(); ++i) {
            const std::string& name = cfg.axes[i].name;
            if (name == "omega_a") t.params.omega_a = keys[i];
            else if (name == "omega_0") t.params.omega_0 = keys[i];
            else if (name == "lambda") t.params.lambda = keys[i];
            else if (name == "eta") t.params.eta = keys[i];
            else if (name == "g") t.params.g = keys[i];
            else if (name == "gamma0") t.params.gamma0 = keys[i];
            else if (name == "tau0") t.params.tau0 = keys[i];
            else if (name == "n_atoms") t.params.n_atoms = keys[i];
        }
        t.solver = cfg.solver;
        t.observables = cfg.observables;
        file.rows.push_back(tasks.size());
        tasks.push_back(t);
    };

    if (cfg.axes.empty()) {
        push_task({});
    } else if (cfg.axes.size() == 1) {
        for (double a : axis_values[0]) push_task({a});
    } else {
        for (double a : axis_values[0]) {
            for (double b : axis_values[1]) push_task({a, b});
        }
    }

    nlohmann::json man;
    man["config"] = config_to_json(cfg);
    man["resolved_params"] = params_json(cfg.params);
    return execute(tasks, {file}, out_dir, jobs, man, {});
}

}  // namespace dicke
