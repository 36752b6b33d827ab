#include <CLI11.hpp>
#include <iostream>
#include <thread>

#include "dickesim/config.hpp"
#include "dickesim/floquet.hpp"
#include "dickesim/kz.hpp"
#include "dickesim/model.hpp"
#include "dickesim/observables.hpp"
#include "dickesim/sweeps.hpp"
#include "dickesim/time_domain.hpp"
#include "dickesim/version.hpp"

namespace {

int summarize(const dicke::SweepSummary& s) {
    for (const auto& f : s.files) std::cout << "wrote " << f << "\n";
    std::cout << s.n_points - s.n_failed << "/" << s.n_points
              << " points succeeded\n";
    if (s.n_points > 0 && s.n_failed == s.n_points) return 2;
    if (s.n_failed > 0) return 3;
    return 0;
}

int validate(const std::string& config_path) {
    const dicke::RunConfig cfg = dicke::load_config(config_path);
    std::cout << "PASS config parsed: " << config_path << "\n";

    // Normal phase must hold at every corner of the sweep domain.
    std::vector<dicke::SystemParams> corners{cfg.params};
    for (const auto& ax : cfg.axes) {
        std::vector<dicke::SystemParams> next;
        for (dicke::SystemParams p : corners) {
            for (double v : {ax.min, ax.max}) {
                if (ax.name == "omega_a") p.omega_a = v;
                else if (ax.name == "omega_0") p.omega_0 = v;
                else if (ax.name == "lambda") p.lambda = v;
                else if (ax.name == "eta") p.eta = v;
                else if (ax.name == "g") p.g = v;
                else if (ax.name == "gamma0") p.gamma0 = v;
                else if (ax.name == "tau0") p.tau0 = v;
                else if (ax.name == "n_atoms") p.n_atoms = v;
                next.push_back(p);
            }
        }
        corners = next;
    }
    for (const auto& p : corners) {
        p.validate();
        if (!dicke::normal_phase_check(p)) {
            std::cout << "FAIL normal phase violated at g = " << p.g
                      << ", lambda = " << p.lambda << "\n";
            throw dicke::ConfigError(
                "sweep domain leaves the normal phase; reduce g or lambda");
        }
    }
    std::cout << "PASS normal phase over the whole sweep domain\n";

    const dicke::SystemParams& p = cfg.params;
    const dicke::NormalModes nm =
        dicke::normal_modes_static(p.omega_a, p.omega_0, p.g);
    std::cout << "PASS branch frequencies at mean detuning: eps_minus = "
              << nm.eps_minus << ", eps_plus = " << nm.eps_plus << "\n";

    if (p.gamma0 > 0.0) {
        const dicke::DampingModel d{p.gamma0};
        const auto gf = dicke::green_function(
            dicke::assemble(p, d, 0.5 * nm.eps_minus + 0.01, 1));
        std::cout << "PASS response solve residual " << gf.residual << "\n";
        const Eigen::Matrix4cd vac = dicke::dressed_vacuum_moments(p, d);
        const double nb = vac(3, 1).real();
        const dicke::HpValidity hp = dicke::hp_validity_check(nb, p);
        std::cout << (hp.ok ? "PASS" : "WARN")
                  << " bosonic-ensemble check: ground-state <b^dag b> = " << nb
                  << ", ratio to n_atoms = " << hp.ratio << "\n";
    } else {
        std::cout << "WARN gamma0 = 0: flux and photon observables are "
                     "undefined without damping\n";
    }

    if (p.lambda == 0.0) {
        std::cout << "NOTE lambda = 0: radiated flux vanishes identically\n";
    } else {
        const dicke::GapMinimum gm = dicke::gap_minimum(p);
        std::cout << "PASS adiabatic threshold (minimal gap) = " << gm.eps_min
                  << " at t = " << gm.t_min << "\n";
    }
    for (const auto& obs : cfg.observables) {
        if (obs == "kz_probability") {
            if (auto w = dicke::kz_regime_warning(p)) {
                std::cout << "WARN " << *w << "\n";
            }
        }
    }
    std::cout << "validate: OK\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency-domain simulator for a damped, periodically "
                 "driven two-mode quadratic model"};
    app.set_version_flag("--version", dicke::kVersion);
    app.require_subcommand(1);

    std::string out_dir = "out";
    std::string preset;
    std::string config_path;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;

    CLI::App* fig = app.add_subcommand("figure", "Run a built-in preset");
    fig->add_option("preset", preset, "one of: fig1a fig1b fig2 fig3b fig4")
        ->required();
    fig->add_option("--out", out_dir, "output directory (default: out)");
    fig->add_option("--jobs", jobs, "worker threads");

    CLI::App* sweep =
        app.add_subcommand("sweep", "Run a sweep described by a JSON config");
    sweep->add_option("--config", config_path, "JSON config file")->required();
    sweep->add_option("--out", out_dir, "output directory (default: out)");
    sweep->add_option("--jobs", jobs, "worker threads");

    CLI::App* val =
        app.add_subcommand("validate", "Check a config without running it");
    val->add_option("--config", config_path, "JSON config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (fig->parsed()) {
            return summarize(dicke::run_figure(preset, out_dir, jobs));
        }
        if (sweep->parsed()) {
            return summarize(
                dicke::run_custom(dicke::load_config(config_path), out_dir, jobs));
        }
        if (val->parsed()) {
            return validate(config_path);
        }
    } catch (const dicke::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const dicke::Error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
