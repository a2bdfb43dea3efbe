#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nlcs/config.hpp"
#include "nlcs/csv.hpp"
#include "nlcs/lindblad.hpp"
#include "nlcs/observables.hpp"
#include "nlcs/states.hpp"
#include "nlcs/sweep.hpp"
#include "nlcs/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitFidelity = 3;
constexpr int kExitNonConvergence = 4;

std::string recoil_to_string(nlcs::RecoilKind k) {
    switch (k) {
        case nlcs::RecoilKind::none: return "none";
        case nlcs::RecoilKind::isotropic: return "isotropic";
        default: return "dipole";
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw nlcs::ConfigError("cannot open output file '" + path + "'");
    out << content;
}

struct FigCli {
    std::string out;
    std::string config;
    int dim = 0;
    std::vector<double> ratios;
    std::vector<double> etas;
    double eta_min = 0.0, eta_max = 0.0;
    int eta_count = 0;
};

// defaults < config file < explicit flags
nlcs::SweepConfig resolve_sweep(const FigCli& cli, const CLI::App* sub, nlcs::SweepConfig base) {
    if (!cli.config.empty()) base = nlcs::load_sweep_config(cli.config, base);
    if (sub->count("--dim")) base.spec.dim = cli.dim;
    if (sub->count("--ratio")) {
        base.ratios = cli.ratios;
        base.spec.omega_ratio = cli.ratios.front();
    }
    if (sub->count("--eta")) {
        base.spec.eta_grid = cli.etas;
    } else if (sub->count("--eta-min") || sub->count("--eta-max") || sub->count("--eta-count")) {
        if (!(sub->count("--eta-min") && sub->count("--eta-max") && sub->count("--eta-count")))
            throw nlcs::ConfigError("--eta-min, --eta-max and --eta-count must be given together");
        base.spec.eta_grid = nlcs::log_spaced(cli.eta_min, cli.eta_max, cli.eta_count);
    }
    if (sub->count("--out")) base.spec.output_path = cli.out;
    if (base.spec.output_path.empty()) throw nlcs::ConfigError("no output path given");
    return base;
}

void add_fig_options(CLI::App* sub, FigCli& cli, bool multi_ratio) {
    sub->add_option("--out", cli.out, "Output CSV path");
    sub->add_option("--config", cli.config, "JSON config file");
    sub->add_option("--dim", cli.dim, "Fock-space truncation dimension");
    auto* ratio = sub->add_option("--ratio", cli.ratios, "Omega0/Omega1 drive ratio");
    if (!multi_ratio) ratio->expected(1);
    sub->add_option("--eta", cli.etas, "Explicit eta grid values");
    sub->add_option("--eta-min", cli.eta_min, "Log-spaced grid start");
    sub->add_option("--eta-max", cli.eta_max, "Log-spaced grid end");
    sub->add_option("--eta-count", cli.eta_count, "Log-spaced grid size");
}

int report_flagged(const std::vector<nlcs::ScalarSweepRow>& rows) {
    int flagged = 0;
    for (const auto& r : rows) flagged += r.singular ? 1 : 0;
    if (flagged > 0)
        std::cerr << "warning: " << flagged << " grid point(s) flagged singular (nan rows)\n";
    return flagged;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Even/odd nonlinear coherent states of a trapped, bichromatically driven ion:\n"
                 "figure sweeps (CSV), observable reports and steady-state verification."};
    app.require_subcommand(1);

    FigCli fig1_cli, fig2_cli, fig3_cli;
    auto* fig1 = app.add_subcommand("fig1", "p-quadrature uncertainty of the even state vs eta");
    add_fig_options(fig1, fig1_cli, true);
    auto* fig2 = app.add_subcommand("fig2", "occupation number distribution of the even state");
    add_fig_options(fig2, fig2_cli, false);
    auto* fig3 = app.add_subcommand("fig3", "Mandel q of the odd state vs eta");
    add_fig_options(fig3, fig3_cli, true);

    std::string v_parity = "even", v_recoil = "none", v_config, v_out;
    double v_eta = 0.1, v_ratio = 0.01, v_gamma = 0.1, v_tol = 1e-8, v_tmax = 40000.0,
           v_threshold = 0.999;
    int v_dim = 20;
    bool v_json = false;
    auto* verify = app.add_subcommand("verify", "Integrate the master equation to steady state and "
                                                "compare with the analytic state");
    verify->add_option("--parity", v_parity, "even | odd")->check(CLI::IsMember({"even", "odd"}));
    verify->add_option("--eta", v_eta, "Lamb-Dicke parameter");
    verify->add_option("--ratio", v_ratio, "Omega0/Omega1 drive ratio");
    verify->add_option("--gamma", v_gamma, "Spontaneous emission rate (units of Omega1)");
    verify->add_option("--dim", v_dim, "Fock-space truncation dimension");
    verify->add_option("--recoil", v_recoil, "none | isotropic | dipole")
        ->check(CLI::IsMember({"none", "isotropic", "dipole"}));
    verify->add_option("--tol", v_tol, "Steady-state RHS-norm tolerance");
    verify->add_option("--t-max", v_tmax, "Integration horizon (units of 1/Omega1)");
    verify->add_option("--threshold", v_threshold, "Fidelity pass threshold");
    verify->add_option("--config", v_config, "JSON config file");
    verify->add_option("--out", v_out, "Write the JSON report to a file");
    verify->add_flag("--json", v_json, "Print the report as JSON instead of text");

    std::string r_parity = "even", r_out;
    double r_eta = 0.1, r_ratio = 0.01;
    std::optional<double> r_alpha;
    int r_dim = 32;
    auto* report = app.add_subcommand("report", "Observable report of the analytic state as JSON");
    report->add_option("--parity", r_parity, "even | odd")->check(CLI::IsMember({"even", "odd"}));
    report->add_option("--eta", r_eta, "Lamb-Dicke parameter");
    report->add_option("--ratio", r_ratio, "Omega0/Omega1 drive ratio");
    report->add_option("--alpha", r_alpha, "Eigenvalue alpha (overrides --ratio)");
    report->add_option("--dim", r_dim, "Fock-space truncation dimension");
    report->add_option("--out", r_out, "Write the JSON report to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (fig1->parsed()) {
            nlcs::SweepConfig base{nlcs::default_fig1_spec(), {1e-3, 1e-4}};
            base.spec.output_path = "fig1.csv";
            const auto cfg = resolve_sweep(fig1_cli, fig1, base);
            const auto rows = nlcs::run_fig1(cfg.spec, cfg.ratios);
            std::ostringstream os;
            nlcs::write_scalar_csv(os, rows, "delta_p_sq");
            write_text_file(cfg.spec.output_path, os.str());
            report_flagged(rows);
            std::cout << "wrote " << rows.size() << " rows to " << cfg.spec.output_path << "\n";
            return kExitOk;
        }
        if (fig2->parsed()) {
            nlcs::SweepConfig base;
            base.spec.quantity = nlcs::SweepQuantity::pn;
            base.spec.parity = nlcs::Parity::even;
            base.spec.eta_grid = nlcs::default_fig2_etas();
            base.spec.omega_ratio = 1e-4;
            base.ratios = {1e-4};
            base.spec.output_path = "fig2.csv";
            const auto cfg = resolve_sweep(fig2_cli, fig2, base);
            const auto rows = nlcs::run_fig2(cfg.spec.eta_grid, cfg.spec.omega_ratio, cfg.spec.dim);
            std::ostringstream os;
            nlcs::write_occupation_csv(os, rows);
            write_text_file(cfg.spec.output_path, os.str());
            std::cout << "wrote " << rows.size() << " rows to " << cfg.spec.output_path << "\n";
            return kExitOk;
        }
        if (fig3->parsed()) {
            nlcs::SweepConfig base{nlcs::default_fig3_spec(), {1e-3}};
            base.spec.output_path = "fig3.csv";
            const auto cfg = resolve_sweep(fig3_cli, fig3, base);
            const auto rows = nlcs::run_fig3(cfg.spec, cfg.ratios);
            std::ostringstream os;
            nlcs::write_scalar_csv(os, rows, "mandel_q");
            write_text_file(cfg.spec.output_path, os.str());
            report_flagged(rows);
            std::cout << "wrote " << rows.size() << " rows to " << cfg.spec.output_path << "\n";
            return kExitOk;
        }
        if (verify->parsed()) {
            nlcs::DriveParams params;
            params.eta = v_eta;
            params.omega0 = v_ratio;
            params.omega1 = 1.0;
            params.gamma = v_gamma;
            params.dim = v_dim;
            params.recoil = nlcs::recoil_from_string(v_recoil);
            nlcs::Parity parity = nlcs::parity_from_string(v_parity);
            if (!v_config.empty()) {
                nlcs::SweepConfig base;
                base.spec.parity = parity;
                base.spec.omega_ratio = params.omega0;
                base.spec.dim = params.dim;
                base.gamma = params.gamma;
                base.recoil = params.recoil;
                base.spec.eta_grid = {params.eta};
                const auto cfg = nlcs::load_sweep_config(v_config, base);
                parity = cfg.spec.parity;
                params.omega0 = cfg.spec.omega_ratio;
                params.dim = cfg.spec.dim;
                params.gamma = cfg.gamma;
                params.recoil = cfg.recoil;
                params.eta = cfg.spec.eta_grid.front();
                // explicit flags win over the config file
                if (verify->count("--parity")) parity = nlcs::parity_from_string(v_parity);
                if (verify->count("--eta")) params.eta = v_eta;
                if (verify->count("--ratio")) params.omega0 = v_ratio;
                if (verify->count("--gamma")) params.gamma = v_gamma;
                if (verify->count("--dim")) params.dim = v_dim;
                if (verify->count("--recoil")) params.recoil = nlcs::recoil_from_string(v_recoil);
            }
            const auto rep = nlcs::run_steady_state_verification(params, parity, v_tol, v_tmax,
                                                                 v_threshold);
            nlohmann::json j{
                {"parity", parity == nlcs::Parity::even ? "even" : "odd"},
                {"eta", params.eta},
                {"omega_ratio", params.omega0 / params.omega1},
                {"gamma", params.gamma},
                {"recoil", recoil_to_string(params.recoil)},
                {"dim", params.dim},
                {"alpha", rep.alpha},
                {"fidelity", rep.fidelity},
                {"threshold", rep.threshold},
                {"converged", rep.converged},
                {"analytic_tail_mass", rep.analytic_tail_mass},
                {"rhs_norm_initial", rep.diag.rhs_norm_initial},
                {"rhs_norm_final", rep.diag.rhs_norm_final},
                {"trace_drift_max", rep.diag.trace_drift_max},
                {"herm_defect_max", rep.diag.herm_defect_max},
                {"parity_leakage_max", rep.diag.parity_leakage_max},
                {"min_eigenvalue", rep.diag.min_eigenvalue},
                {"t_final", rep.diag.t_final},
                {"steps_accepted", rep.diag.steps_accepted},
                {"steps_rejected", rep.diag.steps_rejected},
                {"wall_seconds", rep.diag.wall_seconds},
            };
            if (!v_out.empty()) write_text_file(v_out, j.dump(2) + "\n");
            if (v_json) {
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "steady-state verification (" << v_parity << ")\n"
                          << "  eta = " << params.eta << ", Omega0/Omega1 = "
                          << params.omega0 / params.omega1 << ", gamma = " << params.gamma
                          << ", dim = " << params.dim << ", recoil = "
                          << recoil_to_string(params.recoil) << "\n"
                          << "  alpha            = " << rep.alpha << "\n"
                          << "  converged        = " << (rep.converged ? "yes" : "NO") << "\n"
                          << "  fidelity         = " << rep.fidelity << " (threshold "
                          << rep.threshold << ")\n"
                          << "  rhs norm         = " << rep.diag.rhs_norm_final << " (initial "
                          << rep.diag.rhs_norm_initial << ")\n"
                          << "  trace drift max  = " << rep.diag.trace_drift_max << "\n"
                          << "  herm defect max  = " << rep.diag.herm_defect_max << "\n"
                          << "  parity leakage   = " << rep.diag.parity_leakage_max << "\n"
                          << "  min eigenvalue   = " << rep.diag.min_eigenvalue << "\n"
                          << "  t_final          = " << rep.diag.t_final << " (steps "
                          << rep.diag.steps_accepted << " accepted, " << rep.diag.steps_rejected
                          << " rejected)\n"
                          << "  wall time        = " << rep.diag.wall_seconds << " s\n";
            }
            if (!rep.converged) return kExitNonConvergence;
            if (rep.fidelity < rep.threshold) return kExitFidelity;
            return kExitOk;
        }
        if (report->parsed()) {
            const double alpha = r_alpha ? *r_alpha : r_ratio / (r_eta * r_eta);
            const auto profile =
                nlcs::NonlinearityProfile::trapped_ion(r_eta, static_cast<std::size_t>(r_dim));
            const nlcs::Parity parity = nlcs::parity_from_string(r_parity);
            const nlcs::NlcsParams params{nlcs::Complex(alpha, 0.0), profile, parity, r_dim};
            const nlcs::FockVector psi = parity == nlcs::Parity::even ? nlcs::build_even_nlcs(params)
                                                                      : nlcs::build_odd_nlcs(params);
            const auto rep = nlcs::make_report(psi);
            const nlohmann::json j{
                {"parity", r_parity}, {"eta", r_eta},
                {"alpha", alpha},     {"dim", r_dim},
                {"mean_n", rep.mean_n}, {"var_n", rep.var_n},
                {"mandel_q", rep.mandel_q}, {"delta_p_sq", rep.delta_p_sq},
                {"tail_mass", psi.tail_mass}, {"pn", rep.pn},
            };
            if (!r_out.empty()) write_text_file(r_out, j.dump(2) + "\n");
            std::cout << j.dump(2) << "\n";
            return kExitOk;
        }
    } catch (const nlcs::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const nlcs::SingularityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
