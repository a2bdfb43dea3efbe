#pragma once

#include "nlcs/lindblad.hpp"
#include "nlcs/states.hpp"

namespace nlcs {

struct VerificationReport {
    Parity parity = Parity::even;
    double alpha = 0.0;
    double fidelity = 0.0;
    double threshold = 0.999;
    double analytic_tail_mass = 0.0;
    bool converged = false;
    bool passed = false;
    SteadyStateDiagnostics diag;
};

/// Dynamical cross-check of the analytic states: integrate the master equation
/// from ground (x) |0> (even) or ground (x) |1> (odd) and compare the steady
/// state against the recurrence-built nonlinear coherent state.
inline VerificationReport run_steady_state_verification(const DriveParams& params, Parity parity,
                                                        double tol = 1e-8, double t_max = 40000.0,
                                                        double threshold = 0.999,
                                                        Rk45Controls controls = {}) {
    params.validate();
    VerificationReport report;
    report.parity = parity;
    report.alpha = params.alpha();
    report.threshold = threshold;

    const FockVector start = fock_basis_state(params.dim, parity == Parity::even ? 0 : 1);
    const VibronicDensityMatrix rho0 = VibronicDensityMatrix::pure(1, start);
    auto [rho, diag] = evolve_to_steady_state(rho0, params, tol, t_max, controls);

    const FockVector target = (parity == Parity::even)
                                  ? build_even_nlcs(nlcs_params_from_drive(params, parity))
                                  : build_odd_nlcs(nlcs_params_from_drive(params, parity));
    report.analytic_tail_mass = target.tail_mass;
    report.fidelity = fidelity(rho, target, 1);
    report.converged = diag.converged;
    report.passed = diag.converged && report.fidelity >= threshold;
    report.diag = diag;
    return report;
}

}  // namespace nlcs
