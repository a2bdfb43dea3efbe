#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nlcs/fock.hpp"

namespace nlcs {

inline std::vector<double> occupation_distribution(const FockVector& psi) {
    std::vector<double> pn(static_cast<std::size_t>(psi.dim()));
    for (int n = 0; n < psi.dim(); ++n) pn[static_cast<std::size_t>(n)] = std::norm(psi.amps[n]);
    return pn;
}

inline double mean_photon_number(const FockVector& psi) {
    double m = 0.0;
    for (int n = 0; n < psi.dim(); ++n) m += n * std::norm(psi.amps[n]);
    return m;
}

/// Variance of n as sum of pn (n - mean)^2, which cannot go negative.
inline double photon_number_variance(const FockVector& psi) {
    const double mean = mean_photon_number(psi);
    double v = 0.0;
    for (int n = 0; n < psi.dim(); ++n) v += std::norm(psi.amps[n]) * (n - mean) * (n - mean);
    return v;
}

/// Mandel q = (<n^2> - <n>^2)/<n> - 1; negative marks sub-Poissonian statistics.
inline double mandel_q(const FockVector& psi) {
    const double mean = mean_photon_number(psi);
    if (mean <= 0.0) throw std::domain_error("mandel_q: undefined for <n> = 0");
    return photon_number_variance(psi) / mean - 1.0;
}

/// <a^2> summed over levels that a^2 maps inside the truncated space.
inline Complex a_squared_expectation(const FockVector& psi) {
    Complex s = 0.0;
    for (int n = 0; n + 2 < psi.dim(); ++n) {
        s += std::conj(psi.amps[n]) * psi.amps[n + 2] * std::sqrt((n + 1.0) * (n + 2.0));
    }
    return s;
}

/// <(dp)^2> = (1 + 2<n> - 2 Re<a^2>)/2 for states of definite parity, where
/// <a> = <a^dag> = 0 makes the two-moment form exact. Refuses anything else.
inline double quadrature_variance_p(const FockVector& psi) {
    if (!state_parity(psi).has_value()) {
        throw std::invalid_argument(
            "quadrature_variance_p: state has no definite parity, <a> != 0 invalidates the formula");
    }
    const double n_mean = mean_photon_number(psi);
    const double re_a2 = a_squared_expectation(psi).real();
    return 0.5 * (1.0 + 2.0 * n_mean - 2.0 * re_a2);
}

/// Nonclassicality summary for a parity state.
struct ObservableReport {
    double mean_n = 0.0;
    double var_n = 0.0;
    double mandel_q = 0.0;
    double delta_p_sq = 0.0;
    std::vector<double> pn;
};

inline ObservableReport make_report(const FockVector& psi) {
    ObservableReport r;
    r.mean_n = mean_photon_number(psi);
    r.var_n = photon_number_variance(psi);
    r.mandel_q = nlcs::mandel_q(psi);
    r.delta_p_sq = quadrature_variance_p(psi);
    r.pn = occupation_distribution(psi);
    return r;
}

}  // namespace nlcs
