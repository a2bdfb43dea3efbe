#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nlcs/fock.hpp"
#include "nlcs/nonlinearity.hpp"

namespace nlcs {

/// Parameters of an even/odd nonlinear coherent state |alpha, F, +/->.
struct NlcsParams {
    Complex alpha;
    NonlinearityProfile profile;
    Parity parity;
    int dim;
};

namespace detail {

// Shared log-space assembly: amps[offset + 2n] = sign_n exp(lg_n + i n arg(alpha)),
// normalized afterwards. lg is the log-magnitude with the running maximum not
// yet removed; a +inf entry marks a division by a vanished F product.
inline FockVector assemble_parity_state(const std::vector<double>& lg,
                                        const std::vector<double>& sign, double phase_step,
                                        double phase_base, int offset, int dim) {
    double lmax = -std::numeric_limits<double>::infinity();
    for (double v : lg) {
        if (v > lmax) lmax = v;
        if (std::isinf(v) && v > 0.0) {
            throw SingularityError("nlcs builder: coefficient diverges (zero F in the chain)");
        }
    }
    FockVector psi(dim);
    for (std::size_t n = 0; n < lg.size(); ++n) {
        const double mag = std::exp(lg[n] - lmax);
        psi.amps[offset + 2 * static_cast<int>(n)] =
            sign[n] * std::polar(mag, phase_base + phase_step * static_cast<double>(n));
    }
    psi.normalize();
    psi.tail_mass = tail_mass_of(psi);
    return psi;
}

}  // namespace detail

/// Even nonlinear coherent state: amps[2n] proportional to
/// alpha^n / (sqrt((2n)!) F(2(n-1))!!), odd amplitudes identically zero.
inline FockVector build_even_nlcs(const NlcsParams& params) {
    if (params.parity != Parity::even)
        throw std::invalid_argument("build_even_nlcs: params.parity must be even");
    if (params.dim < 2) throw std::invalid_argument("build_even_nlcs: dim too small");
    const int nmax = (params.dim - 1) / 2;
    const double amag = std::abs(params.alpha);
    if (amag == 0.0) {
        FockVector psi = fock_basis_state(params.dim, 0);
        psi.tail_mass = 0.0;
        return psi;
    }
    const double la = std::log(amag);
    std::vector<double> lg(nmax + 1), sign(nmax + 1);
    for (int n = 0; n <= nmax; ++n) {
        const auto [plg, psg] = params.profile.log_even_product(static_cast<std::size_t>(n));
        lg[n] = n * la - 0.5 * std::lgamma(2.0 * n + 1.0) - plg;
        sign[n] = psg;
    }
    return detail::assemble_parity_state(lg, sign, std::arg(params.alpha), 0.0, 0, params.dim);
}

/// Odd nonlinear coherent state: amps[2n+1] proportional to
/// alpha^n / (sqrt((2n+1)!) F(2n-1)!!), even amplitudes identically zero.
inline FockVector build_odd_nlcs(const NlcsParams& params) {
    if (params.parity != Parity::odd)
        throw std::invalid_argument("build_odd_nlcs: params.parity must be odd");
    if (params.dim < 2) throw std::invalid_argument("build_odd_nlcs: dim too small");
    const int nmax = (params.dim - 2) / 2;
    const double amag = std::abs(params.alpha);
    if (amag == 0.0) {
        FockVector psi = fock_basis_state(params.dim, 1);
        psi.tail_mass = 0.0;
        return psi;
    }
    const double la = std::log(amag);
    std::vector<double> lg(nmax + 1), sign(nmax + 1);
    for (int n = 0; n <= nmax; ++n) {
        const auto [plg, psg] = params.profile.log_odd_product(static_cast<std::size_t>(n));
        lg[n] = n * la - 0.5 * std::lgamma(2.0 * n + 2.0) - plg;
        sign[n] = psg;
    }
    return detail::assemble_parity_state(lg, sign, std::arg(params.alpha), 0.0, 1, params.dim);
}

/// Even coherent state (|alpha> + |-alpha>)/norm: amps[2n] = N alpha^{2n}/sqrt((2n)!).
inline FockVector build_ecs(Complex alpha, int dim) {
    if (dim < 2) throw std::invalid_argument("build_ecs: dim too small");
    const double amag = std::abs(alpha);
    if (amag == 0.0) {
        FockVector psi = fock_basis_state(dim, 0);
        psi.tail_mass = 0.0;
        return psi;
    }
    const int nmax = (dim - 1) / 2;
    const double la = std::log(amag);
    std::vector<double> lg(nmax + 1), sign(nmax + 1, 1.0);
    for (int n = 0; n <= nmax; ++n) lg[n] = 2.0 * n * la - 0.5 * std::lgamma(2.0 * n + 1.0);
    return detail::assemble_parity_state(lg, sign, 2.0 * std::arg(alpha), 0.0, 0, dim);
}

/// Odd coherent state (|alpha> - |-alpha>)/norm: amps[2n+1] = N alpha^{2n+1}/sqrt((2n+1)!).
inline FockVector build_ocs(Complex alpha, int dim) {
    if (dim < 2) throw std::invalid_argument("build_ocs: dim too small");
    const double amag = std::abs(alpha);
    if (amag == 0.0) {
        throw std::domain_error("build_ocs: alpha = 0 has vanishing sinh normalization");
    }
    const int nmax = (dim - 2) / 2;
    const double la = std::log(amag);
    std::vector<double> lg(nmax + 1), sign(nmax + 1, 1.0);
    for (int n = 0; n <= nmax; ++n) lg[n] = (2.0 * n + 1.0) * la - 0.5 * std::lgamma(2.0 * n + 2.0);
    return detail::assemble_parity_state(lg, sign, 2.0 * std::arg(alpha), std::arg(alpha), 1, dim);
}

/// || F(n_hat) a^2 |psi> - alpha |psi> || over levels 0..dim-3; the top two
/// levels are excluded because truncation corrupts a^2 there.
inline double eigen_residual(const FockVector& psi, const NlcsParams& params) {
    const int dim = psi.dim();
    if (params.dim != dim) check_same_dim(params.dim, dim, "eigen_residual");
    double s = 0.0;
    for (int n = 0; n + 2 < dim; ++n) {
        const double f = params.profile.value(static_cast<std::size_t>(n));
        const Complex r =
            f * std::sqrt((n + 1.0) * (n + 2.0)) * psi.amps[n + 2] - params.alpha * psi.amps[n];
        s += std::norm(r);
    }
    return std::sqrt(s);
}

}  // namespace nlcs
