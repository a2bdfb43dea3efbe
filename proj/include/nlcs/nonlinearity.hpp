#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlcs/laguerre.hpp"

namespace nlcs {

/// Thrown when a nonlinearity value sits on (or numerically at) a pole:
/// a Laguerre zero in the trapped-ion profile, or a zero F(n) hit by a
/// coefficient chain.
class SingularityError : public std::runtime_error {
  public:
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

constexpr double kDefaultDenominatorFloor = 1e-12;

/// Trapped-ion nonlinearity F(n) = L_n^2(eta^2) / [(n+1)(n+2) L_n^0(eta^2)].
inline double trapped_ion_f(int n, double eta, double floor = kDefaultDenominatorFloor) {
    if (n < 0) throw std::domain_error("trapped_ion_f: require n >= 0");
    if (eta <= 0.0) throw std::domain_error("trapped_ion_f: require eta > 0");
    const double x = eta * eta;
    const double l0 = laguerre(n, 0, x);
    if (std::abs(l0) < floor) {
        throw SingularityError("trapped_ion_f: L_n^0(eta^2) vanishes at n=" + std::to_string(n) +
                               ", eta=" + std::to_string(eta));
    }
    return laguerre(n, 2, x) / ((n + 1.0) * (n + 2.0) * l0);
}

enum class ProfileKind { trapped_ion, constant, squeezed_vacuum, squeezed_first_excited, custom_table };

/// Tabulated nonlinearity F(n), n = 0..dim-1, with the double-factorial-style
/// cumulative products F(2(n-1))!! and F(2n-1)!! precomputed at construction.
class NonlinearityProfile {
  public:
    static NonlinearityProfile trapped_ion(double eta, std::size_t size,
                                           double floor = kDefaultDenominatorFloor) {
        if (eta <= 0.0) throw std::domain_error("NonlinearityProfile: require eta > 0");
        const double x = eta * eta;
        std::vector<double> v(size);
        for (std::size_t n = 0; n < size; ++n) {
            const double l0 = laguerre(static_cast<int>(n), 0, x);
            const double l2 = laguerre(static_cast<int>(n), 2, x);
            if (std::abs(l0) < floor || std::abs(l2) < floor) {
                throw SingularityError("NonlinearityProfile: Laguerre zero inside table at n=" +
                                       std::to_string(n) + ", eta=" + std::to_string(eta));
            }
            v[n] = l2 / ((n + 1.0) * (n + 2.0) * l0);
        }
        return NonlinearityProfile(ProfileKind::trapped_ion, eta, std::move(v));
    }

    static NonlinearityProfile constant(double c, std::size_t size) {
        return NonlinearityProfile(ProfileKind::constant, 0.0, std::vector<double>(size, c));
    }

    /// F(n) = 1/(1+n); its even nonlinear coherent state is a squeezed vacuum.
    static NonlinearityProfile squeezed_vacuum(std::size_t size) {
        std::vector<double> v(size);
        for (std::size_t n = 0; n < size; ++n) v[n] = 1.0 / (1.0 + n);
        return NonlinearityProfile(ProfileKind::squeezed_vacuum, 0.0, std::move(v));
    }

    /// F(n) = 1/(2+n); its odd nonlinear coherent state is a squeezed |1>.
    static NonlinearityProfile squeezed_first_excited(std::size_t size) {
        std::vector<double> v(size);
        for (std::size_t n = 0; n < size; ++n) v[n] = 1.0 / (2.0 + n);
        return NonlinearityProfile(ProfileKind::squeezed_first_excited, 0.0, std::move(v));
    }

    static NonlinearityProfile custom(std::vector<double> values) {
        return NonlinearityProfile(ProfileKind::custom_table, 0.0, std::move(values));
    }

    ProfileKind kind() const { return kind_; }
    double eta() const { return eta_; }
    std::size_t size() const { return values_.size(); }

    double value(std::size_t n) const {
        if (n >= values_.size()) {
            throw std::out_of_range("NonlinearityProfile: index " + std::to_string(n) +
                                    " beyond table of size " + std::to_string(values_.size()));
        }
        return values_[n];
    }

    const std::vector<double>& values() const { return values_; }

    // Log-magnitude and sign of F(2(n-1))!! = F(0)F(2)...F(2(n-1)).
    // A zero factor is carried as log = -inf; chains that reach it must refuse.
    std::pair<double, double> log_even_product(std::size_t n) const {
        if (n >= even_log_.size()) {
            throw std::out_of_range("NonlinearityProfile: even product needs F(" +
                                    std::to_string(2 * n - 2) + ") beyond table");
        }
        return {even_log_[n], even_sign_[n]};
    }

    std::pair<double, double> log_odd_product(std::size_t n) const {
        if (n >= odd_log_.size()) {
            throw std::out_of_range("NonlinearityProfile: odd product needs F(" +
                                    std::to_string(2 * n - 1) + ") beyond table");
        }
        return {odd_log_[n], odd_sign_[n]};
    }

    std::size_t max_even_chain() const { return even_log_.size(); }
    std::size_t max_odd_chain() const { return odd_log_.size(); }

  private:
    NonlinearityProfile(ProfileKind kind, double eta, std::vector<double> values)
        : kind_(kind), eta_(eta), values_(std::move(values)) {
        // cumulative products in log space, O(dim) once per profile
        even_log_.push_back(0.0);
        even_sign_.push_back(1.0);
        for (std::size_t idx = 0; idx < values_.size(); idx += 2) {
            even_log_.push_back(even_log_.back() + std::log(std::abs(values_[idx])));
            even_sign_.push_back(even_sign_.back() * (values_[idx] < 0.0 ? -1.0 : 1.0));
        }
        odd_log_.push_back(0.0);
        odd_sign_.push_back(1.0);
        for (std::size_t idx = 1; idx < values_.size(); idx += 2) {
            odd_log_.push_back(odd_log_.back() + std::log(std::abs(values_[idx])));
            odd_sign_.push_back(odd_sign_.back() * (values_[idx] < 0.0 ? -1.0 : 1.0));
        }
    }

    ProfileKind kind_;
    double eta_;
    std::vector<double> values_;
    std::vector<double> even_log_, odd_log_;
    std::vector<double> even_sign_, odd_sign_;
};

/// F(2(n-1))!! = F(0)F(2)...F(2(n-1)); unity when the top argument is <= 0.
inline double f_even_product(const NonlinearityProfile& profile, int n) {
    if (n <= 0) return 1.0;
    auto [lg, sign] = profile.log_even_product(static_cast<std::size_t>(n));
    return sign * std::exp(lg);
}

/// F(2n-1)!! = F(1)F(3)...F(2n-1); unity when the top argument is <= 0.
inline double f_odd_product(const NonlinearityProfile& profile, int n) {
    if (n <= 0) return 1.0;
    auto [lg, sign] = profile.log_odd_product(static_cast<std::size_t>(n));
    return sign * std::exp(lg);
}

}  // namespace nlcs
