#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlcs/csv.hpp"
#include "nlcs/nonlinearity.hpp"
#include "nlcs/observables.hpp"
#include "nlcs/states.hpp"

namespace nlcs {

enum class SweepQuantity { delta_p_sq, mandel_q, pn };

/// Parameter grid and output channel for the figure-reproduction commands.
struct SweepSpec {
    SweepQuantity quantity = SweepQuantity::delta_p_sq;
    Parity parity = Parity::even;
    std::vector<double> eta_grid;
    double omega_ratio = 1e-3;
    int dim = 32;
    std::string output_path;

    void validate() const {
        if (eta_grid.empty()) throw std::invalid_argument("SweepSpec: empty eta grid");
        double prev = 0.0;
        for (double e : eta_grid) {
            if (e <= prev) throw std::invalid_argument("SweepSpec: eta grid must be strictly positive and increasing");
            prev = e;
        }
        if (omega_ratio <= 0.0) throw std::invalid_argument("SweepSpec: omega_ratio must be > 0");
        if (dim < 4) throw std::invalid_argument("SweepSpec: dim must be >= 4");
    }
};

inline std::vector<double> log_spaced(double lo, double hi, int count) {
    if (lo <= 0.0 || hi <= lo || count < 2) throw std::invalid_argument("log_spaced: need 0 < lo < hi, count >= 2");
    std::vector<double> g(static_cast<std::size_t>(count));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i)
        g[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (count - 1.0));
    g.front() = lo;
    g.back() = hi;
    return g;
}

struct ScalarSweepRow {
    double eta = 0.0;
    double alpha = 0.0;
    double value = std::numeric_limits<double>::quiet_NaN();
    double tail_mass = std::numeric_limits<double>::quiet_NaN();
    bool singular = false;  // flagged row: F(n) pole at this grid point
};

struct OccupationRow {
    double eta = 0.0;
    int n = 0;
    double pn = 0.0;
    double tail_mass = 0.0;
};

namespace detail {

template <class Compute>
std::vector<ScalarSweepRow> run_scalar_sweep(const SweepSpec& spec, const std::vector<double>& ratios,
                                             Parity parity, Compute&& compute) {
    spec.validate();
    std::vector<ScalarSweepRow> rows;
    rows.reserve(ratios.size() * spec.eta_grid.size());
    for (double ratio : ratios) {
        if (ratio <= 0.0) throw std::invalid_argument("sweep: omega ratio must be > 0");
        for (double eta : spec.eta_grid) {
            ScalarSweepRow row;
            row.eta = eta;
            row.alpha = ratio / (eta * eta);
            try {
                const auto profile = NonlinearityProfile::trapped_ion(eta, static_cast<std::size_t>(spec.dim));
                const NlcsParams params{Complex(row.alpha, 0.0), profile, parity, spec.dim};
                const FockVector psi =
                    (parity == Parity::even) ? build_even_nlcs(params) : build_odd_nlcs(params);
                row.value = compute(psi);
                row.tail_mass = psi.tail_mass;
            } catch (const SingularityError&) {
                row.singular = true;  // flagged, run continues
            }
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace detail

/// p-quadrature uncertainty of the even state across the eta grid, one block
/// of rows per ratio.
inline std::vector<ScalarSweepRow> run_fig1(const SweepSpec& spec, const std::vector<double>& ratios) {
    if (spec.parity != Parity::even) throw std::invalid_argument("fig1: parity must be even");
    if (spec.quantity != SweepQuantity::delta_p_sq) throw std::invalid_argument("fig1: quantity must be delta_p_sq");
    return detail::run_scalar_sweep(spec, ratios, Parity::even,
                                    [](const FockVector& psi) { return quadrature_variance_p(psi); });
}

inline std::vector<ScalarSweepRow> run_fig1(const SweepSpec& spec) {
    return run_fig1(spec, {spec.omega_ratio});
}

/// Occupation number distribution of the even state for the given eta values.
inline std::vector<OccupationRow> run_fig2(const std::vector<double>& eta_list, double omega_ratio,
                                           int dim = 32) {
    SweepSpec spec;
    spec.quantity = SweepQuantity::pn;
    spec.eta_grid = eta_list;
    spec.omega_ratio = omega_ratio;
    spec.dim = dim;
    spec.validate();
    std::vector<OccupationRow> rows;
    rows.reserve(eta_list.size() * static_cast<std::size_t>(dim));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double eta : eta_list) {
        const double alpha = omega_ratio / (eta * eta);
        try {
            const auto profile = NonlinearityProfile::trapped_ion(eta, static_cast<std::size_t>(dim));
            const NlcsParams params{Complex(alpha, 0.0), profile, Parity::even, dim};
            const FockVector psi = build_even_nlcs(params);
            const auto pn = occupation_distribution(psi);
            for (int n = 0; n < dim; ++n)
                rows.push_back(OccupationRow{eta, n, pn[static_cast<std::size_t>(n)], psi.tail_mass});
        } catch (const SingularityError&) {
            for (int n = 0; n < dim; ++n) rows.push_back(OccupationRow{eta, n, nan, nan});
        }
    }
    return rows;
}

/// Mandel q of the odd state across the eta grid.
inline std::vector<ScalarSweepRow> run_fig3(const SweepSpec& spec, const std::vector<double>& ratios) {
    if (spec.parity != Parity::odd) throw std::invalid_argument("fig3: parity must be odd");
    if (spec.quantity != SweepQuantity::mandel_q) throw std::invalid_argument("fig3: quantity must be mandel_q");
    return detail::run_scalar_sweep(spec, ratios, Parity::odd,
                                    [](const FockVector& psi) { return mandel_q(psi); });
}

inline std::vector<ScalarSweepRow> run_fig3(const SweepSpec& spec) {
    return run_fig3(spec, {spec.omega_ratio});
}

inline void write_scalar_csv(std::ostream& os, const std::vector<ScalarSweepRow>& rows,
                             const std::string& value_column) {
    os << "eta,alpha," << value_column << ",tail_mass\n";
    for (const auto& r : rows) {
        os << format_csv(r.eta) << ',' << format_csv(r.alpha) << ',' << format_csv(r.value) << ','
           << format_csv(r.tail_mass) << '\n';
    }
}

inline void write_occupation_csv(std::ostream& os, const std::vector<OccupationRow>& rows) {
    os << "eta,n,pn,tail_mass\n";
    for (const auto& r : rows) {
        os << format_csv(r.eta) << ',' << format_csv(r.n) << ',' << format_csv(r.pn) << ','
           << format_csv(r.tail_mass) << '\n';
    }
}

// Spec'd figure defaults: fig1/fig3 sweep eta in [0.005, 0.5] with 100
// log-spaced points; fig2 uses the four captioned eta values.
inline SweepSpec default_fig1_spec() {
    SweepSpec s;
    s.quantity = SweepQuantity::delta_p_sq;
    s.parity = Parity::even;
    s.eta_grid = log_spaced(0.005, 0.5, 100);
    s.omega_ratio = 1e-3;
    return s;
}

inline SweepSpec default_fig3_spec() {
    SweepSpec s;
    s.quantity = SweepQuantity::mandel_q;
    s.parity = Parity::odd;
    s.eta_grid = log_spaced(0.005, 0.5, 100);
    s.omega_ratio = 1e-3;
    return s;
}

inline std::vector<double> default_fig2_etas() { return {0.008, 0.012, 0.02, 0.1}; }

}  // namespace nlcs
