#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nlcs/fock.hpp"
#include "nlcs/nonlinearity.hpp"
#include "nlcs/rk45.hpp"
#include "nlcs/states.hpp"

namespace nlcs {

inline double state_norm(const VibronicDensityMatrix& rho) { return rho.frobenius_norm(); }

enum class RecoilKind { none, isotropic, dipole };

/// Drive configuration of the trapped, bichromatically driven ion. Rates are
/// in units of the sideband Rabi frequency (omega1 = 1, hbar = 1).
struct DriveParams {
    double eta = 0.1;
    double omega0 = 0.01;
    double omega1 = 1.0;
    double gamma = 0.1;
    RecoilKind recoil = RecoilKind::none;
    int dim = 20;

    double alpha() const { return omega0 / (omega1 * eta * eta); }

    void validate() const {
        if (eta <= 0.0) throw std::invalid_argument("DriveParams: require eta > 0");
        if (omega1 <= 0.0) throw std::invalid_argument("DriveParams: require omega1 > 0");
        if (gamma < 0.0) throw std::invalid_argument("DriveParams: require gamma >= 0");
        if (!std::isfinite(alpha())) throw std::invalid_argument("DriveParams: alpha not finite");
        if (dim < 4) throw std::invalid_argument("DriveParams: require dim >= 4");
    }
};

/// The effective coupling operator F_hat of the post-RWA interaction picture:
///   F = sum_k (i eta)^{2k+2}/(k!(k+2)!) adag^k a^{k+2}
///     + (omega0/omega1) sum_k (i eta)^{2k}/(k!)^2 adag^k a^k.
/// On the truncated space both series end at k = n; the matrix is real with
/// nonzero entries only on the main diagonal and the second superdiagonal.
struct FHatOperator {
    Eigen::MatrixXcd matrix;
    int dim() const { return static_cast<int>(matrix.rows()); }
};

inline FHatOperator build_f_hat(const DriveParams& params) {
    params.validate();
    const int dim = params.dim;
    const double x = params.eta * params.eta;
    const double r = params.omega0 / params.omega1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);

    // <n|F|n>: term ratio t_{k+1}/t_k = -x (n-k) / (k+1)^2
    for (int n = 0; n < dim; ++n) {
        double term = 1.0, sum = 1.0;
        for (int k = 0; k < n; ++k) {
            term *= -x * (n - k) / ((k + 1.0) * (k + 1.0));
            sum += term;
        }
        m(n, n) = r * sum;
    }
    // <n|F|n+2> = -x * sum_k v_k, v_0 = sqrt((n+1)(n+2))/2,
    // v_{k+1}/v_k = -x (n-k) / ((k+1)(k+3))
    for (int n = 0; n + 2 < dim; ++n) {
        double v = 0.5 * std::sqrt((n + 1.0) * (n + 2.0)), sum = v;
        for (int k = 0; k < n; ++k) {
            v *= -x * (n - k) / ((k + 1.0) * (k + 3.0));
            sum += v;
        }
        m(n, n + 2) = -x * sum;
    }
    return FHatOperator{std::move(m)};
}

/// Dark state of F_hat by back-substitution: zeta_{n+2} = -F_nn zeta_n / F_{n,n+2},
/// seeded from |0> (even) or |1> (odd). Independent of the Laguerre-based
/// recurrence route, which it cross-checks.
inline FockVector solve_dark_state(const FHatOperator& f, Parity parity) {
    const int dim = f.dim();
    FockVector psi(dim);
    int n = (parity == Parity::even) ? 0 : 1;
    psi.amps[n] = 1.0;
    while (n + 2 < dim) {
        const Complex denom = f.matrix(n, n + 2);
        if (std::abs(denom) == 0.0) {
            throw SingularityError("solve_dark_state: vanishing superdiagonal at n=" + std::to_string(n));
        }
        psi.amps[n + 2] = -f.matrix(n, n) / denom * psi.amps[n];
        n += 2;
        // progressive rescale so long chains cannot overflow
        if (std::abs(psi.amps[n]) > 1e100) {
            psi.amps /= std::abs(psi.amps[n]);
        }
    }
    psi.normalize();
    psi.tail_mass = tail_mass_of(psi);
    return psi;
}

inline NlcsParams nlcs_params_from_drive(const DriveParams& drive, Parity parity) {
    drive.validate();
    return NlcsParams{Complex(drive.alpha(), 0.0),
                      NonlinearityProfile::trapped_ion(drive.eta, static_cast<std::size_t>(drive.dim)),
                      parity, drive.dim};
}

/// Gauss-Legendre nodes and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order) {
    if (order < 2) throw std::invalid_argument("gauss_legendre: order must be >= 2");
    std::vector<double> x(order), w(order);
    for (int i = 0; i < (order + 1) / 2; ++i) {
        double xi = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = xi;
            for (int k = 2; k <= order; ++k) {
                const double p = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p;
            }
            dp = order * (xi * p1 - p0) / (xi * xi - 1.0);
            const double dx = p1 / dp;
            xi -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        x[i] = -xi;
        x[order - 1 - i] = xi;
        w[i] = w[order - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
    return {x, w};
}

/// Spontaneous-emission momentum-kick average
///   rho' = integral_{-1}^{1} dy W(y) e^{i eta (a + adag) y} rho e^{-i eta (a + adag) y}
/// with W a probability density on [-1, 1] (isotropic 1/2, dipole 3/8 (1+y^2)).
/// Evaluated with fixed-order Gauss-Legendre quadrature; each node's conjugation
/// is exactly unitary, so the trace is preserved node by node.
class RecoilKernel {
  public:
    RecoilKernel(int dim, double eta, RecoilKind kind, int order = 8) : kind_(kind) {
        if (kind == RecoilKind::none) return;
        const auto [nodes, gl_weights] = gauss_legendre(order);
        Eigen::MatrixXd xop = Eigen::MatrixXd::Zero(dim, dim);
        for (int n = 0; n + 1 < dim; ++n) xop(n, n + 1) = xop(n + 1, n) = std::sqrt(n + 1.0);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(xop);
        const Eigen::MatrixXd& v = es.eigenvectors();
        const Eigen::VectorXd& lam = es.eigenvalues();
        for (int i = 0; i < order; ++i) {
            const double wy = (kind == RecoilKind::isotropic)
                                  ? 0.5
                                  : 0.375 * (1.0 + nodes[i] * nodes[i]);
            Eigen::VectorXcd phases(dim);
            for (int j = 0; j < dim; ++j)
                phases[j] = std::polar(1.0, eta * nodes[i] * lam[j]);
            unitaries_.push_back(v.cast<Complex>() * phases.asDiagonal() *
                                 v.transpose().cast<Complex>());
            weights_.push_back(gl_weights[i] * wy);
        }
    }

    bool is_identity() const { return kind_ == RecoilKind::none; }

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const {
        if (is_identity()) return rho;
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
        for (std::size_t i = 0; i < unitaries_.size(); ++i) {
            out.noalias() += weights_[i] * (unitaries_[i] * rho * unitaries_[i].adjoint());
        }
        return out;
    }

  private:
    RecoilKind kind_;
    std::vector<double> weights_;
    std::vector<Eigen::MatrixXcd> unitaries_;
};

inline Eigen::MatrixXcd recoil_average(const Eigen::MatrixXcd& rho_vib, double eta, RecoilKind kind,
                                       int order = 8) {
    return RecoilKernel(static_cast<int>(rho_vib.rows()), eta, kind, order).apply(rho_vib);
}

/// Right-hand side of the vibronic master equation
///   drho/dt = -i [H', rho] + (Gamma/2)(2 s12 rho' s21 - s22 rho - rho s22),
///   H' = omega1 e^{-eta^2/2} (s21 F + s12 F^dag),
/// acting blockwise on rho_{ij}. Time is measured in units of 1/omega1.
class LindbladGenerator {
  public:
    explicit LindbladGenerator(const DriveParams& params)
        : gamma_(params.gamma),
          g_(params.omega1 * std::exp(-0.5 * params.eta * params.eta)),
          f_(build_f_hat(params).matrix),
          fd_(f_.adjoint()),
          recoil_(params.dim, params.eta, params.recoil) {}

    const Eigen::MatrixXcd& f_hat_matrix() const { return f_; }

    VibronicDensityMatrix operator()(const VibronicDensityMatrix& rho) const {
        const Complex mi{0.0, -1.0};
        const auto& r11 = rho.blocks[0][0];
        const auto& r12 = rho.blocks[0][1];
        const auto& r21 = rho.blocks[1][0];
        const auto& r22 = rho.blocks[1][1];
        VibronicDensityMatrix out(rho.dim());
        out.blocks[0][0] = mi * g_ * (fd_ * r21 - r12 * f_) + gamma_ * recoil_.apply(r22);
        out.blocks[0][1] = mi * g_ * (fd_ * r22 - r11 * fd_) - 0.5 * gamma_ * r12;
        out.blocks[1][0] = mi * g_ * (f_ * r11 - r22 * f_) - 0.5 * gamma_ * r21;
        out.blocks[1][1] = mi * g_ * (f_ * r12 - r21 * fd_) - gamma_ * r22;
        return out;
    }

  private:
    double gamma_;
    double g_;
    Eigen::MatrixXcd f_;
    Eigen::MatrixXcd fd_;
    RecoilKernel recoil_;
};

inline VibronicDensityMatrix lindblad_rhs(const VibronicDensityMatrix& rho, const DriveParams& params) {
    check_same_dim(rho.dim(), params.dim, "lindblad_rhs");
    return LindbladGenerator(params)(rho);
}

struct SteadyStateDiagnostics {
    bool converged = false;
    double t_final = 0.0;
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
    double rhs_norm_initial = 0.0;
    double rhs_norm_final = 0.0;
    double trace_drift_max = 0.0;
    double herm_defect_max = 0.0;
    double parity_leakage_max = std::numeric_limits<double>::quiet_NaN();
    double min_eigenvalue = 0.0;
    double wall_seconds = 0.0;
};

struct EvolveResult {
    VibronicDensityMatrix rho;
    SteadyStateDiagnostics diag;
};

namespace detail {

// Support classification of the initial state: all mass on even-even vibrational
// entries, all on odd-odd, or neither (no parity monitor).
inline std::optional<Parity> density_parity_support(const VibronicDensityMatrix& rho) {
    double even_mass = 0.0, odd_mass = 0.0, mixed_mass = 0.0;
    for (const auto& row : rho.blocks)
        for (const auto& b : row)
            for (int m = 0; m < b.rows(); ++m)
                for (int j = 0; j < b.cols(); ++j) {
                    const double v = std::norm(b(m, j));
                    if (m % 2 == 0 && j % 2 == 0) even_mass += v;
                    else if (m % 2 == 1 && j % 2 == 1) odd_mass += v;
                    else mixed_mass += v;
                }
    if (mixed_mass == 0.0 && odd_mass == 0.0 && even_mass > 0.0) return Parity::even;
    if (mixed_mass == 0.0 && even_mass == 0.0 && odd_mass > 0.0) return Parity::odd;
    return std::nullopt;
}

inline double parity_leakage(const VibronicDensityMatrix& rho, Parity parity) {
    const int keep = (parity == Parity::even) ? 0 : 1;
    double s = 0.0;
    for (const auto& row : rho.blocks)
        for (const auto& b : row)
            for (int m = 0; m < b.rows(); ++m)
                for (int j = 0; j < b.cols(); ++j)
                    if (m % 2 != keep || j % 2 != keep) s += std::norm(b(m, j));
    return std::sqrt(s);
}

}  // namespace detail

/// Integrates the master equation until ||drho/dt||_F < tol or t_max is hit.
/// Convergence is declared only through the RHS-norm criterion. Non-convergence
/// is a returned result, not an exception: callers inspect the diagnostics.
inline EvolveResult evolve_to_steady_state(const VibronicDensityMatrix& rho0,
                                           const DriveParams& params, double tol = 1e-8,
                                           double t_max = 40000.0, Rk45Controls controls = {}) {
    if (tol <= 0.0) throw std::invalid_argument("evolve_to_steady_state: tol must be > 0");
    check_same_dim(rho0.dim(), params.dim, "evolve_to_steady_state");
    const auto wall_start = std::chrono::steady_clock::now();

    const LindbladGenerator gen(params);
    EvolveResult res{rho0, {}};
    auto& diag = res.diag;
    const double trace0 = res.rho.trace().real();
    const std::optional<Parity> support = detail::density_parity_support(rho0);
    if (support) diag.parity_leakage_max = 0.0;

    diag.rhs_norm_initial = gen(res.rho).frobenius_norm();
    diag.rhs_norm_final = diag.rhs_norm_initial;

    if (diag.rhs_norm_initial >= tol) {
        const auto outcome = rk45_integrate(
            [&gen](const VibronicDensityMatrix& r) { return gen(r); }, res.rho, 0.0, t_max, controls,
            [&](double, VibronicDensityMatrix& y, const VibronicDensityMatrix&, double dnorm) {
                diag.herm_defect_max = std::max(diag.herm_defect_max, y.hermiticity_defect());
                y.hermitize();
                diag.trace_drift_max =
                    std::max(diag.trace_drift_max, std::abs(y.trace().real() - trace0));
                if (support) {
                    diag.parity_leakage_max =
                        std::max(diag.parity_leakage_max, detail::parity_leakage(y, *support));
                }
                diag.rhs_norm_final = dnorm;
                return dnorm < tol;
            });
        diag.t_final = outcome.t_final;
        diag.steps_accepted = outcome.accepted;
        diag.steps_rejected = outcome.rejected;
        diag.rhs_norm_final = gen(res.rho).frobenius_norm();
        diag.converged = diag.rhs_norm_final < tol;
    } else {
        diag.converged = true;
    }

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(res.rho.composite(),
                                                             Eigen::EigenvaluesOnly);
    diag.min_eigenvalue = es.eigenvalues().minCoeff();
    diag.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return res;
}

}  // namespace nlcs
