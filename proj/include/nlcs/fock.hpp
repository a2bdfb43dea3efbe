#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace nlcs {

using Complex = std::complex<double>;

enum class Parity { even, odd };

/// Pure vibrational state on the truncated number basis, amps[n] = <n|psi>.
/// tail_mass records the probability found in the top 10% of levels when the
/// state was constructed, so truncation adequacy stays visible downstream.
struct FockVector {
    Eigen::VectorXcd amps;
    double tail_mass = 0.0;

    FockVector() = default;
    explicit FockVector(int dim) : amps(Eigen::VectorXcd::Zero(dim)) {}

    int dim() const { return static_cast<int>(amps.size()); }
    double norm() const { return amps.norm(); }

    void normalize() {
        const double n = amps.norm();
        if (n == 0.0) throw std::domain_error("FockVector::normalize: zero vector");
        amps /= n;
    }
};

inline FockVector fock_basis_state(int dim, int n) {
    if (n < 0 || n >= dim) throw std::out_of_range("fock_basis_state: level outside dimension");
    FockVector psi(dim);
    psi.amps[n] = 1.0;
    return psi;
}

/// Probability in the top 10% of levels (at least one level).
inline double tail_mass_of(const FockVector& psi) {
    const int dim = psi.dim();
    const int count = (dim + 9) / 10;
    double mass = 0.0;
    for (int n = dim - count; n < dim; ++n) mass += std::norm(psi.amps[n]);
    return mass;
}

/// Even/odd support check; nullopt when the state has no definite parity.
inline std::optional<Parity> state_parity(const FockVector& psi, double rel_tol = 1e-12) {
    double even_max = 0.0, odd_max = 0.0;
    for (int n = 0; n < psi.dim(); ++n) {
        const double a = std::abs(psi.amps[n]);
        (n % 2 == 0 ? even_max : odd_max) = std::max(n % 2 == 0 ? even_max : odd_max, a);
    }
    const double scale = std::max(even_max, odd_max);
    if (scale == 0.0) return std::nullopt;
    if (odd_max <= rel_tol * scale) return Parity::even;
    if (even_max <= rel_tol * scale) return Parity::odd;
    return std::nullopt;
}

/// Dense operator on the truncated Fock space.
///
/// Truncation artifact to keep in mind: [a, a^dag] = 1 holds exactly except in
/// the single top element, where (a a^dag)[dim-1, dim-1] = 0 instead of dim.
struct FockOperator {
    Eigen::MatrixXcd mat;

    FockOperator() = default;
    explicit FockOperator(Eigen::MatrixXcd m) : mat(std::move(m)) {}

    int dim() const { return static_cast<int>(mat.rows()); }
};

inline FockOperator annihilation_op(int dim) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) m(n, n + 1) = std::sqrt(n + 1.0);
    return FockOperator(std::move(m));
}

inline FockOperator creation_op(int dim) {
    return FockOperator(annihilation_op(dim).mat.adjoint());
}

inline FockOperator number_op(int dim) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) m(n, n) = static_cast<double>(n);
    return FockOperator(std::move(m));
}

inline FockOperator identity_op(int dim) {
    return FockOperator(Eigen::MatrixXcd::Identity(dim, dim));
}

/// p = i (a^dag - a) / sqrt(2)
inline FockOperator momentum_op(int dim) {
    const Complex i{0.0, 1.0};
    Eigen::MatrixXcd m = i * (creation_op(dim).mat - annihilation_op(dim).mat) / std::sqrt(2.0);
    return FockOperator(std::move(m));
}

inline void check_same_dim(int a, int b, const char* where) {
    if (a != b) {
        throw std::invalid_argument(std::string(where) + ": dimension mismatch " +
                                    std::to_string(a) + " vs " + std::to_string(b));
    }
}

inline FockVector apply_operator(const FockOperator& op, const FockVector& psi) {
    check_same_dim(op.dim(), psi.dim(), "apply_operator");
    FockVector out;
    out.amps = op.mat * psi.amps;
    return out;
}

inline Complex expectation(const FockOperator& op, const FockVector& psi) {
    check_same_dim(op.dim(), psi.dim(), "expectation");
    return psi.amps.dot(op.mat * psi.amps);
}

inline Complex inner(const FockVector& a, const FockVector& b) {
    check_same_dim(a.dim(), b.dim(), "inner");
    return a.amps.dot(b.amps);
}

/// Joint state of the two electronic levels and the vibrational mode, stored
/// as the four vibrational blocks rho_{ij} (i, j electronic levels 1, 2).
struct VibronicDensityMatrix {
    std::array<std::array<Eigen::MatrixXcd, 2>, 2> blocks;

    VibronicDensityMatrix() = default;
    explicit VibronicDensityMatrix(int dim) {
        for (auto& row : blocks)
            for (auto& b : row) b = Eigen::MatrixXcd::Zero(dim, dim);
    }

    int dim() const { return static_cast<int>(blocks[0][0].rows()); }

    /// |level)(level| (x) |psi><psi|
    static VibronicDensityMatrix pure(int level, const FockVector& psi) {
        if (level != 1 && level != 2)
            throw std::invalid_argument("VibronicDensityMatrix::pure: level must be 1 or 2");
        VibronicDensityMatrix rho(psi.dim());
        rho.blocks[level - 1][level - 1] = psi.amps * psi.amps.adjoint();
        return rho;
    }

    Complex trace() const { return blocks[0][0].trace() + blocks[1][1].trace(); }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& row : blocks)
            for (const auto& b : row) s += b.squaredNorm();
        return std::sqrt(s);
    }

    /// max |rho_ij - rho_ji^dag| entry before symmetrizing
    double hermiticity_defect() const {
        double d = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                d = std::max(d, (blocks[i][j] - blocks[j][i].adjoint().eval()).cwiseAbs().maxCoeff());
        return d;
    }

    void hermitize() {
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j) {
                const Eigen::MatrixXcd sym = 0.5 * (blocks[i][j] + blocks[j][i].adjoint());
                blocks[i][j] = sym;
                blocks[j][i] = sym.adjoint();
            }
    }

    Eigen::MatrixXcd composite() const {
        const int d = dim();
        Eigen::MatrixXcd m(2 * d, 2 * d);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m.block(i * d, j * d, d, d) = blocks[i][j];
        return m;
    }

    static VibronicDensityMatrix from_composite(const Eigen::MatrixXcd& m) {
        if (m.rows() != m.cols() || m.rows() % 2 != 0)
            throw std::invalid_argument("from_composite: need even-sized square matrix");
        const int d = static_cast<int>(m.rows()) / 2;
        VibronicDensityMatrix rho(d);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) rho.blocks[i][j] = m.block(i * d, j * d, d, d);
        return rho;
    }
};

inline VibronicDensityMatrix operator+(const VibronicDensityMatrix& a, const VibronicDensityMatrix& b) {
    VibronicDensityMatrix out(a.dim());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.blocks[i][j] = a.blocks[i][j] + b.blocks[i][j];
    return out;
}

inline VibronicDensityMatrix operator-(const VibronicDensityMatrix& a, const VibronicDensityMatrix& b) {
    VibronicDensityMatrix out(a.dim());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.blocks[i][j] = a.blocks[i][j] - b.blocks[i][j];
    return out;
}

inline VibronicDensityMatrix operator*(double s, const VibronicDensityMatrix& a) {
    VibronicDensityMatrix out(a.dim());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.blocks[i][j] = s * a.blocks[i][j];
    return out;
}

/// <target| rho_ll |target> for electronic level l: overlap of the level-l
/// vibrational block with a pure target state.
inline double fidelity(const VibronicDensityMatrix& rho, const FockVector& target, int level) {
    if (level != 1 && level != 2) throw std::invalid_argument("fidelity: level must be 1 or 2");
    check_same_dim(rho.dim(), target.dim(), "fidelity");
    const Complex v = target.amps.dot(rho.blocks[level - 1][level - 1] * target.amps);
    return v.real();
}

}  // namespace nlcs
