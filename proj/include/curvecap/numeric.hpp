#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "curvecap/errors.hpp"

namespace curvecap {

using cd = std::complex<double>;

// Dense complex matrix with finite entries. Construction from raw data
// rejects NaN/Inf; the Eigen view is the working representation.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(Eigen::Index rows, Eigen::Index cols) : m_(Eigen::MatrixXcd::Zero(rows, cols)) {}
    explicit CMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) { validate(); }

    Eigen::Index rows() const { return m_.rows(); }
    Eigen::Index cols() const { return m_.cols(); }
    cd& at(Eigen::Index r, Eigen::Index c) { return m_(r, c); }
    const cd& at(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

    const Eigen::MatrixXcd& mat() const { return m_; }
    Eigen::MatrixXcd& mat() { return m_; }

    void validate() const {
        for (Eigen::Index r = 0; r < m_.rows(); ++r)
            for (Eigen::Index c = 0; c < m_.cols(); ++c)
                if (!std::isfinite(m_(r, c).real()) || !std::isfinite(m_(r, c).imag()))
                    throw numeric_error("CMatrix: non-finite entry at (" + std::to_string(r) +
                                        "," + std::to_string(c) + ")");
    }

private:
    Eigen::MatrixXcd m_;
};

struct EigResult {
    std::vector<cd> values;
    Eigen::MatrixXcd vectors;       // unit-norm right eigenvectors, one per column
    std::vector<double> residuals;  // ||A v - lambda v|| per pair
};

// Right eigendecomposition. Contract: per returned pair,
// ||A v - lambda v|| <= 1e-10 * ||A||_F * dim, eigenvectors unit norm.
inline EigResult eig(const CMatrix& A) {
    if (A.rows() != A.cols()) throw numeric_error("eig: matrix not square");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(A.mat(), /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw numeric_error("eig: iteration did not converge");
    EigResult r;
    Eigen::Index n = A.rows();
    r.vectors = solver.eigenvectors();
    r.values.resize(static_cast<size_t>(n));
    r.residuals.resize(static_cast<size_t>(n));
    double scale = A.mat().norm() * static_cast<double>(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        cd lambda = solver.eigenvalues()(k);
        Eigen::VectorXcd v = r.vectors.col(k);
        v.normalize();
        r.vectors.col(k) = v;
        r.values[static_cast<size_t>(k)] = lambda;
        double res = (A.mat() * v - lambda * v).norm();
        r.residuals[static_cast<size_t>(k)] = res;
        if (res > 1e-10 * std::max(scale, 1e-30))
            throw numeric_error("eig: residual " + std::to_string(res) +
                                " exceeds contract bound");
    }
    return r;
}

// Minimize sum_i w_i |b_i - (Ac)_i|^2 over c, via QR on the sqrt(W)-scaled
// system. Throws on rank deficiency, naming the offending column.
inline Eigen::VectorXcd weighted_lstsq(const CMatrix& A, std::span<const cd> b,
                                       std::span<const double> w,
                                       double rank_tol = 1e-12) {
    Eigen::Index m = A.rows(), k = A.cols();
    if (static_cast<Eigen::Index>(b.size()) != m || static_cast<Eigen::Index>(w.size()) != m)
        throw numeric_error("weighted_lstsq: size mismatch");
    if (m < k) throw numeric_error("weighted_lstsq: underdetermined system");
    if (k == 0) return Eigen::VectorXcd(0);
    Eigen::VectorXd sw(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (!(w[static_cast<size_t>(i)] >= 0.0))
            throw numeric_error("weighted_lstsq: negative weight");
        sw(i) = std::sqrt(w[static_cast<size_t>(i)]);
    }
    Eigen::MatrixXcd As = sw.asDiagonal() * A.mat();
    Eigen::VectorXcd bs(m);
    for (Eigen::Index i = 0; i < m; ++i) bs(i) = sw(i) * b[static_cast<size_t>(i)];
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(As);
    double r0 = std::abs(qr.matrixR()(0, 0));
    double rk = std::abs(qr.matrixR()(k - 1, k - 1));
    if (!(r0 > 0.0) || rk <= rank_tol * r0) {
        Eigen::Index bad = qr.colsPermutation().indices()(k - 1);
        throw numeric_error("weighted_lstsq: rank-deficient system; column " +
                            std::to_string(bad) + " is dependent");
    }
    return qr.solve(bs);
}

// Natural log of |det| plus the unit phase of det; drop-in replacement for
// determinants that would overflow double precision.
struct LogDet {
    double log_abs = 0.0;
    cd phase = 1.0; // unit modulus unless zero is set
    bool zero = false;
};

inline LogDet logdet(const CMatrix& A) {
    if (A.rows() != A.cols()) throw numeric_error("logdet: matrix not square");
    LogDet out;
    if (A.rows() == 0) return out;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A.mat());
    const auto& U = lu.matrixLU();
    double perm_sign = static_cast<double>(lu.permutationP().determinant());
    cd phase = perm_sign;
    double log_abs = 0.0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        cd u = U(i, i);
        double au = std::abs(u);
        if (au == 0.0) {
            out.zero = true;
            out.log_abs = -std::numeric_limits<double>::infinity();
            out.phase = 0.0;
            return out;
        }
        log_abs += std::log(au);
        phase *= u / au;
    }
    out.log_abs = log_abs;
    out.phase = phase;
    return out;
}

} // namespace curvecap
