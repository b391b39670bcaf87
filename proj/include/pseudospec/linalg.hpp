#pragma once

// Dense complex linear algebra kernel. Everything downstream works on
// Eigen::MatrixXcd; this header adds the few operations the rest of the
// library needs with the error behaviour it expects (throwing instead of
// returning garbage on singular or non-converged input).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pseudospec/errors.hpp"

namespace pseudospec {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kMachineEpsilon = std::numeric_limits<double>::epsilon();
inline constexpr cplx kI{0.0, 1.0};

struct EigenPair {
    cplx value;
    ComplexVector vector; // unit 2-norm
};

/// Frobenius norm; the single norm every relative tolerance in the library is measured in.
inline double norm(const ComplexMatrix& m) { return m.norm(); }

/// ‖m‖_F, or 1 when m vanishes, so relative thresholds never divide by zero.
inline double scale_of(const ComplexMatrix& m) {
    const double s = m.norm();
    return s > 0.0 ? s : 1.0;
}

inline void require_finite(const ComplexMatrix& m, std::string_view what) {
    if (!m.allFinite()) {
        throw NonFiniteError(std::string(what) + ": matrix has non-finite entries");
    }
}

inline void require_square(const ComplexMatrix& m, std::string_view what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream os;
        os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw DimensionError(os.str());
    }
}

inline void require_same_dimension(Index a, Index b, std::string_view what) {
    if (a != b) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << a << " vs " << b << ")";
        throw DimensionError(os.str());
    }
}

/// Singular values in descending order.
inline Eigen::VectorXd singular_values(const ComplexMatrix& m) {
    if (m.size() == 0) return {};
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues();
}

/// 2-norm condition number; +inf for a numerically singular matrix.
inline double condition_number(const ComplexMatrix& m) {
    const Eigen::VectorXd sv = singular_values(m);
    if (sv.size() == 0) return 1.0;
    const double smin = sv(sv.size() - 1);
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}

inline double default_rank_tol(const ComplexMatrix& m) {
    return static_cast<double>(std::max(m.rows(), m.cols())) * kMachineEpsilon;
}

/// Number of singular values above tol_rank times the largest one.
inline std::size_t numerical_rank(const ComplexMatrix& m, double tol_rank) {
    if (tol_rank < 0.0) throw InvalidArgument("numerical_rank: tolerance must be non-negative");
    require_finite(m, "numerical_rank");
    const Eigen::VectorXd sv = singular_values(m);
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double cutoff = tol_rank * sv(0);
    return static_cast<std::size_t>((sv.array() > cutoff).count());
}

inline std::size_t numerical_rank(const ComplexMatrix& m) {
    return numerical_rank(m, default_rank_tol(m));
}

/// Eigenpairs through a complex Schur reduction (Eigen::ComplexEigenSolver).
/// Defective input yields nearly parallel vectors; grouping them is the
/// block-diagonalization layer's job.
inline std::vector<EigenPair> eigen_decompose(const ComplexMatrix& m) {
    require_square(m, "eigen_decompose");
    require_finite(m, "eigen_decompose");
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, true);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("eigen_decompose: Schur iteration did not converge");
    }
    std::vector<EigenPair> out;
    out.reserve(static_cast<std::size_t>(m.rows()));
    for (Index j = 0; j < m.rows(); ++j) {
        ComplexVector v = solver.eigenvectors().col(j);
        const double nv = v.norm();
        if (nv > 0.0) v /= nv;
        out.push_back({solver.eigenvalues()(j), std::move(v)});
    }
    return out;
}

/// Inverse of a well-conditioned square matrix.
///
/// Throws SingularMatrixError when the smallest singular value is below
/// 1e3 * eps * largest. For accepted input the residual ‖M M⁻¹ − I‖ is of
/// order eps * cond(M), comfortably below 1e-10 * cond(M).
inline ComplexMatrix inverse(const ComplexMatrix& m) {
    require_square(m, "inverse");
    require_finite(m, "inverse");
    const Eigen::VectorXd sv = singular_values(m);
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (smax == 0.0 || smin <= 1e3 * kMachineEpsilon * smax) {
        const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
        std::ostringstream os;
        os << "inverse: matrix is singular to working precision (condition estimate " << cond << ")";
        throw SingularMatrixError(os.str(), cond);
    }
    return m.fullPivLu().inverse();
}

// ---------------------------------------------------------------------------
// Complex Schur form with eigenvalue reordering.

struct SchurForm {
    ComplexMatrix T; // upper triangular
    ComplexMatrix Q; // unitary, H = Q T Q*
};

inline SchurForm complex_schur(const ComplexMatrix& m) {
    require_square(m, "complex_schur");
    require_finite(m, "complex_schur");
    Eigen::ComplexSchur<ComplexMatrix> schur(m, true);
    if (schur.info() != Eigen::Success) {
        throw ConvergenceError("complex_schur: QR iteration did not converge");
    }
    return {schur.matrixT(), schur.matrixU()};
}

/// Exchange the diagonal entries at k and k+1 with a unitary rotation.
inline void swap_adjacent(SchurForm& s, Index k) {
    const cplx a = s.T(k, k);
    const cplx b = s.T(k, k + 1);
    const cplx c = s.T(k + 1, k + 1);
    // (b, c - a) is the eigenvector of the 2x2 block for eigenvalue c.
    cplx x1 = b;
    cplx x2 = c - a;
    const double nx = std::hypot(std::abs(x1), std::abs(x2));
    if (nx == 0.0) return; // scalar block, nothing to do
    x1 /= nx;
    x2 /= nx;
    Eigen::Matrix2cd g;
    g << x1, -std::conj(x2), x2, std::conj(x1);
    s.T.middleRows(k, 2) = g.adjoint() * s.T.middleRows(k, 2);
    s.T.middleCols(k, 2) = s.T.middleCols(k, 2) * g;
    s.Q.middleCols(k, 2) = s.Q.middleCols(k, 2) * g;
    s.T(k + 1, k) = 0.0;
}

/// Reorder so that the eigenvalues whose original diagonal positions are
/// listed in `selected` occupy the leading block, in their original relative order.
inline void reorder_leading(SchurForm& s, const std::vector<Index>& selected) {
    const Index n = s.T.rows();
    std::vector<Index> id(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;
    std::vector<bool> want(static_cast<std::size_t>(n), false);
    for (Index j : selected) want[static_cast<std::size_t>(j)] = true;

    Index dest = 0;
    for (Index pos = 0; pos < n; ++pos) {
        if (!want[static_cast<std::size_t>(id[static_cast<std::size_t>(pos)])]) continue;
        for (Index k = pos - 1; k >= dest; --k) {
            swap_adjacent(s, k);
            std::swap(id[static_cast<std::size_t>(k)], id[static_cast<std::size_t>(k + 1)]);
        }
        ++dest;
    }
}

} // namespace pseudospec
