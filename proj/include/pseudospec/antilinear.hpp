#pragma once

// Antilinear operators on C^n, stored by their matrix part K: v -> K conj(v).
//
// Composition rules, all exact at the matrix level:
//   (K1 T)(K2 T)  = K1 conj(K2)          antilinear o antilinear is linear
//   M (K T)       = (M K) T              linear o antilinear is antilinear
//   (K T) M       = (K conj(M)) T        antilinear o linear is antilinear
//   (K T)^dagger  = K^T T                from <xi|L^dagger zeta> = <zeta|L xi>
//   (K T)^{-1}    = conj(K^{-1}) T
//
// There is deliberately no sum of antilinear operators in this API.

#include <utility>

#include "pseudospec/linalg.hpp"

namespace pseudospec {

class AntilinearOp {
public:
    explicit AntilinearOp(ComplexMatrix k) : k_(std::move(k)) {
        require_square(k_, "AntilinearOp");
        require_finite(k_, "AntilinearOp");
    }

    /// Componentwise complex conjugation in the standard basis.
    static AntilinearOp conjugation(Index dimension) {
        return AntilinearOp(ComplexMatrix::Identity(dimension, dimension));
    }

    const ComplexMatrix& matrix() const noexcept { return k_; }
    Index dimension() const noexcept { return k_.rows(); }

private:
    ComplexMatrix k_;
};

inline ComplexVector apply(const AntilinearOp& op, const ComplexVector& v) {
    require_same_dimension(op.dimension(), v.size(), "apply");
    return op.matrix() * v.conjugate();
}

/// Columnwise action on a block of vectors.
inline ComplexMatrix apply(const AntilinearOp& op, const ComplexMatrix& vs) {
    require_same_dimension(op.dimension(), vs.rows(), "apply");
    return op.matrix() * vs.conjugate();
}

inline ComplexMatrix compose(const AntilinearOp& first, const AntilinearOp& second) {
    require_same_dimension(first.dimension(), second.dimension(), "compose");
    return first.matrix() * second.matrix().conjugate();
}

inline AntilinearOp compose(const ComplexMatrix& linear, const AntilinearOp& op) {
    require_same_dimension(linear.cols(), op.dimension(), "compose");
    return AntilinearOp(linear * op.matrix());
}

inline AntilinearOp compose(const AntilinearOp& op, const ComplexMatrix& linear) {
    require_same_dimension(op.dimension(), linear.rows(), "compose");
    return AntilinearOp(op.matrix() * linear.conjugate());
}

inline ComplexMatrix operator*(const AntilinearOp& a, const AntilinearOp& b) { return compose(a, b); }
inline AntilinearOp operator*(const ComplexMatrix& m, const AntilinearOp& a) { return compose(m, a); }
inline AntilinearOp operator*(const AntilinearOp& a, const ComplexMatrix& m) { return compose(a, m); }

inline AntilinearOp adjoint(const AntilinearOp& op) { return AntilinearOp(op.matrix().transpose()); }

inline AntilinearOp inverse(const AntilinearOp& op) {
    return AntilinearOp(inverse(op.matrix()).conjugate());
}

struct PredicateResult {
    bool holds;
    double residual;
};

/// ‖K − Kᵀ‖ / ‖K‖.
inline PredicateResult is_hermitian(const AntilinearOp& op, double tol) {
    const double nk = norm(op.matrix());
    const double r = nk > 0.0 ? norm(op.matrix() - op.matrix().transpose()) / nk : 0.0;
    return {r <= tol, r};
}

/// ‖K conj(K) − I‖.
inline PredicateResult is_involution(const AntilinearOp& op, double tol) {
    const Index n = op.dimension();
    const double r = norm(compose(op, op) - ComplexMatrix::Identity(n, n));
    return {r <= tol, r};
}

/// ‖K†K − I‖.
inline PredicateResult is_antiunitary(const AntilinearOp& op, double tol) {
    const Index n = op.dimension();
    const double r = norm(op.matrix().adjoint() * op.matrix() - ComplexMatrix::Identity(n, n));
    return {r <= tol, r};
}

} // namespace pseudospec
