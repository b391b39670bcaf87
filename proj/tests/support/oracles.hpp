#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the code under test beyond plain data types.

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace testsupport {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// v -> K conj(v) written out entry by entry.
inline CVec antilinear_apply_reference(const CMat& k, const CVec& v) {
    CVec out = CVec::Zero(k.rows());
    for (Eigen::Index i = 0; i < k.rows(); ++i)
        for (Eigen::Index j = 0; j < k.cols(); ++j) out(i) += k(i, j) * std::conj(v(j));
    return out;
}

/// Matrix of the linear map v -> L1(L2(v)), assembled column by column.
inline CMat compose_reference(const CMat& k1, const CMat& k2) {
    const Eigen::Index n = k2.cols();
    CMat out(k1.rows(), n);
    for (Eigen::Index j = 0; j < n; ++j) {
        CVec e = CVec::Zero(n);
        e(j) = 1.0;
        out.col(j) = antilinear_apply_reference(k1, antilinear_apply_reference(k2, e));
    }
    return out;
}

inline CMat sigma1() {
    CMat s(2, 2);
    s << 0.0, 1.0, 1.0, 0.0;
    return s;
}

inline CMat sigma3() {
    CMat s(2, 2);
    s << 1.0, 0.0, 0.0, -1.0;
    return s;
}

/// diag(e^{i theta}, e^{-i theta}).
inline CMat phase_sigma3(double theta) {
    CMat m = CMat::Zero(2, 2);
    m(0, 0) = std::polar(1.0, theta);
    m(1, 1) = std::polar(1.0, -theta);
    return m;
}

/// v/(2k) [[1, e^{-2ikx}], [−e^{2ikx}, −1]] typed out directly.
inline CMat two_level_hamiltonian(double x, double k, double v) {
    CMat h(2, 2);
    h << 1.0, std::polar(1.0, -2 * k * x), -std::polar(1.0, 2 * k * x), -1.0;
    return h * (v / (2 * k));
}

inline double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace testsupport
