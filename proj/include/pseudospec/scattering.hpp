#pragma once

// Two-level non-unitary Hamiltonian of one-dimensional real-potential
// scattering, its transfer-matrix evolution, and the closed-form operators of
// its Jordan structure (a single p = 2 chain at E = 0 for every x).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <utility>
#include <variant>
#include <vector>

#include "pseudospec/antilinear.hpp"
#include "pseudospec/blockdiag.hpp"
#include "pseudospec/symmetry.hpp"

namespace pseudospec {

struct RectangularBarrier {
    double v0;
    double x_start;
    double x_end;
};

/// Piecewise-linear interpolation through (x, v) samples.
struct SampledPotential {
    std::vector<std::pair<double, double>> grid;
};

struct PotentialSpec {
    std::variant<RectangularBarrier, SampledPotential> kind;
    double k;

    void validate() const {
        if (!(k > 0.0) || !std::isfinite(k)) throw InvalidArgument("potential: wavenumber k must be positive");
        if (const auto* r = std::get_if<RectangularBarrier>(&kind)) {
            if (!(r->x_start < r->x_end)) throw InvalidArgument("rectangular potential: need x_start < x_end");
            if (!std::isfinite(r->v0)) throw NonFiniteError("rectangular potential: v0 not finite");
        } else {
            const auto& g = std::get<SampledPotential>(kind).grid;
            if (g.empty()) throw InvalidArgument("sampled potential: empty grid");
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (!std::isfinite(g[i].first) || !std::isfinite(g[i].second))
                    throw NonFiniteError("sampled potential: non-finite sample");
                if (i > 0 && !(g[i].first > g[i - 1].first))
                    throw InvalidArgument("sampled potential: grid must be strictly increasing in x");
            }
        }
    }

    double potential(double x) const {
        if (const auto* r = std::get_if<RectangularBarrier>(&kind)) {
            return (x >= r->x_start && x <= r->x_end) ? r->v0 : 0.0;
        }
        const auto& g = std::get<SampledPotential>(kind).grid;
        if (x < g.front().first || x > g.back().first) {
            std::ostringstream os;
            os << "sampled potential: x = " << x << " outside [" << g.front().first << ", " << g.back().first << "]";
            throw ExtrapolationError(os.str());
        }
        const auto it = std::lower_bound(g.begin(), g.end(), x,
                                         [](const std::pair<double, double>& s, double v) { return s.first < v; });
        if (it->first == x || it == g.begin()) return it->second;
        const auto& lo = *(it - 1);
        const double t = (x - lo.first) / (it->first - lo.first);
        return lo.second + t * (it->second - lo.second);
    }
};

struct TransferResult {
    ComplexMatrix U;
    double det_drift = 0.0; // |det U − 1|
    std::size_t steps = 0;
};

/// H(x) = v(x)/(2k) [[1, e^{-2ikx}], [−e^{2ikx}, −1]].
inline ComplexMatrix hamiltonian_at(double x, const PotentialSpec& spec) {
    const double v = spec.potential(x);
    const cplx phase = std::exp(cplx(0.0, 2.0 * spec.k * x));
    ComplexMatrix h(2, 2);
    h << 1.0, 1.0 / phase, -phase, -1.0;
    return h * (v / (2.0 * spec.k));
}

/// Classical RK4 for i dU/dx = H(x) U, U(x_minus) = I.
inline TransferResult evolve_transfer(const PotentialSpec& spec, double x_minus, double x_plus, std::size_t steps) {
    spec.validate();
    if (!(x_minus < x_plus)) throw InvalidArgument("evolve_transfer: need x_minus < x_plus");
    if (steps < 1) throw InvalidArgument("evolve_transfer: steps must be at least 1");
    const double h = (x_plus - x_minus) / static_cast<double>(steps);
    auto rhs = [&](double x, const Eigen::Matrix2cd& u) -> Eigen::Matrix2cd {
        const Eigen::Matrix2cd hx = hamiltonian_at(x, spec);
        return -kI * (hx * u);
    };
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
    for (std::size_t s = 0; s < steps; ++s) {
        const double x = x_minus + static_cast<double>(s) * h;
        const Eigen::Matrix2cd k1 = rhs(x, u);
        const Eigen::Matrix2cd k2 = rhs(x + h / 2, u + (h / 2) * k1);
        const Eigen::Matrix2cd k3 = rhs(x + h / 2, u + (h / 2) * k2);
        const Eigen::Matrix2cd k4 = rhs(x + h, u + h * k3);
        u += (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    TransferResult r;
    r.U = u;
    r.det_drift = std::abs(u.determinant() - 1.0);
    r.steps = steps;
    return r;
}

/// Transmission and reflection amplitudes from a transfer matrix (standard relations).
struct ScatteringAmplitudes {
    cplx transmission;
    cplx reflection_left;
    cplx reflection_right;
};

inline ScatteringAmplitudes amplitudes_from_transfer(const ComplexMatrix& m) {
    if (m.rows() != 2 || m.cols() != 2) throw DimensionError("amplitudes_from_transfer: expected 2x2");
    const cplx m22 = m(1, 1);
    if (std::abs(m22) == 0.0) throw SingularMatrixError("amplitudes_from_transfer: M22 vanishes", 0.0);
    return {1.0 / m22, -m(1, 0) / m22, m(0, 1) / m22};
}

// ---------------------------------------------------------------------------
// Closed forms

inline ComplexMatrix pauli_x() {
    ComplexMatrix s(2, 2);
    s << 0.0, 1.0, 1.0, 0.0;
    return s;
}

inline ComplexMatrix pauli_z() {
    ComplexMatrix s(2, 2);
    s << 1.0, 0.0, 0.0, -1.0;
    return s;
}

/// e^{i theta sigma_3}.
inline ComplexMatrix exp_i_sigma3(double theta) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = std::exp(cplx(0.0, theta));
    m(1, 1) = std::exp(cplx(0.0, -theta));
    return m;
}

/// A = e^{-ikx sigma_3} [[1, 1], [−1, 0]].
inline ComplexMatrix scattering_A(double x, double k) {
    ComplexMatrix b(2, 2);
    b << 1.0, 1.0, -1.0, 0.0;
    return exp_i_sigma3(-k * x) * b;
}

/// Head of the Jordan chain in the closed-form gauge, e^{-ikx sigma_3}(1, −1).
inline ComplexVector scattering_head(double x, double k) { return scattering_A(x, k).col(0); }

inline ComplexMatrix scattering_H0() {
    ComplexMatrix h0 = ComplexMatrix::Zero(2, 2);
    h0(0, 1) = 1.0;
    return h0;
}

/// Columns phi_{1,1,1}, phi_{1,1,2} of A^{-1 dagger} = e^{-ikx sigma_3}[[0, 1], [−1, 1]].
inline ComplexMatrix scattering_phi(double x, double k) {
    ComplexMatrix b(2, 2);
    b << 0.0, 1.0, -1.0, 1.0;
    return exp_i_sigma3(-k * x) * b;
}

inline ComplexMatrix scattering_tau_matrix(double x, double k) {
    ComplexMatrix t(2, 2);
    t << std::exp(cplx(0.0, -2.0 * k * x)), 0.0, -1.0, -std::exp(cplx(0.0, 2.0 * k * x));
    return t;
}

/// S = eta0 = sigma_1, Theta = X0 = T, tau0 = sigma_1 T, tau = scattering_tau_matrix, X = e^{-2ikx sigma_3} T,
/// C0 = I; eta is the lift A^{-1 dagger} sigma_1 A^{-1} of eta0.
inline SymmetryOperators closed_form_operators(double x, double k) {
    if (!(k > 0.0)) throw InvalidArgument("closed_form_operators: k must be positive");
    const ComplexMatrix a_inv = inverse(scattering_A(x, k));
    return SymmetryOperators{pauli_x(),
                             AntilinearOp::conjugation(2),
                             AntilinearOp(pauli_x()),
                             AntilinearOp(scattering_tau_matrix(x, k)),
                             ComplexMatrix::Identity(2, 2),
                             pauli_x(),
                             AntilinearOp::conjugation(2),
                             AntilinearOp(exp_i_sigma3(-2.0 * k * x)),
                             a_inv.adjoint() * pauli_x() * a_inv};
}

/// Rotate the pipeline chain of H(x) into the closed-form gauge: the head
/// becomes a positive multiple of e^{-ikx sigma_3}(1, −1).
inline void align_to_closed_form(BlockDiagonalization& bd, double x, double k) {
    align_chain_phases(bd, {scattering_head(x, k)});
}

} // namespace pseudospec
