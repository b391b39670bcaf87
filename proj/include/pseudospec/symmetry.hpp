#pragma once

// Spectral relabeling, the conjugate-pairing test, and synthesis of the
// symmetry operators of a block-diagonalized H.
//
// Every permutation-type operator (S, C0, eta0) lives in the canonical Jordan
// basis of the BlockDiagonalization; the lifted operators (tau, X, eta) are
// expressed in the original coordinates of H.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pseudospec/antilinear.hpp"
#include "pseudospec/blockdiag.hpp"

namespace pseudospec {

struct SpectralLabeling {
    std::vector<std::size_t> real_clusters;                       // class nu0
    std::vector<std::pair<std::size_t, std::size_t>> pair_list;  // (+nu, -nu)
    std::vector<std::size_t> unpaired;
};

struct PairingReport {
    bool ok = true;
    std::string diagnostics;
    std::optional<std::size_t> unpaired_cluster;
    std::optional<std::pair<std::size_t, std::size_t>> mismatched_pair;
};

struct SymmetryOperators {
    ComplexMatrix S;
    AntilinearOp Theta;
    AntilinearOp tau0;
    AntilinearOp tau;
    ComplexMatrix C0;
    ComplexMatrix eta0;
    AntilinearOp X0;
    AntilinearOp X;
    ComplexMatrix eta;
};

inline bool is_real_eigenvalue(cplx e, double real_tol) {
    return std::abs(e.imag()) <= real_tol * (1.0 + std::abs(e));
}

/// Real clusters first; each remaining cluster with Im E > 0 (in index order)
/// takes its nearest unclaimed conjugate partner within pair_tol * (1 + |E|).
inline SpectralLabeling classify_spectrum(const SpectralTable& table, double real_tol = 1e-8,
                                          double pair_tol = 1e-8) {
    SpectralLabeling out;
    const std::size_t k = table.clusters.size();
    std::vector<bool> taken(k, false);
    for (std::size_t c = 0; c < k; ++c) {
        if (is_real_eigenvalue(table.clusters[c].center, real_tol)) {
            out.real_clusters.push_back(c);
            taken[c] = true;
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (taken[c]) continue;
        const cplx e = table.clusters[c].center;
        if (e.imag() <= 0.0) continue;
        const double radius = pair_tol * (1.0 + std::abs(e));
        std::optional<std::size_t> best;
        double best_dist = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (taken[j] || j == c || table.clusters[j].center.imag() >= 0.0) continue;
            const double dist = std::abs(e - std::conj(table.clusters[j].center));
            if (dist <= radius && (!best || dist < best_dist)) {
                best = j;
                best_dist = dist;
            }
        }
        if (best) {
            taken[c] = taken[*best] = true;
            out.pair_list.emplace_back(c, *best);
        }
    }
    for (std::size_t c = 0; c < k; ++c)
        if (!taken[c]) out.unpaired.push_back(c);
    return out;
}

inline PairingReport check_pairing(const SpectralLabeling& labeling, const SpectralTable& table) {
    PairingReport r;
    if (!labeling.unpaired.empty()) {
        const std::size_t c = labeling.unpaired.front();
        std::ostringstream os;
        os << "cluster " << c << " at E = " << table.clusters[c].center << " has no complex-conjugate partner";
        r.ok = false;
        r.unpaired_cluster = c;
        r.diagnostics = os.str();
        return r;
    }
    for (const auto& [plus, minus] : labeling.pair_list) {
        const auto& a = table.clusters[plus].p_list;
        const auto& b = table.clusters[minus].p_list;
        if (a != b) {
            std::ostringstream os;
            os << "conjugate pair (" << plus << ", " << minus << ") has Jordan dimensions [";
            for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
            os << "] vs [";
            for (std::size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
            os << "]";
            r.ok = false;
            r.mismatched_pair = std::make_pair(plus, minus);
            r.diagnostics = os.str();
            return r;
        }
    }
    return r;
}

/// Chain-reversal permutation (n,a,i) -> (n,a,p-i+1).
inline ComplexMatrix build_S(const SpectralTable& table) {
    const auto n = static_cast<Index>(table.dimension());
    ComplexMatrix s = ComplexMatrix::Zero(n, n);
    for (std::size_t c = 0; c < table.clusters.size(); ++c) {
        const auto& p = table.clusters[c].p_list;
        for (std::size_t a = 0; a < p.size(); ++a)
            for (std::size_t i = 0; i < p[a]; ++i)
                s(slot_of(table, c, a, p[a] - 1 - i), slot_of(table, c, a, i)) = 1.0;
    }
    return s;
}

inline AntilinearOp build_Theta(Index dimension) { return AntilinearOp::conjugation(dimension); }

inline AntilinearOp build_tau0(const SpectralTable& table) { return AntilinearOp(build_S(table)); }

/// tau = (A tau0 A^dagger)^{-1}; matrix part conj((A S A^T)^{-1}).
inline AntilinearOp build_tau(const BlockDiagonalization& bd) {
    const AntilinearOp tau0 = build_tau0(bd.table);
    const AntilinearOp sandwich = compose(compose(bd.A, tau0), ComplexMatrix(bd.A.adjoint()));
    return inverse(sandwich);
}

inline ComplexMatrix build_C0(const SpectralLabeling& labeling, const SpectralTable& table) {
    const PairingReport report = check_pairing(labeling, table);
    if (!report.ok) throw PairingError("build_C0: " + report.diagnostics);
    const auto n = static_cast<Index>(table.dimension());
    ComplexMatrix c0 = ComplexMatrix::Identity(n, n);
    for (const auto& [plus, minus] : labeling.pair_list) {
        const auto& p = table.clusters[plus].p_list;
        for (std::size_t a = 0; a < p.size(); ++a) {
            for (std::size_t i = 0; i < p[a]; ++i) {
                const Index u = slot_of(table, plus, a, i);
                const Index v = slot_of(table, minus, a, i);
                c0(u, u) = 0.0;
                c0(v, v) = 0.0;
                c0(u, v) = 1.0;
                c0(v, u) = 1.0;
            }
        }
    }
    return c0;
}

inline ComplexMatrix build_eta0(const ComplexMatrix& s, const ComplexMatrix& c0) {
    require_same_dimension(s.rows(), c0.rows(), "build_eta0");
    return s * c0;
}

inline AntilinearOp build_X0(const ComplexMatrix& eta0, const AntilinearOp& tau0) { return compose(eta0, tau0); }

/// X = A X0 A^{-1}.
inline AntilinearOp build_X(const BlockDiagonalization& bd, const AntilinearOp& x0) {
    return compose(compose(bd.A, x0), inverse(bd.A));
}

/// eta = A^{-1 dagger} eta0 A^{-1}, Hermitian to rounding.
inline ComplexMatrix build_metric_eta(const BlockDiagonalization& bd, const ComplexMatrix& eta0) {
    const ComplexMatrix a_inv = inverse(bd.A);
    const ComplexMatrix eta = a_inv.adjoint() * eta0 * a_inv;
    return (eta + eta.adjoint()) / 2.0;
}

/// gamma = tau X, a linear automorphism with H^dagger gamma = gamma H.
inline ComplexMatrix gamma_from_tau_X(const AntilinearOp& tau, const AntilinearOp& x) {
    require_same_dimension(tau.dimension(), x.dimension(), "gamma_from_tau_X");
    if (condition_number(tau.matrix()) > 1.0 / (1e3 * kMachineEpsilon) ||
        condition_number(x.matrix()) > 1.0 / (1e3 * kMachineEpsilon)) {
        throw SingularMatrixError("gamma_from_tau_X: singular input",
                                  std::max(condition_number(tau.matrix()), condition_number(x.matrix())));
    }
    return compose(tau, x);
}

/// Every operator of SymmetryOperators for a paired spectrum.
inline SymmetryOperators synthesize(const BlockDiagonalization& bd, const SpectralLabeling& labeling) {
    const auto n = static_cast<Index>(bd.table.dimension());
    ComplexMatrix s = build_S(bd.table);
    ComplexMatrix c0 = build_C0(labeling, bd.table);
    ComplexMatrix eta0 = build_eta0(s, c0);
    AntilinearOp tau0(s);
    AntilinearOp x0 = build_X0(eta0, tau0);
    AntilinearOp x = build_X(bd, x0);
    ComplexMatrix eta = build_metric_eta(bd, eta0);
    return SymmetryOperators{std::move(s),    build_Theta(n), std::move(tau0), build_tau(bd),
                             std::move(c0),   std::move(eta0), std::move(x0),  std::move(x),
                             std::move(eta)};
}

} // namespace pseudospec
