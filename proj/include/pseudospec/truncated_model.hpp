#pragma once

// H = (1/2w)(Lambda K − 2w^2 sigma_3) on C^2 ⊗ C^L with Lambda = diag(lambdas),
// and its closed-form Jordan data and symmetry operators.
//
// Basis ordering: slot 2l is |eps_{l+}>, slot 2l+1 is |eps_{l-}> (l zero-based),
// so every operator below is block diagonal with one 2x2 block per l.
// Branch: E_l = sqrt(w^2 − lambda_l) for lambda_l <= w^2, i sqrt(lambda_l − w^2) otherwise.

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pseudospec/antilinear.hpp"
#include "pseudospec/symmetry.hpp"

namespace pseudospec {

struct ModelSpec {
    std::vector<double> lambdas;
    double varpi = 1.0;

    void validate() const {
        if (lambdas.empty()) throw InvalidArgument("model: lambdas must be non-empty");
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            if (!std::isfinite(lambdas[i]) || !(lambdas[i] > 0.0))
                throw InvalidArgument("model: lambdas must be positive and finite");
            if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
                throw InvalidArgument("model: lambdas must be strictly increasing");
        }
        if (!std::isfinite(varpi) || !(varpi > 0.0)) throw InvalidArgument("model: varpi must be positive");
    }

    Index dimension() const { return static_cast<Index>(2 * lambdas.size()); }
};

inline constexpr double kExceptionalTol = 1e-12;

inline ComplexMatrix build_H(const ModelSpec& spec) {
    spec.validate();
    const double w = spec.varpi;
    const Index n = spec.dimension();
    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    for (std::size_t l = 0; l < spec.lambdas.size(); ++l) {
        const double lam = spec.lambdas[l];
        const auto p = static_cast<Index>(2 * l);
        h(p, p) = (lam - 2.0 * w * w) / (2.0 * w);
        h(p, p + 1) = lam / (2.0 * w);
        h(p + 1, p) = -lam / (2.0 * w);
        h(p + 1, p + 1) = (-lam + 2.0 * w * w) / (2.0 * w);
    }
    return h;
}

/// {sqrt(lambda_l)}.
inline std::vector<double> exceptional_set(const ModelSpec& spec) {
    spec.validate();
    std::vector<double> out;
    for (double lam : spec.lambdas) out.push_back(std::sqrt(lam));
    return out;
}

/// Zero-based l_star with |w − sqrt(lambda_{l_star})| <= tol, if any.
inline std::optional<std::size_t> is_exceptional(const ModelSpec& spec, double tol = kExceptionalTol) {
    const auto eps = exceptional_set(spec);
    for (std::size_t l = 0; l < eps.size(); ++l)
        if (std::abs(spec.varpi - eps[l]) <= tol) return l;
    return std::nullopt;
}

inline cplx block_energy(double lambda, double varpi) {
    const double d = varpi * varpi - lambda;
    return d >= 0.0 ? cplx(std::sqrt(d), 0.0) : cplx(0.0, std::sqrt(-d));
}

/// Number of l with lambda_l < w^2.
inline std::size_t real_pair_count(const ModelSpec& spec) {
    std::size_t m = 0;
    for (double lam : spec.lambdas)
        if (lam < spec.varpi * spec.varpi) ++m;
    return m;
}

namespace detail {

inline void set_block(ComplexMatrix& m, std::size_t l, const Eigen::Matrix2cd& b) {
    m.block<2, 2>(static_cast<Index>(2 * l), static_cast<Index>(2 * l)) = b;
}

inline Eigen::Matrix2cd symmetric_block(cplx diag, cplx off) {
    Eigen::Matrix2cd b;
    b << diag, off, off, diag;
    return b;
}

inline Eigen::Matrix2cd sigma1() { return symmetric_block(0.0, 1.0); }

inline void require_regular(const ModelSpec& spec, const char* what) {
    if (auto l = is_exceptional(spec)) {
        std::ostringstream os;
        os << what << ": varpi = " << spec.varpi << " is exceptional (sqrt of lambda #" << (*l + 1) << ")";
        throw RegimeError(os.str());
    }
}

inline void require_exceptional_at(const ModelSpec& spec, std::size_t ell_star, const char* what) {
    if (ell_star >= spec.lambdas.size() || is_exceptional(spec) != ell_star) {
        std::ostringstream os;
        os << what << ": varpi = " << spec.varpi << " is not sqrt of lambda #" << (ell_star + 1);
        throw RegimeError(os.str());
    }
}

/// 1/2 [[1, −2/sqrt(lambda)], [1, 0]].
inline Eigen::Matrix2cd star_block(double lambda) {
    Eigen::Matrix2cd b;
    b << 0.5, -1.0 / std::sqrt(lambda), 0.5, 0.0;
    return b;
}

inline Eigen::Matrix2cd star_block_inverse(double lambda) {
    Eigen::Matrix2cd b;
    b << 0.0, 2.0, -std::sqrt(lambda), std::sqrt(lambda);
    return b;
}

/// Jordan basis matrix valid at every w: A off the exceptional block, A_star on it.
inline ComplexMatrix jordan_basis(const ModelSpec& spec, bool inverse_form) {
    spec.validate();
    const auto star = is_exceptional(spec);
    ComplexMatrix a = ComplexMatrix::Zero(spec.dimension(), spec.dimension());
    for (std::size_t l = 0; l < spec.lambdas.size(); ++l) {
        if (star == l) {
            set_block(a, l, inverse_form ? star_block_inverse(spec.lambdas[l]) : star_block(spec.lambdas[l]));
            continue;
        }
        const cplx e = block_energy(spec.lambdas[l], spec.varpi);
        const cplx r = inverse_form ? spec.varpi / e : e / spec.varpi;
        set_block(a, l, symmetric_block((1.0 - r) / 2.0, (1.0 + r) / 2.0));
    }
    return a;
}

} // namespace detail

/// A = 1/2 [[1 − E/w, 1 + E/w], [1 + E/w, 1 − E/w]]; requires w outside the exceptional set.
inline ComplexMatrix closed_form_A(const ModelSpec& spec) {
    detail::require_regular(spec, "closed_form_A");
    return detail::jordan_basis(spec, false);
}

/// A^{-1} = 1/2 [[1 − w/E, 1 + w/E], [1 + w/E, 1 − w/E]].
inline ComplexMatrix closed_form_A_inverse(const ModelSpec& spec) {
    detail::require_regular(spec, "closed_form_A_inverse");
    return detail::jordan_basis(spec, true);
}

/// A_star with the 1/2 [[1, −2/sqrt(lambda)], [1, 0]] block at l_star (zero-based).
inline ComplexMatrix closed_form_A_star(const ModelSpec& spec, std::size_t ell_star) {
    detail::require_exceptional_at(spec, ell_star, "closed_form_A_star");
    return detail::jordan_basis(spec, false);
}

inline ComplexMatrix closed_form_A_star_inverse(const ModelSpec& spec, std::size_t ell_star) {
    detail::require_exceptional_at(spec, ell_star, "closed_form_A_star_inverse");
    return detail::jordan_basis(spec, true);
}

/// E sigma_3, plus |eps_{l*+}><eps_{l*-}| at an exceptional point.
inline ComplexMatrix closed_form_H0(const ModelSpec& spec) {
    spec.validate();
    const auto star = is_exceptional(spec);
    ComplexMatrix h0 = ComplexMatrix::Zero(spec.dimension(), spec.dimension());
    for (std::size_t l = 0; l < spec.lambdas.size(); ++l) {
        const auto p = static_cast<Index>(2 * l);
        if (star == l) {
            h0(p, p + 1) = 1.0;
            continue;
        }
        const cplx e = block_energy(spec.lambdas[l], spec.varpi);
        h0(p, p) = e;
        h0(p + 1, p + 1) = -e;
    }
    return h0;
}

/// K = I on blocks with lambda_l <= w^2, sigma_1 on the rest.
inline AntilinearOp closed_form_X(const ModelSpec& spec) {
    spec.validate();
    const auto star = is_exceptional(spec);
    ComplexMatrix k = ComplexMatrix::Zero(spec.dimension(), spec.dimension());
    for (std::size_t l = 0; l < spec.lambdas.size(); ++l) {
        const bool real_block = spec.lambdas[l] <= spec.varpi * spec.varpi || (star && l <= *star);
        detail::set_block(k, l, real_block ? Eigen::Matrix2cd::Identity() : detail::sigma1());
    }
    return AntilinearOp(k);
}

/// A^{-2} per regular block; −2 sqrt(lambda) [[0, 1], [1, −2]] on the exceptional block.
inline AntilinearOp closed_form_tau(const ModelSpec& spec) {
    spec.validate();
    const auto star = is_exceptional(spec);
    const double w2 = spec.varpi * spec.varpi;
    ComplexMatrix k = ComplexMatrix::Zero(spec.dimension(), spec.dimension());
    for (std::size_t l = 0; l < spec.lambdas.size(); ++l) {
        if (star == l) {
            Eigen::Matrix2cd b;
            b << 0.0, 1.0, 1.0, -2.0;
            detail::set_block(k, l, -2.0 * std::sqrt(spec.lambdas[l]) * b);
            continue;
        }
        const cplx e = block_energy(spec.lambdas[l], spec.varpi);
        const cplx r = w2 / (e * e);
        detail::set_block(k, l, detail::symmetric_block((1.0 + r) / 2.0, (1.0 - r) / 2.0));
    }
    return AntilinearOp(k);
}

/// Proper lift A X0 A^{-1} of X0 through the closed-form Jordan basis.
inline AntilinearOp lifted_X(const ModelSpec& spec) {
    const ComplexMatrix a = detail::jordan_basis(spec, false);
    const ComplexMatrix a_inv = detail::jordan_basis(spec, true);
    return AntilinearOp(a * closed_form_X(spec).matrix() * a_inv.conjugate());
}

/// S, Theta, tau0, tau, C0, eta0, X0, X exactly as in the closed forms;
/// eta = A^{-1 dagger} eta0 A^{-1} through the closed-form basis.
inline SymmetryOperators appendix_operators(const ModelSpec& spec) {
    spec.validate();
    const auto star = is_exceptional(spec);
    const Index n = spec.dimension();
    ComplexMatrix s = ComplexMatrix::Identity(n, n);
    ComplexMatrix c0 = ComplexMatrix::Identity(n, n);
    ComplexMatrix eta0 = ComplexMatrix::Identity(n, n);
    for (std::size_t l = 0; l < spec.lambdas.size(); ++l) {
        const bool real_block = spec.lambdas[l] <= spec.varpi * spec.varpi || (star && l <= *star);
        if (star == l) {
            detail::set_block(s, l, detail::sigma1());
            detail::set_block(eta0, l, detail::sigma1());
        }
        if (!real_block) {
            detail::set_block(c0, l, detail::sigma1());
            detail::set_block(eta0, l, detail::sigma1());
        }
    }
    const ComplexMatrix a_inv = detail::jordan_basis(spec, true);
    const AntilinearOp x = closed_form_X(spec);
    return SymmetryOperators{s,
                             AntilinearOp::conjugation(n),
                             AntilinearOp(s),
                             closed_form_tau(spec),
                             c0,
                             eta0,
                             x,
                             x,
                             a_inv.adjoint() * eta0 * a_inv};
}

/// "none-real", "2-real", ...: count of real eigenvalues with algebraic multiplicity.
inline std::string regime_label(std::size_t real_count) {
    return real_count == 0 ? std::string("none-real") : std::to_string(real_count) + "-real";
}

} // namespace pseudospec
