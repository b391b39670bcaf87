#pragma once

// Residual checks and the decision procedure.
//
// The verdict comes from the pairing test on the spectral table; synthesized
// witnesses only confirm it. Numerical breakdown (staircase, conditioning,
// witnesses failing their residual bounds) is reported as Inconclusive.

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "pseudospec/antilinear.hpp"
#include "pseudospec/blockdiag.hpp"
#include "pseudospec/symmetry.hpp"

namespace pseudospec {

namespace detail {
inline double relative(double num, double a, double b) {
    const double den = a * b;
    return den > 0.0 ? num / den : num;
}
} // namespace detail

/// ‖H†K − K conj(H)‖ / (‖H‖ ‖K‖); zero iff H† = L H L⁻¹.
inline double residual_intertwine_antilinear(const ComplexMatrix& h, const AntilinearOp& l) {
    require_same_dimension(h.rows(), l.dimension(), "residual_intertwine_antilinear");
    const ComplexMatrix& k = l.matrix();
    return detail::relative(norm(h.adjoint() * k - k * h.conjugate()), norm(h), norm(k));
}

/// ‖HK − K conj(H)‖ / (‖H‖ ‖K‖); zero iff [H, L] = 0.
inline double residual_commute_antilinear(const ComplexMatrix& h, const AntilinearOp& l) {
    require_same_dimension(h.rows(), l.dimension(), "residual_commute_antilinear");
    const ComplexMatrix& k = l.matrix();
    return detail::relative(norm(h * k - k * h.conjugate()), norm(h), norm(k));
}

/// ‖K conj(K) − I‖.
inline double residual_involution(const AntilinearOp& l) { return is_involution(l, 0.0).residual; }

struct MetricResidual {
    double hermitian;
    double intertwine;
};

/// (‖η − η†‖/‖η‖, ‖H†η − ηH‖/(‖H‖‖η‖)).
inline MetricResidual residual_hermitian_metric(const ComplexMatrix& h, const ComplexMatrix& eta) {
    require_same_dimension(h.rows(), eta.rows(), "residual_hermitian_metric");
    const double ne = norm(eta);
    const double herm = ne > 0.0 ? norm(eta - eta.adjoint()) / ne : 0.0;
    const double inter = detail::relative(norm(h.adjoint() * eta - eta * h), norm(h), ne);
    return {herm, inter};
}

/// ‖H†γ − γH‖ / (‖H‖ ‖γ‖) for a linear intertwiner.
inline double residual_intertwine_linear(const ComplexMatrix& h, const ComplexMatrix& gamma) {
    require_same_dimension(h.rows(), gamma.rows(), "residual_intertwine_linear");
    return detail::relative(norm(h.adjoint() * gamma - gamma * h), norm(h), norm(gamma));
}

struct ToleranceProfile {
    double cluster = 1e-8;
    double rank = 1e-9;
    double real = 1e-8;
    double pair = 1e-8;
    double reconstruction = 1e-8;
    double witness = 1e-8;
    double coalesce = 1e-3;
    double max_condition = 1e12;

    BlockDiagOptions blockdiag_options() const { return {cluster, rank, coalesce, max_condition}; }

    std::map<std::string, double> as_map() const {
        return {{"cluster", cluster},   {"rank", rank},       {"real", real},
                {"pair", pair},         {"reconstruction", reconstruction},
                {"witness", witness},   {"coalesce", coalesce}, {"max_condition", max_condition}};
    }
};

enum class Verdict { PseudoHermitian, NotPseudoHermitian, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::PseudoHermitian: return "pseudo_hermitian";
    case Verdict::NotPseudoHermitian: return "not_pseudo_hermitian";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

struct Certificate {
    Verdict verdict = Verdict::Inconclusive;
    bool pairing_ok = false;
    std::string diagnostics;
    std::optional<SpectralTable> table;
    std::optional<SpectralLabeling> labeling;
    std::optional<PairingReport> pairing;
    std::map<std::string, double> residuals;
    std::map<std::string, double> tolerances;
    std::optional<double> condition;
    std::optional<SymmetryOperators> witnesses;
    std::optional<std::size_t> failed_power; // staircase failure
};

/// Residuals of a full synthesized set against H.
inline std::map<std::string, double> witness_residuals(const ComplexMatrix& h, const SymmetryOperators& ops) {
    const MetricResidual m = residual_hermitian_metric(h, ops.eta);
    const ComplexMatrix gamma = compose(ops.tau, ops.X);
    return {{"anti_ph", residual_intertwine_antilinear(h, ops.tau)},
            {"X_involution", residual_involution(ops.X)},
            {"X_commute", residual_commute_antilinear(h, ops.X)},
            {"eta_hermitian", m.hermitian},
            {"eta_intertwine", m.intertwine},
            {"gamma_intertwine", residual_intertwine_linear(h, gamma)}};
}

inline Certificate decide(const ComplexMatrix& h, const ToleranceProfile& tol = {}) {
    Certificate cert;
    cert.tolerances = tol.as_map();
    std::optional<BlockDiagonalization> bd;
    try {
        bd = block_diagonalize(h, tol.blockdiag_options());
    } catch (const StaircaseError& e) {
        cert.diagnostics = e.what();
        cert.failed_power = e.power();
        return cert;
    } catch (const IllConditionedError& e) {
        cert.diagnostics = e.what();
        cert.condition = e.condition();
        return cert;
    } catch (const SingularMatrixError& e) {
        cert.diagnostics = e.what();
        cert.condition = e.condition();
        return cert;
    } catch (const ConvergenceError& e) {
        cert.diagnostics = e.what();
        return cert;
    }
    cert.table = bd->table;
    cert.condition = bd->condition;
    cert.residuals["reconstruction"] = bd->reconstruction_residual;
    cert.residuals["anti_ph"] = residual_intertwine_antilinear(h, build_tau(*bd));

    const SpectralLabeling labeling = classify_spectrum(bd->table, tol.real, tol.pair);
    const PairingReport report = check_pairing(labeling, bd->table);
    cert.labeling = labeling;
    cert.pairing = report;
    cert.pairing_ok = report.ok;
    if (!report.ok) {
        cert.verdict = Verdict::NotPseudoHermitian;
        cert.diagnostics = report.diagnostics;
        return cert;
    }

    SymmetryOperators ops = synthesize(*bd, labeling);
    for (const auto& [name, value] : witness_residuals(h, ops)) cert.residuals[name] = value;

    for (const auto& [name, value] : cert.residuals) {
        const double limit = name == "reconstruction" ? tol.reconstruction : tol.witness;
        if (!(value <= limit)) {
            cert.diagnostics = "witness residual " + name + " = " + std::to_string(value) +
                               " exceeds tolerance " + std::to_string(limit);
            return cert;
        }
    }
    cert.verdict = Verdict::PseudoHermitian;
    cert.witnesses = std::move(ops);
    return cert;
}

} // namespace pseudospec
