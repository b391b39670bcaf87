#pragma once

// Parameter sweeps over the scattering and truncated-model drivers.
// Rows are computed in parallel and returned in sample order.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "pseudospec/certify.hpp"
#include "pseudospec/io.hpp"
#include "pseudospec/scattering.hpp"
#include "pseudospec/truncated_model.hpp"

namespace pseudospec {

/// Worker count from PSEUDOSPEC_THREADS (0 or unset: hardware concurrency).
inline unsigned thread_count() {
    unsigned n = 0;
    if (const char* env = std::getenv("PSEUDOSPEC_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 0) throw InputError("PSEUDOSPEC_THREADS must be a non-negative integer");
        n = static_cast<unsigned>(v);
    }
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

/// out[i] = f(i) for i in [0, count), on up to `threads` workers.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, unsigned threads, F f) {
    std::vector<T> out(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                out[i] = f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

inline std::vector<double> linspace(double a, double b, std::size_t samples) {
    std::vector<double> xs(samples);
    for (std::size_t i = 0; i < samples; ++i)
        xs[i] = samples == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(samples - 1);
    return xs;
}

inline const std::vector<std::string>& residual_names() {
    static const std::vector<std::string> names{"anti_ph",       "X_involution",   "X_commute",
                                                "eta_hermitian", "eta_intertwine", "gamma_intertwine",
                                                "reconstruction"};
    return names;
}

namespace detail {
inline void append_residuals(std::vector<std::string>& row, const Certificate& cert) {
    for (const auto& name : residual_names()) {
        const auto it = cert.residuals.find(name);
        row.push_back(it == cert.residuals.end() ? "nan" : format_real(it->second));
    }
}
} // namespace detail

// ---------------------------------------------------------------------------
// Scattering sweep

struct ScatterSweepOptions {
    PotentialSpec potential;
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t samples = 11;
    std::size_t steps = 2000; // RK4 steps over the full interval
};

inline std::vector<std::string> scatter_sweep_header() {
    std::vector<std::string> h{"kind",   "x",      "k",      "v",      "U00_re", "U00_im", "U01_re", "U01_im",
                               "U10_re", "U10_im", "U11_re", "U11_im", "det_drift", "verdict"};
    for (const auto& n : residual_names()) h.push_back(n);
    return h;
}

/// One "sample" row per x (U = U(x, x_min)), then a "transfer" row for the whole interval.
inline std::vector<std::vector<std::string>> scatter_sweep(const ScatterSweepOptions& opt, unsigned threads) {
    opt.potential.validate();
    if (!(opt.x_min < opt.x_max)) throw InvalidArgument("scatter-sweep: x-range must satisfy a < b");
    if (opt.samples < 1) throw InvalidArgument("scatter-sweep: samples must be at least 1");
    if (opt.steps < 1) throw InvalidArgument("scatter-sweep: steps must be at least 1");
    const auto xs = linspace(opt.x_min, opt.x_max, opt.samples);
    const double k = opt.potential.k;

    auto row_for = [&](const std::string& kind, double x, const TransferResult& t) {
        const ComplexMatrix h = hamiltonian_at(x, opt.potential);
        const Certificate cert = decide(h);
        std::vector<std::string> row{kind, format_real(x), format_real(k), format_real(opt.potential.potential(x))};
        for (Index r = 0; r < 2; ++r)
            for (Index c = 0; c < 2; ++c) {
                row.push_back(format_real(t.U(r, c).real()));
                row.push_back(format_real(t.U(r, c).imag()));
            }
        row.push_back(format_real(t.det_drift));
        row.push_back(to_string(cert.verdict));
        detail::append_residuals(row, cert);
        return row;
    };

    auto rows = parallel_map<std::vector<std::string>>(xs.size(), threads, [&](std::size_t i) {
        const double x = xs[i];
        TransferResult t;
        if (x <= opt.x_min) {
            t.U = ComplexMatrix::Identity(2, 2);
            t.steps = 0;
        } else {
            const double frac = (x - opt.x_min) / (opt.x_max - opt.x_min);
            const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(frac * static_cast<double>(opt.steps))));
            t = evolve_transfer(opt.potential, opt.x_min, x, n);
        }
        return row_for("sample", x, t);
    });
    rows.push_back(row_for("transfer", opt.x_max, evolve_transfer(opt.potential, opt.x_min, opt.x_max, opt.steps)));
    return rows;
}

// ---------------------------------------------------------------------------
// Truncated-model sweep

struct ModelSweepOptions {
    std::vector<double> lambdas;
    double varpi_min = 0.5;
    double varpi_max = 3.0;
    std::size_t samples = 6;
    bool compare_closed_form = false;
};

inline std::vector<std::string> model_sweep_header(const ModelSweepOptions& opt) {
    std::vector<std::string> h{"varpi", "regime", "ep", "exceptional_index"};
    for (std::size_t i = 1; i <= 2 * opt.lambdas.size(); ++i) {
        h.push_back("E" + std::to_string(i) + "_re");
        h.push_back("E" + std::to_string(i) + "_im");
    }
    h.push_back("p_lists");
    h.push_back("cond_A");
    h.push_back("verdict");
    for (const auto& n : residual_names()) h.push_back(n);
    if (opt.compare_closed_form) {
        h.push_back("closed_form_X_dev");
        h.push_back("lifted_X_dev");
        h.push_back("closed_form_X_commute");
        h.push_back("closed_form_tau_anti_ph");
    }
    return h;
}

inline std::string p_lists_field(const SpectralTable& table) {
    std::string out;
    for (std::size_t c = 0; c < table.clusters.size(); ++c) {
        if (c) out += ';';
        out += '[';
        const auto& p = table.clusters[c].p_list;
        for (std::size_t a = 0; a < p.size(); ++a) out += (a ? " " : "") + std::to_string(p[a]);
        out += ']';
    }
    return out;
}

inline std::vector<std::string> model_row(const ModelSpec& spec, bool compare, const ToleranceProfile& tol = {}) {
    const ComplexMatrix h = build_H(spec);
    const Certificate cert = decide(h, tol);
    const auto star = is_exceptional(spec);

    std::vector<cplx> eigs;
    std::size_t real_count = 0;
    bool defective = false;
    if (cert.table) {
        for (const auto& c : cert.table->clusters) {
            for (std::size_t j = 0; j < c.algebraic; ++j) eigs.push_back(c.center);
            if (is_real_eigenvalue(c.center, tol.real)) real_count += c.algebraic;
            for (auto p : c.p_list) defective = defective || p > 1;
        }
    } else {
        const SchurForm s = complex_schur(h);
        for (Index j = 0; j < h.rows(); ++j) eigs.push_back(s.T(j, j));
        std::sort(eigs.begin(), eigs.end(), [](cplx a, cplx b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        });
        for (cplx e : eigs) real_count += is_real_eigenvalue(e, tol.real) ? 1 : 0;
    }

    std::vector<std::string> row{format_real(spec.varpi), regime_label(real_count), defective ? "1" : "0",
                                 std::to_string(star ? *star + 1 : 0)};
    for (cplx e : eigs) {
        row.push_back(format_real(e.real()));
        row.push_back(format_real(e.imag()));
    }
    row.push_back(cert.table ? p_lists_field(*cert.table) : "");
    row.push_back(cert.condition ? format_real(*cert.condition) : "nan");
    row.push_back(to_string(cert.verdict));
    detail::append_residuals(row, cert);
    if (compare) {
        const AntilinearOp cf = closed_form_X(spec);
        const AntilinearOp lifted = lifted_X(spec);
        if (cert.witnesses) {
            row.push_back(format_real((cert.witnesses->X.matrix() - cf.matrix()).cwiseAbs().maxCoeff()));
            row.push_back(format_real((cert.witnesses->X.matrix() - lifted.matrix()).cwiseAbs().maxCoeff()));
        } else {
            row.push_back("nan");
            row.push_back("nan");
        }
        row.push_back(format_real(residual_commute_antilinear(h, cf)));
        row.push_back(format_real(residual_intertwine_antilinear(h, closed_form_tau(spec))));
    }
    return row;
}

inline std::vector<std::vector<std::string>> model_sweep(const ModelSweepOptions& opt, unsigned threads) {
    ModelSpec probe{opt.lambdas, opt.varpi_min};
    probe.validate();
    if (!(opt.varpi_min > 0.0) || !(opt.varpi_min <= opt.varpi_max))
        throw InvalidArgument("model-sweep: varpi-range must satisfy 0 < a <= b");
    if (opt.samples < 1) throw InvalidArgument("model-sweep: samples must be at least 1");
    const auto ws = linspace(opt.varpi_min, opt.varpi_max, opt.samples);
    return parallel_map<std::vector<std::string>>(ws.size(), threads, [&](std::size_t i) {
        return model_row(ModelSpec{opt.lambdas, ws[i]}, opt.compare_closed_form);
    });
}

} // namespace pseudospec
