#pragma once

// Random instances with prescribed Jordan structure: H = A H0 A^{-1}.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "pseudospec/pseudospec.hpp"

namespace testsupport {

using pseudospec::ComplexMatrix;
using pseudospec::cplx;
using pseudospec::Index;

struct PrescribedCluster {
    cplx E;
    std::vector<std::size_t> p_list; // descending
};

struct PrescribedSpectrum {
    std::vector<PrescribedCluster> clusters;

    std::size_t dimension() const {
        std::size_t n = 0;
        for (const auto& c : clusters)
            for (auto p : c.p_list) n += p;
        return n;
    }
};

struct Instance {
    PrescribedSpectrum spectrum;
    ComplexMatrix A;
    ComplexMatrix H0;
    ComplexMatrix H;
};

inline ComplexMatrix random_complex(std::mt19937_64& rng, Index rows, Index cols, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    ComplexMatrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) m(r, c) = cplx(g(rng), g(rng));
    return m;
}

inline pseudospec::ComplexVector random_vector(std::mt19937_64& rng, Index n) {
    return random_complex(rng, n, 1).col(0);
}

/// Gaussian matrix scaled by 1/sqrt(n), redrawn until cond_2 < max_condition.
inline ComplexMatrix random_well_conditioned(std::mt19937_64& rng, Index n, double max_condition = 1e4) {
    for (;;) {
        ComplexMatrix a = random_complex(rng, n, n, 1.0 / std::sqrt(2.0 * static_cast<double>(n)));
        if (pseudospec::condition_number(a) < max_condition) return a;
    }
}

inline ComplexMatrix jordan_form(const PrescribedSpectrum& s) {
    const auto n = static_cast<Index>(s.dimension());
    ComplexMatrix h0 = ComplexMatrix::Zero(n, n);
    Index col = 0;
    for (const auto& c : s.clusters)
        for (auto p : c.p_list)
            for (std::size_t i = 0; i < p; ++i, ++col) {
                h0(col, col) = c.E;
                if (i > 0) h0(col - 1, col) = 1.0;
            }
    return h0;
}

inline Instance realize(std::mt19937_64& rng, PrescribedSpectrum s) {
    Instance inst;
    inst.H0 = jordan_form(s);
    inst.A = random_well_conditioned(rng, inst.H0.rows());
    inst.H = inst.A * inst.H0 * pseudospec::inverse(inst.A);
    inst.spectrum = std::move(s);
    return inst;
}

/// Descending partition of size at most `budget`, parts at most `max_part`.
inline std::vector<std::size_t> random_p_list(std::mt19937_64& rng, std::size_t budget, std::size_t max_part = 3) {
    std::vector<std::size_t> p;
    std::uniform_int_distribution<int> chains(1, 2);
    const int count = chains(rng);
    for (int a = 0; a < count && budget > 0; ++a) {
        std::uniform_int_distribution<std::size_t> len(1, std::min(max_part, budget));
        p.push_back(len(rng));
        budget -= p.back();
    }
    std::sort(p.rbegin(), p.rend());
    return p;
}

namespace detail {
inline bool far_from(const std::vector<cplx>& used, cplx e, double gap) {
    for (cplx u : used)
        if (std::abs(u - e) < gap || std::abs(std::conj(u) - e) < gap) return false;
    return true;
}

inline cplx draw_point(std::mt19937_64& rng, std::vector<cplx>& used, bool real, double gap) {
    std::uniform_real_distribution<double> re(-3.0, 3.0), im(0.5, 3.0);
    for (;;) {
        const cplx e = real ? cplx(re(rng), 0.0) : cplx(re(rng), im(rng));
        if (far_from(used, e, gap)) {
            used.push_back(e);
            return e;
        }
    }
}
} // namespace detail

/// Real clusters plus conjugate pairs with equal p_lists, total dimension in [2, max_dim].
inline PrescribedSpectrum random_paired_spectrum(std::mt19937_64& rng, std::size_t max_dim = 12) {
    PrescribedSpectrum s;
    std::vector<cplx> used;
    std::uniform_int_distribution<std::size_t> target_dist(2, max_dim);
    const std::size_t target = target_dist(rng);
    std::bernoulli_distribution pick_pair(0.5);
    std::size_t n = 0;
    while (n < target) {
        const std::size_t room = target - n;
        if (room >= 2 && pick_pair(rng)) {
            auto p = random_p_list(rng, room / 2);
            const cplx e = detail::draw_point(rng, used, false, 0.5);
            s.clusters.push_back({e, p});
            s.clusters.push_back({std::conj(e), p});
            for (auto x : p) n += 2 * x;
        } else {
            auto p = random_p_list(rng, room);
            s.clusters.push_back({detail::draw_point(rng, used, true, 0.5), p});
            for (auto x : p) n += x;
        }
    }
    return s;
}

/// A paired spectrum plus one complex cluster whose conjugate is absent.
inline PrescribedSpectrum random_unpaired_spectrum(std::mt19937_64& rng, std::size_t max_dim = 12) {
    std::uniform_int_distribution<std::size_t> lone_size(1, 2);
    const std::size_t lone = lone_size(rng);
    PrescribedSpectrum s = random_paired_spectrum(rng, max_dim - lone);
    std::vector<cplx> used;
    for (const auto& c : s.clusters) used.push_back(c.E);
    s.clusters.push_back({detail::draw_point(rng, used, false, 0.5), {lone}});
    return s;
}

/// Sorted multiset of p_lists paired with rounded eigenvalues, for structure comparison.
inline std::vector<std::vector<std::size_t>> p_lists_by_value(const PrescribedSpectrum& s) {
    auto clusters = s.clusters;
    std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
        return a.E.real() != b.E.real() ? a.E.real() < b.E.real() : a.E.imag() < b.E.imag();
    });
    std::vector<std::vector<std::size_t>> out;
    for (const auto& c : clusters) out.push_back(c.p_list);
    return out;
}

inline std::vector<std::vector<std::size_t>> p_lists_of(const pseudospec::SpectralTable& t) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& c : t.clusters) out.push_back(c.p_list);
    return out;
}

} // namespace testsupport
