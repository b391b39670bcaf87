#pragma once

// Jordan-basis block diagonalization H = A H0 A⁻¹.
//
// Eigenvalues come from a complex Schur form. A cluster's Jordan structure is
// read off the leading block of a reordered Schur form, i.e. on the exact
// invariant subspace of the cluster, so the kernel staircase of (H − E)^l is
// never polluted by the rest of the spectrum. Chains are built top-down and
// every link (H − E) v_i = v_{i-1} holds by construction.
//
// Canonical ordering (frozen):
//   clusters  by Re E, then Im E (real parts equal within the cluster tolerance)
//   chains    by descending length, ties by the pivot index of the head vector
//   vectors   by chain index i ascending
// Gauge: every chain head has unit norm and its first non-negligible
// component real positive.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pseudospec/linalg.hpp"

namespace pseudospec {

struct EigenCluster {
    cplx center;
    std::size_t geometric = 0;         // d_n
    std::vector<std::size_t> p_list;   // Jordan dimensions, descending
    std::size_t algebraic = 0;         // sum of p_list (or member count for a skeleton)
    std::vector<Index> members;        // indices into the raw eigenvalue list
};

struct SpectralTable {
    std::vector<EigenCluster> clusters;
    double cluster_tol = 0.0; // absolute
    bool collapsed_warning = false;

    std::size_t dimension() const {
        std::size_t n = 0;
        for (const auto& c : clusters) n += c.algebraic;
        return n;
    }
};

/// Jordan label (n, a, i) of a basis slot, zero-based.
struct JordanLabel {
    std::size_t cluster;
    std::size_t chain;
    std::size_t index;
    friend bool operator==(const JordanLabel&, const JordanLabel&) = default;
};

struct BlockDiagonalization {
    ComplexMatrix A;
    ComplexMatrix H0;
    SpectralTable table;
    std::vector<JordanLabel> label_order;
    double condition = 1.0;                 // cond_2(A)
    double reconstruction_residual = 0.0;   // ‖H − A H0 A⁻¹‖ / ‖H‖
};

struct BlockDiagOptions {
    double cluster_tol = 1e-8;     // relative to ‖H‖_F
    double rank_tol = 1e-9;        // staircase threshold, relative to ‖H‖_F^l
    double coalesce_radius = 1e-3; // max spread of a split defective eigenvalue, relative to ‖H‖_F
    double max_condition = 1e12;
};

// ---------------------------------------------------------------------------
// Clustering

/// Single-linkage clustering: raw values within `tol` (absolute) of each other
/// share a cluster. Values are sorted by (Re, Im) first so the result only
/// depends on the multiset of inputs. The returned table is a skeleton:
/// `algebraic` is the member count and the Jordan data is empty.
inline SpectralTable cluster_eigenvalues(const std::vector<cplx>& raw, double tol) {
    if (raw.empty()) throw InvalidArgument("cluster_eigenvalues: empty input");
    if (!(tol >= 0.0)) throw InvalidArgument("cluster_eigenvalues: tolerance must be non-negative");
    const std::size_t n = raw.size();
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        const cplx& x = raw[static_cast<std::size_t>(a)];
        const cplx& y = raw[static_cast<std::size_t>(b)];
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& x = raw[static_cast<std::size_t>(order[i])];
            const auto& y = raw[static_cast<std::size_t>(order[j])];
            if (std::abs(x - y) <= tol) {
                const std::size_t ri = find(i), rj = find(j);
                if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
            }
        }
    }

    SpectralTable table;
    table.cluster_tol = tol;
    std::vector<std::size_t> slot(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (slot[r] == n) {
            slot[r] = table.clusters.size();
            table.clusters.emplace_back();
        }
        table.clusters[slot[r]].members.push_back(order[i]);
    }
    for (auto& c : table.clusters) {
        cplx sum = 0.0;
        for (Index m : c.members) sum += raw[static_cast<std::size_t>(m)];
        c.center = sum / static_cast<double>(c.members.size());
        c.algebraic = c.members.size();
    }
    if (table.clusters.size() == 1 && n > 1) {
        double spread = 0.0;
        for (const auto& x : raw)
            for (const auto& y : raw) spread = std::max(spread, std::abs(x - y));
        table.collapsed_warning = spread > tol;
    }
    return table;
}

// ---------------------------------------------------------------------------
// Jordan chains on an invariant subspace

namespace detail {

struct Staircase {
    std::vector<std::size_t> kernel_dims;   // d_1 .. d_q
    std::vector<ComplexMatrix> kernels;     // orthonormal bases of ker N^l, l = 0..q
};

/// Kernel dimensions of N^l for l = 1.. until they reach N's size.
/// `scale` is the reference norm so the threshold at power l is rank_tol * scale^l.
inline Staircase kernel_staircase(const ComplexMatrix& nilpotent, double scale, double rank_tol) {
    const Index m = nilpotent.rows();
    Staircase st;
    st.kernels.push_back(ComplexMatrix(m, 0));
    ComplexMatrix power = ComplexMatrix::Identity(m, m);
    std::size_t previous = 0;
    std::size_t previous_step = static_cast<std::size_t>(m);
    for (std::size_t l = 1; l <= static_cast<std::size_t>(m); ++l) {
        power = nilpotent * power;
        Eigen::JacobiSVD<ComplexMatrix> svd(power, Eigen::ComputeFullV);
        const double cutoff = rank_tol * std::pow(scale, static_cast<double>(l));
        const auto rank = static_cast<std::size_t>((svd.singularValues().array() > cutoff).count());
        const std::size_t d = static_cast<std::size_t>(m) - rank;
        if (d < previous || (l == 1 && d == 0)) {
            std::ostringstream os;
            os << "kernel staircase: dim ker N^" << l << " = " << d
               << " breaks monotonicity (previous " << previous << ")";
            throw StaircaseError(os.str(), l);
        }
        const std::size_t step = d - previous;
        if (step > previous_step) {
            std::ostringstream os;
            os << "kernel staircase: increment " << step << " at power " << l
               << " exceeds previous increment " << previous_step;
            throw StaircaseError(os.str(), l);
        }
        if (step == 0) {
            std::ostringstream os;
            os << "kernel staircase stalls at power " << l << " with dim " << d << " < " << m;
            throw StaircaseError(os.str(), l);
        }
        st.kernel_dims.push_back(d);
        st.kernels.push_back(svd.matrixV().rightCols(static_cast<Index>(d)));
        previous = d;
        previous_step = step;
        if (d == static_cast<std::size_t>(m)) return st;
    }
    throw StaircaseError("kernel staircase did not reach full dimension", static_cast<std::size_t>(m));
}

inline ComplexMatrix orthonormal_basis(const ComplexMatrix& cols, double tol) {
    if (cols.cols() == 0) return ComplexMatrix(cols.rows(), 0);
    Eigen::JacobiSVD<ComplexMatrix> svd(cols, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    Index r = 0;
    while (r < sv.size() && sv(r) > tol) ++r;
    return svd.matrixU().leftCols(r);
}

struct LocalChain {
    ComplexVector top; // generalized eigenvector of highest rank
    std::size_t length;
};

/// Top-down chain selection inside the invariant subspace of one cluster.
inline std::vector<LocalChain> select_chains(const ComplexMatrix& nilpotent, const Staircase& st) {
    const std::size_t q = st.kernel_dims.size();
    auto d = [&](std::size_t l) -> std::size_t {
        if (l == 0) return 0;
        return st.kernel_dims[std::min(l, q) - 1];
    };
    std::vector<LocalChain> chains;
    for (std::size_t l = q; l >= 1; --l) {
        const std::size_t here = d(l) - d(l - 1);
        const std::size_t above = d(l + 1) - d(l);
        const std::size_t fresh = here - above;
        if (fresh == 0) continue;

        // Span to stay independent of: ker N^{l-1} plus level-l vectors of longer chains.
        ComplexMatrix span(nilpotent.rows(), static_cast<Index>(d(l - 1) + above));
        span.leftCols(static_cast<Index>(d(l - 1))) = st.kernels[l - 1];
        Index col = static_cast<Index>(d(l - 1));
        for (const auto& c : chains) {
            ComplexVector v = c.top;
            for (std::size_t k = l; k < c.length; ++k) v = nilpotent * v;
            span.col(col++) = v.normalized();
        }
        const ComplexMatrix w = orthonormal_basis(span, 1e-10);
        const ComplexMatrix& kl = st.kernels[l];
        const ComplexMatrix projected = kl - w * (w.adjoint() * kl);
        Eigen::JacobiSVD<ComplexMatrix> svd(projected, Eigen::ComputeThinU);
        if (svd.singularValues().size() < static_cast<Index>(fresh) ||
            svd.singularValues()(static_cast<Index>(fresh) - 1) < 1e-8) {
            throw StaircaseError("chain selection: no independent generalized eigenvector", l);
        }
        for (std::size_t a = 0; a < fresh; ++a) {
            chains.push_back({svd.matrixU().col(static_cast<Index>(a)), l});
        }
    }
    return chains;
}

inline Index gauge_pivot(const ComplexVector& v) {
    const double vmax = v.cwiseAbs().maxCoeff();
    for (Index j = 0; j < v.size(); ++j) {
        if (std::abs(v(j)) > 1e-8 * vmax) return j;
    }
    return 0;
}

inline Index largest_pivot(const ComplexVector& v) {
    Index best = 0;
    v.cwiseAbs().maxCoeff(&best);
    return best;
}

struct ClusterChains {
    cplx center;
    std::vector<std::vector<ComplexVector>> chains; // chains[a][i], head first
};

/// Chains for the raw Schur eigenvalues listed in `members` (positions on the diagonal of `schur.T`).
inline ClusterChains chains_for_members(const SchurForm& schur, const std::vector<Index>& members,
                                        double scale, double rank_tol) {
    SchurForm s = schur;
    reorder_leading(s, members);
    const auto m = static_cast<Index>(members.size());
    cplx center = 0.0;
    for (Index j = 0; j < m; ++j) center += s.T(j, j);
    center /= static_cast<double>(m);

    const ComplexMatrix t11 = s.T.topLeftCorner(m, m);
    const ComplexMatrix n11 = t11 - center * ComplexMatrix::Identity(m, m);
    const Staircase st = kernel_staircase(n11, scale, rank_tol);
    const std::vector<LocalChain> local = select_chains(n11, st);

    ClusterChains out{center, {}};
    const ComplexMatrix q1 = s.Q.leftCols(m);
    for (const auto& lc : local) {
        std::vector<ComplexVector> chain(lc.length);
        ComplexVector v = lc.top;
        for (std::size_t i = lc.length; i >= 1; --i) {
            chain[i - 1] = q1 * v;
            v = n11 * v;
        }
        const ComplexVector& head = chain.front();
        const cplx pivot = head(gauge_pivot(head));
        const cplx factor = std::conj(pivot) / (std::abs(pivot) * head.norm());
        for (auto& x : chain) x *= factor;
        out.chains.push_back(std::move(chain));
    }
    std::stable_sort(out.chains.begin(), out.chains.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return largest_pivot(a.front()) < largest_pivot(b.front());
    });
    return out;
}

/// A group of raw eigenvalues is a consistent single cluster when the
/// restricted (T11 − cI) has a valid staircase reaching the group size.
inline bool coalesces(const SchurForm& schur, const std::vector<Index>& members, double scale,
                      double rank_tol) {
    SchurForm s = schur;
    reorder_leading(s, members);
    const auto m = static_cast<Index>(members.size());
    cplx center = 0.0;
    for (Index j = 0; j < m; ++j) center += s.T(j, j);
    center /= static_cast<double>(m);
    const ComplexMatrix n11 = s.T.topLeftCorner(m, m) - center * ComplexMatrix::Identity(m, m);
    try {
        kernel_staircase(n11, scale, rank_tol);
        return true;
    } catch (const StaircaseError&) {
        return false;
    }
}

/// Merge tolerance clusters that are fragments of one defective eigenvalue.
/// Candidates come from a single-linkage dendrogram over cluster distances up
/// to `radius`; a node is accepted whole when it passes `coalesces`, otherwise
/// its children are examined.
inline std::vector<std::vector<Index>> coalesce_clusters(const SchurForm& schur,
                                                         const std::vector<cplx>& raw,
                                                         const SpectralTable& skeleton,
                                                         double radius, double scale,
                                                         double rank_tol) {
    const std::size_t k = skeleton.clusters.size();
    struct Node {
        std::vector<Index> members;
        int left = -1, right = -1;
    };
    std::vector<Node> nodes;
    for (const auto& c : skeleton.clusters) nodes.push_back({c.members, -1, -1});

    struct Edge {
        double dist;
        std::size_t a, b;
    };
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            double best = std::numeric_limits<double>::infinity();
            for (Index i : skeleton.clusters[a].members)
                for (Index j : skeleton.clusters[b].members)
                    best = std::min(best, std::abs(raw[static_cast<std::size_t>(i)] -
                                                   raw[static_cast<std::size_t>(j)]));
            if (best <= radius) edges.push_back({best, a, b});
        }
    }
    std::stable_sort(edges.begin(), edges.end(),
                     [](const Edge& x, const Edge& y) { return x.dist < y.dist; });

    std::vector<std::size_t> owner(k);
    std::iota(owner.begin(), owner.end(), std::size_t{0});
    std::vector<std::size_t> root_of(k); // cluster -> current dendrogram node
    std::iota(root_of.begin(), root_of.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (owner[i] != i) i = owner[i] = owner[owner[i]];
        return i;
    };
    for (const auto& e : edges) {
        const std::size_t ra = find(e.a), rb = find(e.b);
        if (ra == rb) continue;
        Node merged;
        merged.members = nodes[root_of[ra]].members;
        const auto& other = nodes[root_of[rb]].members;
        merged.members.insert(merged.members.end(), other.begin(), other.end());
        merged.left = static_cast<int>(root_of[ra]);
        merged.right = static_cast<int>(root_of[rb]);
        nodes.push_back(std::move(merged));
        const std::size_t lo = std::min(ra, rb), hi = std::max(ra, rb);
        owner[hi] = lo;
        root_of[lo] = nodes.size() - 1;
    }

    std::vector<std::vector<Index>> groups;
    std::vector<std::size_t> stack;
    for (std::size_t c = 0; c < k; ++c)
        if (find(c) == c) stack.push_back(root_of[c]);
    std::reverse(stack.begin(), stack.end());
    while (!stack.empty()) {
        const std::size_t id = stack.back();
        stack.pop_back();
        const Node& node = nodes[id];
        if (node.left < 0 || coalesces(schur, node.members, scale, rank_tol)) {
            groups.push_back(node.members);
        } else {
            stack.push_back(static_cast<std::size_t>(node.right));
            stack.push_back(static_cast<std::size_t>(node.left));
        }
    }
    return groups;
}

/// Canonical cluster order: Re ascending; runs of real parts equal within
/// `tol` are ordered by Im ascending.
inline std::vector<std::size_t> canonical_order(const std::vector<cplx>& centers, double tol) {
    std::vector<std::size_t> idx(centers.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return centers[a].real() < centers[b].real(); });
    std::size_t start = 0;
    while (start < idx.size()) {
        std::size_t end = start + 1;
        while (end < idx.size() && centers[idx[end]].real() - centers[idx[end - 1]].real() <= tol) ++end;
        std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(start),
                         idx.begin() + static_cast<std::ptrdiff_t>(end),
                         [&](std::size_t a, std::size_t b) { return centers[a].imag() < centers[b].imag(); });
        start = end;
    }
    return idx;
}

} // namespace detail

/// Generalized eigenvectors of H for the eigenvalue cluster around `center`.
/// Raw eigenvalues within `coalesce_radius * ‖H‖` of `center` form the cluster;
/// `tol` is the staircase rank threshold relative to ‖H‖^l.
/// Each returned chain lists v_1 (eigenvector) first; (H − E) v_i = v_{i-1}.
inline std::vector<std::vector<ComplexVector>> jordan_chains(const ComplexMatrix& h, cplx center,
                                                             double tol = 1e-9,
                                                             double coalesce_radius = 1e-3) {
    require_square(h, "jordan_chains");
    const double s = scale_of(h);
    const SchurForm schur = complex_schur(h);
    std::vector<Index> members;
    for (Index j = 0; j < h.rows(); ++j) {
        if (std::abs(schur.T(j, j) - center) <= coalesce_radius * s) members.push_back(j);
    }
    if (members.empty()) {
        std::ostringstream os;
        os << "jordan_chains: " << center << " is not an eigenvalue within tolerance";
        throw InvalidArgument(os.str());
    }
    return detail::chains_for_members(schur, members, s, tol).chains;
}

/// Block-diagonalize H into its canonical Jordan basis.
///
/// Throws StaircaseError when a cluster's kernel dimensions are not a valid
/// Jordan staircase at the given tolerances, and IllConditionedError when
/// cond(A) exceeds `max_condition`.
inline BlockDiagonalization block_diagonalize(const ComplexMatrix& h, const BlockDiagOptions& opt = {}) {
    require_square(h, "block_diagonalize");
    require_finite(h, "block_diagonalize");
    const Index n = h.rows();
    const double s = scale_of(h);
    const SchurForm schur = complex_schur(h);

    std::vector<cplx> raw(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) raw[static_cast<std::size_t>(j)] = schur.T(j, j);
    const SpectralTable skeleton = cluster_eigenvalues(raw, opt.cluster_tol * s);
    const auto groups = detail::coalesce_clusters(schur, raw, skeleton,
                                                  std::max(opt.coalesce_radius, opt.cluster_tol) * s, s,
                                                  opt.rank_tol);

    std::vector<detail::ClusterChains> found;
    std::vector<std::vector<Index>> found_members;
    for (const auto& g : groups) {
        found.push_back(detail::chains_for_members(schur, g, s, opt.rank_tol));
        found_members.push_back(g);
    }
    std::vector<cplx> centers;
    for (const auto& f : found) centers.push_back(f.center);
    const auto order = detail::canonical_order(centers, opt.cluster_tol * s);

    BlockDiagonalization bd;
    bd.A = ComplexMatrix::Zero(n, n);
    bd.H0 = ComplexMatrix::Zero(n, n);
    bd.table.cluster_tol = opt.cluster_tol * s;
    bd.table.collapsed_warning = skeleton.collapsed_warning;
    Index col = 0;
    for (std::size_t ci = 0; ci < order.size(); ++ci) {
        const auto& f = found[order[ci]];
        EigenCluster cluster;
        cluster.center = f.center;
        cluster.members = found_members[order[ci]];
        std::sort(cluster.members.begin(), cluster.members.end());
        cluster.geometric = f.chains.size();
        for (std::size_t a = 0; a < f.chains.size(); ++a) {
            const auto& chain = f.chains[a];
            cluster.p_list.push_back(chain.size());
            for (std::size_t i = 0; i < chain.size(); ++i) {
                bd.A.col(col) = chain[i];
                bd.H0(col, col) = f.center;
                if (i > 0) bd.H0(col - 1, col) = 1.0;
                bd.label_order.push_back({ci, a, i});
                ++col;
            }
        }
        cluster.algebraic = std::accumulate(cluster.p_list.begin(), cluster.p_list.end(), std::size_t{0});
        bd.table.clusters.push_back(std::move(cluster));
    }

    bd.condition = condition_number(bd.A);
    if (!(bd.condition <= opt.max_condition)) {
        std::ostringstream os;
        os << "block_diagonalize: Jordan basis condition number " << bd.condition << " exceeds "
           << opt.max_condition;
        throw IllConditionedError(os.str(), bd.condition);
    }
    const ComplexMatrix a_inv = inverse(bd.A);
    bd.reconstruction_residual = norm(h - bd.A * bd.H0 * a_inv) / s;
    return bd;
}

/// Columns |φ_{n,a,i}⟩ = A^{-1†} |ε_{n,a,i}⟩ of the biorthonormal complement.
inline ComplexMatrix biorthonormal_complement(const BlockDiagonalization& bd) {
    return inverse(bd.A).adjoint();
}

/// Column position of label (n, a, i) in the canonical basis.
inline Index slot_of(const SpectralTable& table, std::size_t cluster, std::size_t chain, std::size_t index) {
    Index pos = 0;
    for (std::size_t c = 0; c < cluster; ++c) pos += static_cast<Index>(table.clusters[c].algebraic);
    const auto& p = table.clusters[cluster].p_list;
    for (std::size_t a = 0; a < chain; ++a) pos += static_cast<Index>(p[a]);
    return pos + static_cast<Index>(index);
}

/// Labels in canonical order, derived from the table alone.
inline std::vector<JordanLabel> canonical_labels(const SpectralTable& table) {
    std::vector<JordanLabel> out;
    for (std::size_t c = 0; c < table.clusters.size(); ++c)
        for (std::size_t a = 0; a < table.clusters[c].p_list.size(); ++a)
            for (std::size_t i = 0; i < table.clusters[c].p_list[a]; ++i) out.push_back({c, a, i});
    return out;
}

/// Multiply every vector of chain `a` by a unit phase so that its head has a
/// real positive overlap with `reference_heads[a]` (one entry per chain in
/// canonical order; empty vectors leave a chain untouched). H0 is unchanged.
inline void align_chain_phases(BlockDiagonalization& bd, const std::vector<ComplexVector>& reference_heads) {
    std::size_t chain_id = 0;
    Index col = 0;
    for (const auto& cluster : bd.table.clusters) {
        for (std::size_t p : cluster.p_list) {
            if (chain_id < reference_heads.size() && reference_heads[chain_id].size() > 0) {
                const cplx overlap = bd.A.col(col).dot(reference_heads[chain_id]);
                if (std::abs(overlap) > 0.0) {
                    const cplx phase = overlap / std::abs(overlap);
                    bd.A.middleCols(col, static_cast<Index>(p)) *= phase;
                }
            }
            col += static_cast<Index>(p);
            ++chain_id;
        }
    }
}

} // namespace pseudospec
