#pragma once

#include "cycver/linalg.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace cycver {

// ---------------------------------------------------------------------------
// Weighted graphs and clique complexes
// ---------------------------------------------------------------------------

struct WeightedGraph {
    int vertices = 0;
    std::vector<Rat> weights;               ///< positive, one per vertex
    std::set<std::pair<int, int>> edges;    ///< u < v, no self-loops

    static WeightedGraph unweighted(int n) {
        WeightedGraph g;
        g.vertices = n;
        g.weights.assign(n, Rat(1));
        return g;
    }

    void add_edge(int u, int v) {
        if (u == v) throw std::invalid_argument("WeightedGraph: self-loop");
        if (u < 0 || v < 0 || u >= vertices || v >= vertices)
            throw std::invalid_argument("WeightedGraph: vertex out of range");
        edges.insert({std::min(u, v), std::max(u, v)});
    }

    bool adjacent(int u, int v) const {
        return edges.count({std::min(u, v), std::max(u, v)}) > 0;
    }

    void validate() const {
        if (static_cast<int>(weights.size()) != vertices)
            throw std::invalid_argument("WeightedGraph: weight count mismatch");
        for (const auto& w : weights)
            if (w <= 0) throw std::invalid_argument("WeightedGraph: weights must be positive");
    }
};

/// Simplices per dimension in canonical (ascending) vertex order, with
/// multiplicative vertex weights.
struct CliqueComplex {
    int vertices = 0;
    std::vector<Rat> weights;
    std::vector<std::vector<std::vector<int>>> levels;  ///< levels[k] = k-simplices

    int max_dim() const { return static_cast<int>(levels.size()) - 1; }
    int count(int k) const {
        return (k < 0 || k > max_dim()) ? 0 : static_cast<int>(levels[k].size());
    }

    Rat simplex_weight(const std::vector<int>& s) const {
        Rat w(1);
        for (int v : s) w *= weights[v];
        return w;
    }
};

/// All cliques of G up to max_dim+1 vertices, by ordered extension of sorted
/// partial cliques (deterministic).
inline CliqueComplex clique_complex(const WeightedGraph& g, int max_dim) {
    g.validate();
    if (max_dim < 0) throw std::invalid_argument("clique_complex: max_dim >= 0 required");
    CliqueComplex k;
    k.vertices = g.vertices;
    k.weights = g.weights;
    k.levels.resize(max_dim + 1);
    for (int v = 0; v < g.vertices; ++v) k.levels[0].push_back({v});
    for (int dim = 1; dim <= max_dim; ++dim) {
        for (const auto& s : k.levels[dim - 1]) {
            for (int v = s.back() + 1; v < g.vertices; ++v) {
                bool ok = true;
                for (int u : s)
                    if (!g.adjacent(u, v)) { ok = false; break; }
                if (!ok) continue;
                std::vector<int> t = s;
                t.push_back(v);
                k.levels[dim].push_back(std::move(t));
            }
        }
    }
    return k;
}

// ---------------------------------------------------------------------------
// Boundary maps in the orthonormal basis |sigma'> = |sigma>/w(sigma)
// ---------------------------------------------------------------------------

struct BoundaryMaps {
    /// d[k]: matrix of the coboundary C^k -> C^{k+1}; missing when a side is
    /// empty.  In the orthonormal basis, d^k|s'> = sum_{v in up(s)} w(v)
    /// |([v]+s)'> with the sign of moving v into canonical position, and the
    /// boundary is the transpose.
    std::vector<std::optional<CycMatrix>> d;
    std::optional<CycMatrix> d_empty;  ///< augmentation d^{-1}: |{}> -> sum_v w(v)|v'>
};

inline BoundaryMaps boundary_maps(const CliqueComplex& kx, bool with_empty = false) {
    const FieldSpec q(1);
    BoundaryMaps bm;
    int levels = static_cast<int>(kx.levels.size());
    bm.d.resize(std::max(0, levels - 1));
    std::vector<std::map<std::vector<int>, int>> index(levels);
    for (int k = 0; k < levels; ++k)
        for (size_t i = 0; i < kx.levels[k].size(); ++i) index[k][kx.levels[k][i]] = static_cast<int>(i);
    for (int k = 0; k + 1 < levels; ++k) {
        if (kx.count(k) == 0 || kx.count(k + 1) == 0) continue;
        CycMatrix m(q, kx.count(k + 1), kx.count(k));
        for (int col = 0; col < kx.count(k); ++col) {
            const auto& s = kx.levels[k][col];
            for (int v = 0; v < kx.vertices; ++v) {
                if (std::binary_search(s.begin(), s.end(), v)) continue;
                std::vector<int> t = s;
                t.insert(std::lower_bound(t.begin(), t.end(), v), v);
                auto it = index[k + 1].find(t);
                if (it == index[k + 1].end()) continue;
                int pos = static_cast<int>(std::lower_bound(s.begin(), s.end(), v) - s.begin());
                Rat val = kx.weights[v];
                if (pos % 2) val = -val;
                m.at(it->second, col) = CycNum::from_rational(q, val);
            }
        }
        bm.d[k] = std::move(m);
    }
    if (with_empty && kx.count(0) > 0) {
        CycMatrix m(q, kx.count(0), 1);
        for (int v = 0; v < kx.count(0); ++v)
            m.at(v, 0) = CycNum::from_rational(q, kx.weights[kx.levels[0][v][0]]);
        bm.d_empty = std::move(m);
    }
    return bm;
}

/// Combinatorial Laplacian Delta^k = d^{k-1} (d^{k-1})^T + (d^k)^T d^k in the
/// orthonormal basis; exact rational.
inline CycMatrix laplacian(const CliqueComplex& kx, int k, bool with_empty = false) {
    if (kx.count(k) == 0) throw std::invalid_argument("laplacian: no simplices in dimension k");
    const FieldSpec q(1);
    BoundaryMaps bm = boundary_maps(kx, with_empty);
    CycMatrix acc(q, kx.count(k), kx.count(k));
    if (k >= 1 && k - 1 < static_cast<int>(bm.d.size()) && bm.d[k - 1]) {
        const CycMatrix& d = *bm.d[k - 1];
        acc = acc + d * d.transpose();
    }
    if (k == 0 && with_empty && bm.d_empty) {
        const CycMatrix& d = *bm.d_empty;
        acc = acc + d * d.transpose();
    }
    if (k < static_cast<int>(bm.d.size()) && bm.d[k]) {
        const CycMatrix& d = *bm.d[k];
        acc = acc + d.transpose() * d;
    }
    return acc;
}

/// Entrywise closed form of the Laplacian (similar/dissimilar common lower
/// simplex, upper adjacency); used as the independent cross-check.  At k = 0
/// the form matches the augmented complex (the common lower simplex of two
/// vertices is the empty simplex), so compare against laplacian(kx, 0, true).
inline CycMatrix laplacian_closed_form(const CliqueComplex& kx, int k) {
    if (kx.count(k) == 0) throw std::invalid_argument("laplacian_closed_form: empty dimension");
    const FieldSpec q(1);
    const auto& simps = kx.levels[k];
    const int m = static_cast<int>(simps.size());
    std::set<std::vector<int>> upper;
    if (k + 1 <= kx.max_dim())
        for (const auto& t : kx.levels[k + 1]) upper.insert(t);
    auto is_simplex_up = [&](const std::vector<int>& s, int v) {
        std::vector<int> t = s;
        t.insert(std::lower_bound(t.begin(), t.end(), v), v);
        return upper.count(t) > 0;
    };
    CycMatrix out(q, m, m);
    for (int i = 0; i < m; ++i) {
        const auto& s = simps[i];
        Rat diag(0);
        for (int v = 0; v < kx.vertices; ++v) {
            if (std::binary_search(s.begin(), s.end(), v)) continue;
            if (is_simplex_up(s, v)) diag += kx.weights[v] * kx.weights[v];
        }
        for (int v : s) diag += kx.weights[v] * kx.weights[v];
        out.at(i, i) = CycNum::from_rational(q, diag);
        for (int j = i + 1; j < m; ++j) {
            const auto& t = simps[j];
            // common lower simplex: |s ∩ t| = k, i.e. s, t differ in one vertex
            std::vector<int> inter;
            std::set_intersection(s.begin(), s.end(), t.begin(), t.end(), std::back_inserter(inter));
            if (static_cast<int>(inter.size()) != k) continue;
            int vs = 0, vt = 0;
            for (int v : s)
                if (!std::binary_search(inter.begin(), inter.end(), v)) vs = v;
            for (int v : t)
                if (!std::binary_search(inter.begin(), inter.end(), v)) vt = v;
            // upper adjacent iff s ∪ t is a simplex
            bool upper_adj = is_simplex_up(s, vt);
            if (upper_adj) continue;
            // similar iff the common face has the same sign in both boundaries
            int ps = static_cast<int>(std::lower_bound(s.begin(), s.end(), vs) - s.begin());
            int pt = static_cast<int>(std::lower_bound(t.begin(), t.end(), vt) - t.begin());
            bool similar = (ps % 2) == (pt % 2);
            Rat val = kx.weights[vs] * kx.weights[vt];
            if (!similar) val = -val;
            out.at(i, j) = CycNum::from_rational(q, val);
            out.at(j, i) = CycNum::from_rational(q, val);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Betti numbers, Euler characteristic, join
// ---------------------------------------------------------------------------

/// beta_k = dim C^k - rank d^k - rank d^{k-1}, exact ranks.  The unreduced
/// convention (no augmentation) unless with_empty.
inline int betti(const CliqueComplex& kx, int k, bool with_empty = false) {
    if (kx.count(k) == 0) return 0;
    BoundaryMaps bm = boundary_maps(kx, with_empty);
    int rank_up = 0, rank_down = 0;
    if (k < static_cast<int>(bm.d.size()) && bm.d[k]) rank_up = rank(*bm.d[k]);
    if (k >= 1 && k - 1 < static_cast<int>(bm.d.size()) && bm.d[k - 1]) rank_down = rank(*bm.d[k - 1]);
    if (k == 0 && with_empty && bm.d_empty) rank_down = rank(*bm.d_empty);
    return kx.count(k) - rank_up - rank_down;
}

/// chi = sum_k (-1)^k |K^k|.
inline long euler_characteristic(const CliqueComplex& kx) {
    long chi = 0;
    for (int k = 0; k <= kx.max_dim(); ++k) chi += (k % 2 == 0) ? kx.count(k) : -kx.count(k);
    return chi;
}

/// Join K1 * K2: all unions s1 ∪ s2 (either side may be empty, not both);
/// K2's vertices are relabeled after K1's; weights multiply.
inline CliqueComplex join(const CliqueComplex& k1, const CliqueComplex& k2) {
    CliqueComplex out;
    out.vertices = k1.vertices + k2.vertices;
    out.weights = k1.weights;
    out.weights.insert(out.weights.end(), k2.weights.begin(), k2.weights.end());
    out.levels.resize(k1.max_dim() + k2.max_dim() + 2);
    auto put = [&out](std::vector<int> s) {
        int k = static_cast<int>(s.size()) - 1;
        out.levels[k].push_back(std::move(s));
    };
    for (int a = 0; a <= k1.max_dim(); ++a)
        for (const auto& s1 : k1.levels[a]) put(s1);
    for (int b = 0; b <= k2.max_dim(); ++b)
        for (const auto& s2 : k2.levels[b]) {
            std::vector<int> shifted;
            for (int v : s2) shifted.push_back(v + k1.vertices);
            put(shifted);
            for (int a = 0; a <= k1.max_dim(); ++a)
                for (const auto& s1 : k1.levels[a]) {
                    std::vector<int> u = s1;
                    u.insert(u.end(), shifted.begin(), shifted.end());
                    put(u);
                }
        }
    for (auto& lvl : out.levels) std::sort(lvl.begin(), lvl.end());
    return out;
}

/// Join of two graphs: disjoint union plus all cross edges.  The clique
/// complex of the join graph is the join of the clique complexes.
inline WeightedGraph graph_join(const WeightedGraph& g1, const WeightedGraph& g2) {
    WeightedGraph g;
    g.vertices = g1.vertices + g2.vertices;
    g.weights = g1.weights;
    g.weights.insert(g.weights.end(), g2.weights.begin(), g2.weights.end());
    for (auto [u, v] : g1.edges) g.edges.insert({u, v});
    for (auto [u, v] : g2.edges) g.edges.insert({u + g1.vertices, v + g1.vertices});
    for (int u = 0; u < g1.vertices; ++u)
        for (int v = 0; v < g2.vertices; ++v) g.add_edge(u, g1.vertices + v);
    return g;
}

// ---------------------------------------------------------------------------
// Gapped clique homology report
// ---------------------------------------------------------------------------

struct GchReport {
    int betti_k = 0;
    double lambda_min = 0.0;
    bool yes = false;  ///< nontrivial homology: beta_k != 0
};

/// Exact Betti number plus floating spectral gap of Delta^k.  YES iff the
/// k-th homology group is nontrivial; the gap is reported, not certified.
inline GchReport gch_report(const WeightedGraph& g, int k, int max_dim = 8, double tol = 1e-9) {
    CliqueComplex kx = clique_complex(g, std::max(k + 1, std::min(max_dim, g.vertices - 1)));
    GchReport rep;
    rep.betti_k = betti(kx, k);
    if (kx.count(k) > 0) {
        CycMatrix lap = laplacian(kx, k);
        rep.lambda_min = spectral_report(lap, tol).lambda_min;
    }
    rep.yes = rep.betti_k != 0;
    return rep;
}

}  // namespace cycver
