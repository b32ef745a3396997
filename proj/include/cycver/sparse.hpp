#pragma once

#include "cycver/linalg.hpp"

#include <map>
#include <set>

namespace cycver {

// ---------------------------------------------------------------------------
// Sparse Hamiltonians as explicit triplets
// ---------------------------------------------------------------------------

/// Explicit d-sparse Hamiltonian H = H'/h with H' over Z[zeta_{2^k}] and a
/// declared common denominator h.  Entries are the entries of H itself.
struct SparseHam {
    FieldSpec spec{1};
    int qubits = 0;
    int degree = 1;  ///< declared sparsity d
    Int denom = 1;   ///< shared denominator h
    std::map<std::pair<unsigned long, unsigned long>, CycNum> entries;

    unsigned long dim() const { return 1UL << qubits; }

    void set(unsigned long r, unsigned long c, const CycNum& v) {
        if (v.is_zero())
            entries.erase({r, c});
        else
            entries[{r, c}] = v;
    }

    CycNum get(unsigned long r, unsigned long c) const {
        auto it = entries.find({r, c});
        return it == entries.end() ? CycNum(spec) : it->second;
    }

    CycVector apply(const CycVector& psi) const {
        CycVector out(spec, static_cast<int>(dim()));
        for (const auto& [rc, v] : entries) {
            const auto& [r, c] = rc;
            if (!psi[static_cast<int>(c)].is_zero())
                out[static_cast<int>(r)] += v * psi[static_cast<int>(c)];
        }
        return out;
    }
};

/// Structural checks: hermiticity, declared degree, h-integrality.
inline void validate_sparse(const SparseHam& h) {
    std::map<unsigned long, int> row_deg, col_deg;
    for (const auto& [rc, v] : h.entries) {
        const auto& [r, c] = rc;
        if (r >= h.dim() || c >= h.dim()) throw std::invalid_argument("SparseHam: index out of range");
        CycNum mirror = h.get(c, r);
        if (mirror != v.conj()) throw std::invalid_argument("SparseHam: not Hermitian");
        ++row_deg[r];
        ++col_deg[c];
        CycNum scaled = CycNum::from_rational(h.spec, Rat(h.denom)) * v;
        for (int i = 0; i < scaled.degree(); ++i)
            if (scaled.coeff(i).get_den() != 1)
                throw std::invalid_argument("SparseHam: h * entry must be a cyclotomic integer");
    }
    for (const auto& [r, d] : row_deg)
        if (d > h.degree) throw std::invalid_argument("SparseHam: row degree exceeds declared d");
    for (const auto& [c, d] : col_deg)
        if (d > h.degree) throw std::invalid_argument("SparseHam: column degree exceeds declared d");
}

// ---------------------------------------------------------------------------
// 1-sparse pieces via greedy edge coloring of the bipartite lift
// ---------------------------------------------------------------------------

/// A 1-sparse Hermitian piece of the bipartite lift X (x) H: at most one
/// nonzero per row and column, entry(i) = (j, v) implies entry(j) = (i, conj v).
struct OneSparsePiece {
    FieldSpec spec{1};
    int qubits = 0;  ///< lift register size (n + 1)
    std::map<unsigned long, std::pair<unsigned long, CycNum>> entries;  ///< row -> (col, value)

    unsigned long dim() const { return 1UL << qubits; }

    CycVector apply(const CycVector& psi) const {
        CycVector out(spec, static_cast<int>(dim()));
        for (const auto& [r, cv] : entries)
            if (!psi[static_cast<int>(cv.first)].is_zero())
                out[static_cast<int>(r)] += cv.second * psi[static_cast<int>(cv.first)];
        return out;
    }
};

/// Split the bipartite lift of a d-sparse Hamiltonian into 1-sparse Hermitian
/// pieces by greedy coloring of the lexicographically sorted edge list.  At
/// most 2d-1 <= d^2 colors are used; the pieces sum to X (x) H exactly.
inline std::vector<OneSparsePiece> split_d_sparse(const SparseHam& h) {
    validate_sparse(h);
    const unsigned long n = h.dim();
    std::map<unsigned long, std::set<int>> used_top, used_bot;
    std::map<int, OneSparsePiece> pieces;
    for (const auto& [rc, v] : h.entries) {
        const auto& [i, j] = rc;  // lift edge {top i, bottom j}
        int color = 0;
        while (used_top[i].count(color) || used_bot[j].count(color)) ++color;
        used_top[i].insert(color);
        used_bot[j].insert(color);
        auto& p = pieces[color];
        if (p.entries.empty()) {
            p.spec = h.spec;
            p.qubits = h.qubits + 1;
        }
        p.entries[i] = {n + j, v};
        p.entries[n + j] = {i, v.conj()};
    }
    std::vector<OneSparsePiece> out;
    for (auto& [c, p] : pieces) out.push_back(std::move(p));
    return out;
}

// ---------------------------------------------------------------------------
// 1-sparse integer pieces as signed zeta-power unitaries
// ---------------------------------------------------------------------------

/// Intermediate C^{m,l} / D^{m,l} part: 1-sparse, entries +-zeta^m above the
/// diagonal and +-zeta^{-m} below (C), or diagonal +-zeta^m (D).
struct CDPart {
    bool is_c = true;
    int m = 0;
    int l = 0;
    std::map<unsigned long, std::pair<unsigned long, CycNum>> entries;
};

/// A 1-sparse unitary piece with weight 2^{l-1}: the +-1-completed version of
/// a C or D part.
struct UnitaryPiece {
    bool is_c = true;
    int m = 0;
    int l = 0;
    int sign = +1;
    Rat weight;  ///< 2^{l-1}
    std::vector<std::pair<unsigned long, CycNum>> perm;  ///< row -> (col, phase)

    CycMatrix matrix(const FieldSpec& spec) const {
        const int dim = static_cast<int>(perm.size());
        CycMatrix u(spec, dim, dim);
        for (int r = 0; r < dim; ++r) u.at(r, static_cast<int>(perm[r].first)) = perm[r].second;
        return u;
    }

    CycVector apply(const FieldSpec& spec, const CycVector& psi) const {
        CycVector out(spec, static_cast<int>(perm.size()));
        for (size_t r = 0; r < perm.size(); ++r)
            if (!psi[static_cast<int>(perm[r].first)].is_zero())
                out[static_cast<int>(r)] = perm[r].second * psi[static_cast<int>(perm[r].first)];
        return out;
    }
};

/// Bit length of the largest integer basis coefficient of the piece.
inline int coefficient_bits(const OneSparsePiece& p) {
    Int mx = 0;
    for (const auto& [r, cv] : p.entries)
        for (int i = 0; i < cv.second.degree(); ++i) {
            if (cv.second.coeff(i).get_den() != 1)
                throw std::invalid_argument("coefficient_bits: entries must be cyclotomic integers");
            Int a = abs(cv.second.coeff(i).get_num());
            if (a > mx) mx = a;
        }
    int bits = 0;
    while (mx > 0) { mx >>= 1; ++bits; }
    return std::max(bits, 1);
}

/// Decompose an integer 1-sparse Hermitian piece as
/// P = sum_l 2^l sum_m (C^{m,l} + D^{m,l}).
inline std::vector<CDPart> cd_parts(const OneSparsePiece& p, const FieldSpec& spec, int bits) {
    const int df = spec.degree();
    std::map<std::tuple<bool, int, int>, CDPart> parts;
    auto part = [&](bool is_c, int m, int l) -> CDPart& {
        auto& cp = parts[{is_c, m, l}];
        cp.is_c = is_c;
        cp.m = m;
        cp.l = l;
        return cp;
    };
    for (const auto& [r, cv] : p.entries) {
        const auto& [c, v] = cv;
        if (r > c) continue;  // handle each pair once from the upper triangle
        bool diag = (r == c);
        for (int m = 0; m < df; ++m) {
            Int coef = v.coeff(m).get_num();
            if (v.coeff(m).get_den() != 1)
                throw std::invalid_argument("cd_parts: entries must be cyclotomic integers");
            if (coef == 0) continue;
            int sign = coef > 0 ? 1 : -1;
            Int mag = abs(coef);
            for (int l = 0; l < bits; ++l) {
                if (!mpz_tstbit(mag.get_mpz_t(), l)) continue;
                CycNum zp = CycNum::zeta_pow(spec, m);
                CycNum phase = (sign > 0) ? zp : -zp;
                if (diag) {
                    part(false, m, l).entries[r] = {r, phase};
                } else {
                    CycNum zm = CycNum::zeta_pow(spec, -m);
                    CycNum phase_lo = (sign > 0) ? zm : -zm;
                    auto& cp = part(true, m, l);
                    cp.entries[r] = {c, phase};
                    cp.entries[c] = {r, phase_lo};
                }
            }
        }
    }
    std::vector<CDPart> out;
    for (auto& [key, cp] : parts) out.push_back(std::move(cp));
    return out;
}

/// Full signed-unitary decomposition P = sum_{l,i} 2^{l-1} U^{l,i} of an
/// integer 1-sparse Hermitian piece.  Zeros are completed with +-1 so each
/// +- pair averages back to the C/D part; every returned piece is exactly
/// unitary.  Emits 2^{k+1} pieces per bit level (index ranges of the lemma).
inline std::vector<UnitaryPiece> one_sparse_to_unitaries(const OneSparsePiece& p,
                                                         const FieldSpec& spec, int bits = 0) {
    if (bits <= 0) bits = coefficient_bits(p);
    const int df = spec.degree();
    const unsigned long dim = p.dim();
    // partner map j_i: rows without entries pair with themselves
    std::vector<unsigned long> partner(dim);
    for (unsigned long i = 0; i < dim; ++i) partner[i] = i;
    for (const auto& [r, cv] : p.entries) partner[r] = cv.first;
    auto parts = cd_parts(p, spec, bits);
    std::map<std::tuple<bool, int, int>, const CDPart*> lookup;
    for (const auto& cp : parts) lookup[{cp.is_c, cp.m, cp.l}] = &cp;
    std::vector<UnitaryPiece> out;
    for (int l = 0; l < bits; ++l)
        for (int m = 0; m < df; ++m)
            for (bool is_c : {true, false})
                for (int sign : {+1, -1}) {
                    UnitaryPiece u;
                    u.is_c = is_c;
                    u.m = m;
                    u.l = l;
                    u.sign = sign;
                    u.weight = Rat(Int(1) << l, 2);
                    u.perm.resize(dim);
                    auto it = lookup.find({is_c, m, l});
                    const CDPart* cp = it == lookup.end() ? nullptr : it->second;
                    CycNum fill = CycNum::from_int(spec, sign);
                    for (unsigned long r = 0; r < dim; ++r) {
                        const std::pair<unsigned long, CycNum>* e = nullptr;
                        if (cp) {
                            auto eit = cp->entries.find(r);
                            if (eit != cp->entries.end()) e = &eit->second;
                        }
                        if (e) {
                            u.perm[r] = {e->first, e->second};
                        } else if (is_c) {
                            // fill at the partner position to stay a permutation
                            u.perm[r] = {partner[r], fill};
                        } else {
                            u.perm[r] = {r, fill};
                        }
                    }
                    out.push_back(std::move(u));
                }
    return out;
}

// ---------------------------------------------------------------------------
// Exact rejection probability of the sparse-Hamiltonian verifier
// ---------------------------------------------------------------------------

struct EshReport {
    CycNum probability;   ///< exact rejection probability
    CycNum weight_sq;     ///< sum of squared LCU weights
    int num_pieces = 0;   ///< 1-sparse colors
    int num_unitaries = 0;
    unsigned long ancilla_dim = 0;
};

/// Rejection probability of the verifier that prepares |H> over the signed
/// zeta-power unitaries of the bipartite lift of h*H, applies them controlled
/// on the ancilla, and rejects on the all-|+> Hadamard outcome:
///
///   p = || lift(h H) |1>|psi> ||^2 / (N * W2 * ||psi||^2)
///     = h^2 ||H psi||^2 / (N * W2 * ||psi||^2),
///
/// computed exactly through the decomposition.  p vanishes iff H psi = 0.
inline EshReport esh_reject_probability(const SparseHam& h, const CycVector& psi) {
    const FieldSpec& spec = h.spec;
    if (psi.size() != static_cast<int>(h.dim()))
        throw std::invalid_argument("esh_reject_probability: dimension mismatch");
    CycNum in_sq = psi.norm_sq();
    if (in_sq.is_zero()) throw std::invalid_argument("esh_reject_probability: zero input state");
    // integer-scaled Hamiltonian h*H, then its 1-sparse colors and unitaries
    SparseHam scaled = h;
    CycNum hval = CycNum::from_rational(spec, Rat(h.denom));
    for (auto& [rc, v] : scaled.entries) v = hval * v;
    auto pieces = split_d_sparse(scaled);
    EshReport rep;
    rep.num_pieces = static_cast<int>(pieces.size());
    // lifted input |1>|psi>
    CycVector lifted(spec, static_cast<int>(2 * h.dim()));
    for (int i = 0; i < psi.size(); ++i) lifted[static_cast<int>(h.dim()) + i] = psi[i];
    CycVector accum(spec, lifted.size());
    CycNum w2(spec);
    int count = 0;
    for (const auto& piece : pieces) {
        auto us = one_sparse_to_unitaries(piece, spec);
        for (const auto& u : us) {
            ++count;
            w2 += CycNum::from_rational(spec, u.weight * u.weight);
            accum = accum + (CycNum::from_rational(spec, u.weight) * u.apply(spec, lifted));
        }
    }
    rep.num_unitaries = count;
    unsigned long nanc = 1;
    while (nanc < static_cast<unsigned long>(count)) nanc <<= 1;
    rep.ancilla_dim = nanc;
    rep.weight_sq = w2;
    CycNum denom = CycNum::from_rational(spec, Rat(Int(nanc))) * w2 * in_sq;
    rep.probability = accum.norm_sq() * denom.inverse();
    return rep;
}

}  // namespace cycver
