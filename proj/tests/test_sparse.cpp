#include "doctest.h"

#include "cycver/sparse.hpp"
#include "test_util.hpp"

using namespace cycver;

namespace {

CycMatrix lift_dense(const SparseHam& h) {
    const int n = static_cast<int>(h.dim());
    CycMatrix m(h.spec, 2 * n, 2 * n);
    for (const auto& [rc, v] : h.entries) {
        m.at(static_cast<int>(rc.first), n + static_cast<int>(rc.second)) = v;
        m.at(n + static_cast<int>(rc.second), static_cast<int>(rc.first)) = v.conj();
    }
    return m;
}

CycMatrix piece_dense(const OneSparsePiece& p) {
    CycMatrix m(p.spec, static_cast<int>(p.dim()), static_cast<int>(p.dim()));
    for (const auto& [r, cv] : p.entries) m.at(static_cast<int>(r), static_cast<int>(cv.first)) = cv.second;
    return m;
}

/// Random d-sparse Hermitian integer cyclotomic matrix.
SparseHam random_sparse(const FieldSpec& f, int qubits, int d, int bits, std::mt19937& rng) {
    SparseHam h;
    h.spec = f;
    h.qubits = qubits;
    h.degree = d;
    h.denom = 1;
    const unsigned long n = h.dim();
    std::uniform_int_distribution<int> coin(0, 3), val(-(1 << bits) + 1, (1 << bits) - 1);
    std::vector<int> row_deg(n, 0), col_deg(n, 0);
    for (unsigned long i = 0; i < n; ++i)
        for (unsigned long j = i; j < n; ++j) {
            if (coin(rng) != 0) continue;
            int budget_i = (i == j) ? 1 : 1;
            if (row_deg[i] + budget_i > d || col_deg[j] + 1 > d) continue;
            if (i != j && (row_deg[j] + 1 > d || col_deg[i] + 1 > d)) continue;
            std::vector<Rat> c(f.degree());
            bool nz = false;
            for (auto& q : c) { q = Rat(val(rng)); nz = nz || q != 0; }
            CycNum v(f, c);
            if (i == j) {
                // diagonal entries must be real
                v = Rat(1, 2) * (v + v.conj());
                bool intcoef = true;
                for (int t = 0; t < v.degree(); ++t) intcoef = intcoef && v.coeff(t).get_den() == 1;
                if (!intcoef || v.is_zero()) continue;
                h.set(i, j, v);
                row_deg[i]++; col_deg[i]++;
            } else {
                if (!nz) continue;
                h.set(i, j, v);
                h.set(j, i, v.conj());
                row_deg[i]++; col_deg[j]++;
                row_deg[j]++; col_deg[i]++;
            }
        }
    return h;
}

}  // namespace

TEST_CASE("split_d_sparse") {
    FieldSpec f(3);
    SUBCASE("1-sparse input gives a single piece equal to its lift") {
        SparseHam h;
        h.spec = f; h.qubits = 1; h.degree = 1; h.denom = 1;
        h.set(0, 0, CycNum::from_int(f, 2));
        h.set(1, 1, CycNum::sqrt2(f));
        auto pieces = split_d_sparse(h);
        REQUIRE(pieces.size() == 1);
        CHECK(piece_dense(pieces[0]) == lift_dense(h));
    }
    SUBCASE("pieces are 1-sparse Hermitian and sum to the lift") {
        std::mt19937 rng(61);
        for (int it = 0; it < 10; ++it) {
            SparseHam h = random_sparse(f, 2, 2, 3, rng);
            if (h.entries.empty()) continue;
            auto pieces = split_d_sparse(h);
            CHECK(pieces.size() <= 4);  // <= d^2
            CycMatrix sum(f, static_cast<int>(2 * h.dim()), static_cast<int>(2 * h.dim()));
            for (const auto& p : pieces) {
                CycMatrix pm = piece_dense(p);
                CHECK(is_hermitian(pm));
                std::map<unsigned long, int> rd, cd;
                for (const auto& [r, cv] : p.entries) { rd[r]++; cd[cv.first]++; }
                for (auto& [k, v] : rd) CHECK(v == 1);
                for (auto& [k, v] : cd) CHECK(v == 1);
                sum = sum + pm;
            }
            CHECK(sum == lift_dense(h));
        }
    }
    SUBCASE("degree violation is rejected") {
        SparseHam h;
        h.spec = f; h.qubits = 1; h.degree = 1; h.denom = 1;
        h.set(0, 0, CycNum::one(f));
        h.set(0, 1, CycNum::one(f));
        h.set(1, 0, CycNum::one(f));
        CHECK_THROWS_AS(split_d_sparse(h), std::invalid_argument);
    }
}

TEST_CASE("paper's Z[zeta_8] example splits into the displayed five parts") {
    FieldSpec f(3);
    // diag(1, sqrt2) plus the off-diagonal block [[0, 1+i],[1-i, 0]]
    OneSparsePiece p;
    p.spec = f;
    p.qubits = 2;
    auto one = CycNum::one(f);
    p.entries[0] = {0, one};
    p.entries[1] = {1, CycNum::sqrt2(f)};
    CycNum v = one + CycNum::zeta_pow(f, 2);
    p.entries[2] = {3, v};
    p.entries[3] = {2, v.conj()};
    auto parts = cd_parts(p, f, 1);
    REQUIRE(parts.size() == 5);
    // expected: C^{0,0}, C^{2,0}, D^{0,0}, D^{1,0}, D^{3,0}
    int c0 = 0, c2 = 0, d0 = 0, d1 = 0, d3 = 0;
    for (const auto& cp : parts) {
        CHECK(cp.l == 0);
        if (cp.is_c && cp.m == 0) {
            ++c0;
            CHECK(cp.entries.at(2) == std::pair<unsigned long, CycNum>{3, one});
            CHECK(cp.entries.at(3) == std::pair<unsigned long, CycNum>{2, one});
        } else if (cp.is_c && cp.m == 2) {
            ++c2;
            CHECK(cp.entries.at(2).second == CycNum::zeta_pow(f, 2));
            CHECK(cp.entries.at(3).second == CycNum::zeta_pow(f, -2));
        } else if (!cp.is_c && cp.m == 0) {
            ++d0;
            CHECK(cp.entries.at(0).second == one);
        } else if (!cp.is_c && cp.m == 1) {
            ++d1;
            CHECK(cp.entries.at(1).second == CycNum::zeta(f));
        } else if (!cp.is_c && cp.m == 3) {
            ++d3;
            CHECK(cp.entries.at(1).second == -CycNum::zeta_pow(f, 3));
        } else {
            CHECK(false);
        }
    }
    CHECK(c0 * c2 * d0 * d1 * d3 == 1);
    // full unitarization reconstructs the piece, every factor exactly unitary
    auto us = one_sparse_to_unitaries(p, f);
    CHECK(us.size() == 1 * (1 << (3 + 1)));  // L * 2^{k+1}
    CycMatrix sum(f, 4, 4);
    for (const auto& u : us) {
        CycMatrix um = u.matrix(f);
        CHECK(is_unitary(um));
        sum = sum + (CycNum::from_rational(f, u.weight) * um);
    }
    CHECK(sum == piece_dense(p));
}

TEST_CASE("identity piece: D(0,0,+/-) both stay the identity") {
    FieldSpec f(2);
    OneSparsePiece p;
    p.spec = f;
    p.qubits = 1;
    p.entries[0] = {0, CycNum::one(f)};
    p.entries[1] = {1, CycNum::one(f)};
    auto us = one_sparse_to_unitaries(p, f);
    int d_identity = 0;
    for (const auto& u : us) {
        if (!u.is_c && u.m == 0 && u.l == 0) {
            CHECK(u.matrix(f) == CycMatrix::identity(f, 2));
            ++d_identity;
        }
    }
    CHECK(d_identity == 2);  // both signs coincide: nothing to fill
}

TEST_CASE("random 1-sparse Z[i] pieces: exact reconstruction, all unitary") {
    FieldSpec f(2);
    std::mt19937 rng(67);
    std::uniform_int_distribution<int> val(-7, 7);  // L = 3 bits
    for (int it = 0; it < 20; ++it) {
        // random involution on 4 indices with Gaussian-integer values
        OneSparsePiece p;
        p.spec = f;
        p.qubits = 2;
        std::vector<int> idx{0, 1, 2, 3};
        std::shuffle(idx.begin(), idx.end(), rng);
        // pair (idx0, idx1), fix idx2, idx3 free of entries
        CycNum v(f, {Rat(val(rng)), Rat(val(rng))});
        if (v.is_zero()) v = CycNum::one(f);
        p.entries[idx[0]] = {static_cast<unsigned long>(idx[1]), v};
        p.entries[idx[1]] = {static_cast<unsigned long>(idx[0]), v.conj()};
        int dv = val(rng);
        if (dv != 0) p.entries[idx[2]] = {static_cast<unsigned long>(idx[2]), CycNum::from_int(f, dv)};
        auto us = one_sparse_to_unitaries(p, f, 3);
        CHECK(static_cast<int>(us.size()) == 3 * (1 << (2 + 1)));
        CycMatrix sum(f, 4, 4);
        for (const auto& u : us) {
            CHECK(is_unitary(u.matrix(f)));
            sum = sum + (CycNum::from_rational(f, u.weight) * u.matrix(f));
        }
        CHECK(sum == piece_dense(p));
    }
}

TEST_CASE("esh_reject_probability") {
    FieldSpec f(2);
    SUBCASE("kernel state: exactly zero") {
        SparseHam h;
        h.spec = f; h.qubits = 1; h.degree = 2; h.denom = 1;
        h.set(0, 0, CycNum::one(f));
        h.set(0, 1, CycNum::one(f));
        h.set(1, 0, CycNum::one(f));
        h.set(1, 1, CycNum::one(f));
        CycVector psi(f, {CycNum::one(f), -CycNum::one(f)});
        auto rep = esh_reject_probability(h, psi);
        CHECK(rep.probability.is_zero());
    }
    SUBCASE("identity: strictly positive, input-independent") {
        SparseHam h;
        h.spec = f; h.qubits = 1; h.degree = 1; h.denom = 1;
        h.set(0, 0, CycNum::one(f));
        h.set(1, 1, CycNum::one(f));
        CycVector e0(f, {CycNum::one(f), CycNum::zero(f)});
        auto rep = esh_reject_probability(h, e0);
        CHECK(!rep.probability.is_zero());
        CHECK(sign_real(rep.probability) > 0);
        CycVector plus(f, {CycNum::one(f), CycNum::one(f)});
        CHECK(esh_reject_probability(h, plus).probability == rep.probability);
    }
    SUBCASE("projector |1><1|: |+> carries half the |1> probability") {
        SparseHam h;
        h.spec = f; h.qubits = 1; h.degree = 1; h.denom = 1;
        h.set(1, 1, CycNum::one(f));
        CycVector e1(f, {CycNum::zero(f), CycNum::one(f)});
        CycVector plus(f, {CycNum::one(f), CycNum::one(f)});
        CycNum p1 = esh_reject_probability(h, e1).probability;
        CycNum pp = esh_reject_probability(h, plus).probability;
        CHECK(CycNum::from_int(f, 2) * pp == p1);
        // and the kernel state |0> rejects with probability exactly 0
        CycVector e0(f, {CycNum::one(f), CycNum::zero(f)});
        CHECK(esh_reject_probability(h, e0).probability.is_zero());
    }
    SUBCASE("probability matches the direct formula h^2 ||H psi||^2 / (N W2 ||psi||^2)") {
        FieldSpec f3(3);
        std::mt19937 rng(71);
        for (int it = 0; it < 5; ++it) {
            SparseHam h = random_sparse(f3, 2, 3, 2, rng);
            if (h.entries.empty()) continue;
            h.denom = 3;
            // declared denominator: entries are thirds of cyclotomic integers
            for (auto& [rc, v] : h.entries) v = Rat(1, 3) * v;
            CycVector psi = testutil::random_vector(f3, 4, rng);
            if (psi.is_zero()) psi[0] = CycNum::one(f3);
            auto rep = esh_reject_probability(h, psi);
            CycNum hpsi_sq = h.apply(psi).norm_sq();
            CycNum expect = CycNum::from_rational(f3, Rat(h.denom * h.denom, Int(rep.ancilla_dim))) *
                            hpsi_sq * (rep.weight_sq * psi.norm_sq()).inverse();
            CHECK(rep.probability == expect);
        }
    }
}
