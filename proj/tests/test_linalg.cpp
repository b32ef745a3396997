#include "doctest.h"

#include "cycver/linalg.hpp"
#include "cycver/statesim.hpp"
#include "test_util.hpp"

using namespace cycver;

TEST_CASE("rref and rank") {
    FieldSpec q(1);
    SUBCASE("identity and zero") {
        CHECK(rank(CycMatrix::identity(q, 5)) == 5);
        CHECK(rank(CycMatrix::zero(q, 4, 4)) == 0);
    }
    SUBCASE("random rational 6x6 matches the floating SVD rank") {
        std::mt19937 rng(97);
        for (int it = 0; it < 20; ++it) {
            CycMatrix a = testutil::random_matrix(q, 6, 6, rng, 4, 3);
            if (it % 3 == 0) {
                // plant a rank deficiency: last row = sum of the first two
                for (int j = 0; j < 6; ++j) a.at(5, j) = a.at(0, j) + a.at(1, j);
            }
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(embed(a));
            int frank = 0;
            for (int i = 0; i < svd.singularValues().size(); ++i)
                if (svd.singularValues()(i) > 1e-9) ++frank;
            CHECK(rank(a) == frank);
        }
    }
    SUBCASE("rref is idempotent and pivot-deterministic") {
        FieldSpec f(3);
        std::mt19937 rng(101);
        for (int it = 0; it < 10; ++it) {
            CycMatrix a = testutil::random_matrix(f, 5, 7, rng);
            auto [r1, rk1] = rref(a);
            auto [r2, rk2] = rref(r1);
            CHECK(r1 == r2);
            CHECK(rk1 == rk2);
            auto [r3, rk3] = rref(a);
            CHECK(r1 == r3);
        }
    }
}

TEST_CASE("kernel") {
    FieldSpec q(1);
    SUBCASE("identity has trivial kernel") {
        CHECK(kernel(CycMatrix::identity(q, 3)).corank == 0);
    }
    SUBCASE("[[1,1],[1,1]] has kernel spanned by (1,-1)") {
        CycMatrix a = CycMatrix::from_rational(q, 2, 2, {Rat(1), Rat(1), Rat(1), Rat(1)});
        auto kb = kernel(a);
        REQUIRE(kb.corank == 1);
        const CycVector& v = kb.vectors[0];
        CHECK(v[0] == -v[1]);
        CHECK((a * v).is_zero());
    }
    SUBCASE("rank + corank = cols on random matrices") {
        FieldSpec f(2);
        std::mt19937 rng(103);
        for (int it = 0; it < 15; ++it) {
            CycMatrix a = testutil::random_matrix(f, 4, 6, rng, 3, 2);
            auto kb = kernel(a);
            CHECK(rank(a) + kb.corank == 6);
            for (const auto& v : kb.vectors) CHECK((a * v).is_zero());
        }
    }
}

TEST_CASE("hermitian, unitary and PSD checks") {
    FieldSpec f(2);
    SUBCASE("Pauli Y is Hermitian and unitary") {
        CycMatrix y = pauli_1q(f, 2);
        CHECK(is_hermitian(y));
        CHECK(is_unitary(y));
    }
    SUBCASE("[[0,1],[0,0]] is not Hermitian") {
        CycMatrix a(f, 2, 2);
        a.at(0, 1) = CycNum::one(f);
        CHECK_FALSE(is_hermitian(a));
    }
    SUBCASE("PSD on a subspace") {
        // diag(1, -1) restricted to span{e0} is PSD, on the full space not
        CycMatrix a = CycMatrix::from_rational(f, 2, 2, {Rat(1), Rat(0), Rat(0), Rat(-1)});
        std::vector<CycVector> sub{CycVector(f, {CycNum::one(f), CycNum::zero(f)})};
        CHECK(is_psd_on_subspace(a, sub));
        CHECK_FALSE(is_psd(a));
    }
}

TEST_CASE("spectral_report") {
    FieldSpec q(1);
    SUBCASE("identity") {
        SpectralReport rep = spectral_report(CycMatrix::identity(q, 4));
        CHECK(rep.lambda_min == doctest::Approx(1.0));
        CHECK(rep.sigma_1 == doctest::Approx(1.0));
    }
    SUBCASE("diag(0, 5, 7): sigma_1 = 0, gamma = 5") {
        CycMatrix a(q, 3, 3);
        a.at(1, 1) = CycNum::from_int(q, 5);
        a.at(2, 2) = CycNum::from_int(q, 7);
        SpectralReport rep = spectral_report(a);
        CHECK(rep.sigma_1 == doctest::Approx(0.0));
        CHECK(rep.gamma == doctest::Approx(5.0));
        CHECK(rep.lambda_min == doctest::Approx(0.0));
    }
    SUBCASE("non-Hermitian input is rejected") {
        CycMatrix a(q, 2, 2);
        a.at(0, 1) = CycNum::one(q);
        CHECK_THROWS_AS(spectral_report(a), std::invalid_argument);
    }
}

TEST_CASE("pauli decomposition") {
    SUBCASE("X: a_01 = 1") {
        FieldSpec f(2);
        auto a = pauli_decompose(gate_matrix(f, GateKind::X));
        CHECK(a[0b01] == CycNum::one(f));
        CHECK(a[0b00].is_zero());
        CHECK(a[0b10].is_zero());
        CHECK(a[0b11].is_zero());
    }
    SUBCASE("H over k=3: a_01 = a_11 = (zeta - zeta^3)/2") {
        FieldSpec f(3);
        auto a = pauli_decompose(gate_matrix(f, GateKind::H));
        CycNum inv_sqrt2 = Rat(1, 2) * CycNum::sqrt2(f);
        CHECK(a[0b01] == inv_sqrt2);
        CHECK(a[0b11] == inv_sqrt2);
        CHECK(a[0b00].is_zero());
        CHECK(a[0b10].is_zero());
    }
    SUBCASE("T_8: a_00 = (1 + zeta)/2, a_11 = (1 - zeta)/2") {
        FieldSpec f(3);
        auto a = pauli_decompose(gate_matrix(f, GateKind::T));
        CHECK(a[0b00] == Rat(1, 2) * (CycNum::one(f) + CycNum::zeta(f)));
        CHECK(a[0b11] == Rat(1, 2) * (CycNum::one(f) - CycNum::zeta(f)));
    }
    SUBCASE("round-trip on random integer matrices (not only unitaries)") {
        FieldSpec f(2);
        std::mt19937 rng(107);
        for (int it = 0; it < 30; ++it) {
            int n = 1 + it % 3;
            CycMatrix u = testutil::random_integer_matrix(f, 1 << n, rng);
            auto a = pauli_decompose(u);
            CHECK(pauli_reconstruct(f, a, n) == u);
        }
    }
    SUBCASE("Parseval on gateset-generated unitaries") {
        FieldSpec f(3);
        std::mt19937 rng(109);
        std::vector<CycMatrix> pool;
        CycMatrix i2 = CycMatrix::identity(f, 2);
        pool.push_back(kron(gate_matrix(f, GateKind::H), i2));
        pool.push_back(kron(i2, gate_matrix(f, GateKind::H)));
        pool.push_back(kron(gate_matrix(f, GateKind::T), i2));
        pool.push_back(gate_matrix(f, GateKind::CX));
        std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
        for (int it = 0; it < 20; ++it) {
            CycMatrix u = pool[pick(rng)] * pool[pick(rng)] * pool[pick(rng)];
            auto a = pauli_decompose(u);
            CycNum s(f);
            for (const auto& ax : a) s += ax.abs_sq();
            CHECK(s == CycNum::one(f));
        }
    }
    SUBCASE("Y components need k >= 2") {
        FieldSpec f(1);
        CycMatrix m(f, 2, 2);
        m.at(0, 1) = CycNum::one(f);
        m.at(1, 0) = -CycNum::one(f);  // proportional to iY
        CHECK_THROWS_AS(pauli_decompose(m), std::domain_error);
    }
}
