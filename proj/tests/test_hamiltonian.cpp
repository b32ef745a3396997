#include "doctest.h"

#include "cycver/assemble.hpp"
#include "cycver/qsat4.hpp"
#include "test_util.hpp"

using namespace cycver;

TEST_CASE("clock Hamiltonian") {
    FieldSpec f(1);
    SUBCASE("T = 3: corank 4, all-zero diagonal T+1, weight-2 diagonal >= 2T") {
        HamInstance h = build_hclock(f, 3);
        CycMatrix m = dense(h);
        CHECK(is_hermitian(m));
        CHECK(corank(m) == 4);
        CHECK(m.at(0, 0) == CycNum::from_int(f, 4));
        for (unsigned long x = 0; x < 16; ++x) {
            int w = __builtin_popcountl(x);
            if (w == 2)
                CHECK(sign_real(m.at(x, x) - CycNum::from_int(f, 6)) >= 0);
        }
    }
    SUBCASE("kernel is exactly the one-hot span, gamma >= T") {
        for (int T : {2, 3, 5}) {
            HamInstance h = build_hclock(f, T);
            CycMatrix m = dense(h);
            auto kb = kernel(m);
            CHECK(kb.corank == T + 1);
            // every one-hot state is annihilated
            for (int s = 0; s <= T; ++s) {
                CycVector v(f, 1 << (T + 1));
                v[static_cast<int>(one_hot_index(T + 1, s))] = CycNum::one(f);
                CHECK((m * v).is_zero());
            }
            SpectralReport rep = spectral_report(m);
            CHECK(rep.lambda_min == doctest::Approx(0.0).epsilon(1e-9));
            CHECK(rep.gamma >= T - 1e-9);
        }
    }
}

TEST_CASE("split gadget") {
    FieldSpec f(1);
    CycMatrix p0 = basis_projector(f, 2, 0), p1 = basis_projector(f, 2, 1);
    SUBCASE("computational-basis split") {
        GadgetReport rep = verify_split_gadget(p0, p1);
        CHECK(rep.corank == 2);
        CHECK(rep.pass());
        CHECK(rep.delta == Rat(2));
    }
    SUBCASE("claimed null vector |0>(|100> + |010>) annihilated by the full matrix") {
        CycMatrix hs = build_hsplit(p0, p1);
        CHECK(is_hermitian(hs));
        CycVector phi0(f, 16);
        phi0[0b0100] = CycNum::one(f);  // |0>|100>
        phi0[0b0010] = CycNum::one(f);  // |0>|010>
        CHECK((hs * phi0).is_zero());
        CycVector phi1(f, 16);
        phi1[0b1100] = CycNum::one(f);
        phi1[0b1001] = CycNum::one(f);
        CHECK((hs * phi1).is_zero());
    }
    SUBCASE("plus/minus split (rational projectors)") {
        auto x = eigen_data_x(f);
        GadgetReport rep = verify_split_gadget(x.p0, x.p1);
        CHECK(rep.pass());
    }
    SUBCASE("non-orthogonal inputs rejected") {
        CHECK_THROWS_AS(build_hsplit(p0, p0), std::invalid_argument);
    }
}

TEST_CASE("single-qubit gate gadgets") {
    FieldSpec f(3);
    SUBCASE("T gate") {
        GateGadget g = build_gate_gadget(eigen_data_t_gate(f));
        GadgetReport rep = verify_gate_gadget("u-T", g);
        CHECK(rep.corank == 2);
        CHECK(rep.delta == Rat(4));
        CHECK(rep.pass());
        // phi_0 = |0>(t0 + t1 + t3 + t5)
        SparseVec v = g.kernel_vector(basis_vec(f, 2, 0));
        CHECK(v.size() == 4);
        CHECK(v.at(one_hot_index(6, 0) | 0UL) == CycNum::one(f));
    }
    SUBCASE("Hadamard gate over k=3") {
        GateGadget g = build_gate_gadget(eigen_data_hadamard(f));
        GadgetReport rep = verify_gate_gadget("u-H", g);
        CHECK(rep.corank == 2);
        CHECK(rep.pass());
        // endpoint: the t5^ component of L|alpha> is H|alpha>
        CycVector alpha(f, {CycNum::from_int(f, 1), CycNum::from_int(f, 2)});
        SparseVec v = g.kernel_vector(alpha);
        CycVector ha = gate_matrix(f, GateKind::H) * alpha;
        for (int a = 0; a < 2; ++a) {
            unsigned long idx = (static_cast<unsigned long>(a) << 6) | one_hot_index(6, 5);
            auto it = v.find(idx);
            CycNum got = it == v.end() ? CycNum(f) : it->second;
            CHECK(got == ha[a]);
        }
    }
    SUBCASE("identity gate: two uniform four-step history states") {
        GateGadget g = build_gate_gadget(eigen_data_identity(f));
        GadgetReport rep = verify_gate_gadget("u-I", g);
        CHECK(rep.pass());
        for (int b = 0; b < 2; ++b) {
            SparseVec v = g.kernel_vector(basis_vec(f, 2, b));
            CHECK(v.size() == 4);
            for (auto& [idx, amp] : v) CHECK(amp == CycNum::one(f));
        }
    }
    SUBCASE("non-unimodular eigenvalue rejected") {
        GateEigenData bad = eigen_data_t_gate(f);
        bad.l1 = CycNum::from_int(f, 2);
        CHECK_THROWS_AS(build_gate_gadget(bad), std::invalid_argument);
    }
}

TEST_CASE("CNOT gadget") {
    FieldSpec f(1);
    GadgetReport rep = verify_cx_gadget(f);
    CHECK(rep.corank == 4);
    CHECK(rep.delta == Rat(6));
    CHECK(rep.pass());

    // phi_11 endpoint: the t11^ component of |1>|-> flips sign under CX
    CxGadget g = build_cx_gadget(f);
    CycVector alpha(f, 4);
    alpha[2] = CycNum::one(f);   // |1>|0>
    alpha[3] = -CycNum::one(f);  // -|1>|1>  => |1>|-> unnormalized
    SparseVec v = g.kernel_vector(alpha);
    unsigned long idx2 = (2UL << 12) | one_hot_index(12, 11);
    unsigned long idx3 = (3UL << 12) | one_hot_index(12, 11);
    CHECK(v.at(idx2) == -CycNum::one(f));
    CHECK(v.at(idx3) == CycNum::one(f));
}

TEST_CASE("2-local assembly") {
    FieldSpec f(3);
    SUBCASE("single T gate: restricted corank 2 and exact history annihilation") {
        auto a = assemble_2local(f, 1, 0, {GateSpec::single(0, eigen_data_t_gate(f))},
                                 std::nullopt, false);
        CycMatrix r = restrict_to_basis(a.hprop, a.sclock_basis());
        auto kb = kernel(r);
        CHECK(kb.corank == 2);
        for (int b = 0; b < 2; ++b) {
            SparseVec hist = a.history_state(basis_vec(f, 2, b));
            CHECK(sv_is_zero(apply_instance(a.hprop, hist)));
            CHECK(sv_is_zero(apply_instance(a.hclock, hist)));
        }
    }
    SUBCASE("two-gate G8 circuit: corank = 2^(computational qubits)") {
        auto a = assemble_2local(f, 1, 0,
                                 {GateSpec::single(0, eigen_data_t_gate(f)),
                                  GateSpec::single(0, eigen_data_hadamard(f))},
                                 std::nullopt, false);
        CHECK(a.clock_sites == 12);
        CycMatrix r = restrict_to_basis(a.hprop, a.sclock_basis());
        auto kb = kernel(r);
        CHECK(kb.corank == 2);
        // history states are exact null vectors of Hprop + Hclock
        for (int b = 0; b < 2; ++b) {
            SparseVec hist = a.history_state(basis_vec(f, 2, b));
            CHECK(sv_is_zero(apply_instance(a.hprop, hist)));
            CHECK(sv_is_zero(apply_instance(a.hclock, hist)));
        }
    }
    SUBCASE("X-flip circuit with Hin and Hout: accepting history in the kernel") {
        auto a = assemble_2local(f, 1, 1, {GateSpec::single(0, eigen_data_x(f))});
        SparseVec hist = a.history_state(basis_vec(f, 2, 0));
        CHECK(sv_is_zero(apply_instance(a.total(), hist)));
        CycMatrix total = dense(a.total());
        auto kb = kernel(total);
        CHECK(kb.corank >= 1);
    }
    SUBCASE("identity circuit with contradictory in/out: positive lambda_min") {
        auto a = assemble_2local(f, 1, 1, {GateSpec::single(0, eigen_data_identity(f))});
        CycMatrix total = dense(a.total());
        SpectralReport rep = spectral_report(total);
        CHECK(rep.lambda_min > 1e-6);
    }
}

TEST_CASE("projection lemma") {
    FieldSpec f(1);
    SUBCASE("H1 = 0") {
        HamInstance h1{f, 2, 2, HamKind::kLH, {}};
        HamInstance h2{f, 2, 2, HamKind::kLH, {}};
        CycMatrix pen(f, 4, 4);
        pen.at(3, 3) = CycNum::one(f);
        h2.terms.push_back({{0, 1}, pen});
        auto b = projection_bound(h1, h2, Rat(100));
        CHECK(b.lower == doctest::Approx(0.0));
        CHECK(b.upper == doctest::Approx(0.0));
        CHECK(b.holds);
    }
    SUBCASE("toy 2-qubit H1 against dense eigensolver") {
        std::mt19937 rng(51);
        HamInstance h2{f, 2, 2, HamKind::kLH, {}};
        CycMatrix pen(f, 4, 4);
        pen.at(3, 3) = CycNum::one(f);
        h2.terms.push_back({{0, 1}, pen});
        for (int it = 0; it < 5; ++it) {
            HamInstance h1{f, 2, 2, HamKind::kLH, {}};
            CycMatrix a = testutil::random_matrix(f, 4, 4, rng, 2, 2);
            CycMatrix herm = Rat(1, 4) * (a + a.conj_transpose());
            h1.terms.push_back({{0, 1}, herm});
            auto b = projection_bound(h1, h2, Rat(100));
            CHECK(b.holds);
        }
    }
    SUBCASE("J below the threshold is rejected") {
        HamInstance h1{f, 2, 2, HamKind::kLH, {}};
        CycMatrix big(f, 4, 4);
        for (int i = 0; i < 4; ++i) big.at(i, i) = CycNum::from_int(f, 10);
        h1.terms.push_back({{0, 1}, big});
        HamInstance h2{f, 2, 2, HamKind::kLH, {}};
        CycMatrix pen(f, 4, 4);
        pen.at(3, 3) = CycNum::one(f);
        h2.terms.push_back({{0, 1}, pen});
        CHECK_THROWS_WITH_AS(projection_bound(h1, h2, Rat(5)),
                             doctest::Contains("J > 2||H1||"), std::invalid_argument);
    }
    SUBCASE("assembled instance with default Jclock") {
        FieldSpec f3(3);
        auto a = assemble_2local(f3, 1, 0,
                                 {GateSpec::single(0, eigen_data_t_gate(f3)),
                                  GateSpec::single(0, eigen_data_hadamard(f3))});
        auto b = projection_bound(a);
        CHECK(b.holds);
        CHECK(a.jclock.get_d() > 2 * b.h1_norm);
    }
}

TEST_CASE("qsat4 gadgets") {
    SUBCASE("gadget coranks") {
        CHECK(verify_qsat4_gadget(GateKind::X).pass());
        CHECK(verify_qsat4_gadget(GateKind::X).corank == 2);
        CHECK(verify_qsat4_gadget(GateKind::CX).corank == 4);
        CHECK(verify_qsat4_gadget(GateKind::HH).corank == 4);
        auto ccx = verify_qsat4_gadget(GateKind::CCX);
        CHECK(ccx.corank == 8);
        CHECK(ccx.pass());
    }
    SUBCASE("HH hop terms are rational and PSD") {
        auto rep = verify_qsat4_gadget(GateKind::HH);
        CHECK(rep.all_terms_rational);
        CHECK(rep.all_terms_psd);
        CHECK(rep.pass());
    }
}

TEST_CASE("qsat4 instances") {
    FieldSpec f(1);
    SUBCASE("X gate on one proof qubit: frustration-free history") {
        Circuit c{f, 1, 0, 1, GatesetTag::G2, {{GateKind::X, {0}}}};
        Qsat4Instance inst = build_qsat4_g2(c);
        // accepting proof |0>: the final state X|0> = |1> passes Hout
        SparseVec hist = qsat4_history_state(inst, basis_vec(f, 2, 0));
        CHECK(violated_terms(inst.ham, hist).empty());
        // rejected proof |1>: positive energy
        SparseVec bad = qsat4_history_state(inst, basis_vec(f, 2, 1));
        CycNum e = expectation(inst.ham, bad);
        CHECK(sign_real(e) > 0);
    }
    SUBCASE("every term is PSD (kQSAT form)") {
        Circuit c{f, 2, 1, 1, GatesetTag::G2,
                  {{GateKind::X, {0}}, {GateKind::CX, {0, 1}}, {GateKind::HH, {0, 1}}}};
        Qsat4Instance inst = build_qsat4_g2(c);
        for (const auto& t : inst.ham.terms) {
            CHECK(is_hermitian(t.block));
            CHECK(is_psd(t.block));
        }
        CHECK(inst.ham.locality == 4);
        for (const auto& t : inst.ham.terms) CHECK(t.qubits.size() <= 4);
    }
}
