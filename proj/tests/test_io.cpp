#include "doctest.h"

#include "cycver/io.hpp"
#include "cycver/regrep.hpp"
#include "test_util.hpp"

#include <sstream>

using namespace cycver;

TEST_CASE("matrix file round trip") {
    FieldSpec f(3);
    std::mt19937 rng(113);
    CycMatrix m = testutil::random_matrix(f, 3, 4, rng);
    std::stringstream ss;
    write_matrix(ss, m);
    CycMatrix back = read_matrix(ss, "mem");
    CHECK(back == m);
}

TEST_CASE("matrix COO form") {
    std::stringstream ss("{k=2, rows=2, cols=2}\n0 1 [1, 0]\n1 0 [0, -1/2]\n");
    CycMatrix m = read_matrix(ss, "mem");
    FieldSpec f(2);
    CHECK(m.at(0, 1) == CycNum::one(f));
    CHECK(m.at(1, 0) == Rat(-1, 2) * CycNum::imag_unit(f));
    CHECK(m.at(0, 0).is_zero());
}

TEST_CASE("parse errors carry line numbers") {
    SUBCASE("bad coefficient count") {
        std::stringstream ss("{k=3, rows=1, cols=1}\n[1, 2]\n");
        CHECK_THROWS_WITH_AS(read_matrix(ss, "m.txt"), doctest::Contains("m.txt:2"), ParseError);
    }
    SUBCASE("missing header") {
        std::stringstream ss("1 2 [0]\n");
        CHECK_THROWS_AS(read_matrix(ss, "m.txt"), ParseError);
    }
    SUBCASE("bad gate name") {
        std::stringstream ss("{k=3, qubits=1, ancillas=0, proof_qubits=1, gateset=G8}\nQQ 0\n");
        CHECK_THROWS_WITH_AS(read_circuit(ss, "c.txt"), doctest::Contains("c.txt:2"), ParseError);
    }
    SUBCASE("non-hermitian sparse file") {
        std::stringstream ss("{k=2, n=1, d=1, h=1}\n0 1 [1, 0]\n");
        CHECK_THROWS_AS(read_sparse_ham(ss, "s.txt"), ParseError);
    }
}

TEST_CASE("circuit file round trip") {
    std::stringstream ss(
        "{k=3, qubits=3, ancillas=1, proof_qubits=2, gateset=G8}\n"
        "H 2\n"
        "CS 1,2\n"
        "CX 0,1\n");
    Circuit c = read_circuit(ss, "mem");
    CHECK(c.qubits == 3);
    CHECK(c.gateset == GatesetTag::G2K);
    REQUIRE(c.gates.size() == 3);
    CHECK(c.gates[1].kind == GateKind::CS);
    CHECK(c.gates[1].targets == std::vector<int>{1, 2});
    std::stringstream out;
    write_circuit(out, c);
    Circuit back = read_circuit(out, "mem2");
    CHECK(back.gates.size() == 3);
    CHECK(back.gates[2].kind == GateKind::CX);
}

TEST_CASE("sparse Hamiltonian file round trip") {
    FieldSpec f(3);
    SparseHam h;
    h.spec = f; h.qubits = 2; h.degree = 2; h.denom = 2;
    CycNum v = Rat(1, 2) * (CycNum::one(f) + CycNum::zeta(f));
    h.set(0, 3, v);
    h.set(3, 0, v.conj());
    h.set(1, 1, Rat(1, 2) * CycNum::sqrt2(f));
    std::stringstream ss;
    write_sparse_ham(ss, h);
    SparseHam back = read_sparse_ham(ss, "mem");
    CHECK(back.entries == h.entries);
    CHECK(back.denom == h.denom);
}

TEST_CASE("ham instance file round trip") {
    FieldSpec f(1);
    HamInstance h = build_hclock(f, 2);
    std::stringstream ss;
    write_ham_instance(ss, h);
    HamInstance back = read_ham_instance(ss, "mem");
    REQUIRE(back.terms.size() == h.terms.size());
    CHECK(dense(back) == dense(h));
    CHECK(back.kind == HamKind::kLH);
}

TEST_CASE("graph file round trip") {
    WeightedGraph g = WeightedGraph::unweighted(4);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.weights[2] = Rat(3, 2);
    std::stringstream ss;
    write_graph(ss, g);
    WeightedGraph back = read_graph(ss, "mem");
    CHECK(back.vertices == 4);
    CHECK(back.edges == g.edges);
    CHECK(back.weights[2] == Rat(3, 2));
}

TEST_CASE("golden fixtures: psi reproduces the published matrices bit-exactly") {
    const std::string dir = CYCVER_GOLDEN_DIR;
    SUBCASE("sqrt of Hadamard, 8x8") {
        CycMatrix in = read_matrix_file(dir + "/sqrt_h_input.txt");
        CycMatrix expect = read_matrix_file(dir + "/psi_sqrt_h.txt");
        REQUIRE(in.rows() == 2);
        CHECK(is_unitary(in));
        CHECK(psi(in) == expect);
        // and the input itself is the principal square root of H
        FieldSpec f(3);
        CHECK(in * in == gate_matrix(f, GateKind::H));
    }
    SUBCASE("three-qubit QFT, 32x32") {
        CycMatrix in = read_matrix_file(dir + "/f8_input.txt");
        CycMatrix expect = read_matrix_file(dir + "/psi_f8.txt");
        REQUIRE(in.rows() == 8);
        CHECK(is_unitary(in));
        CHECK(psi(in) == expect);
        // F8[j][l] = zeta^{jl} / sqrt(8)
        FieldSpec f(3);
        CycNum scale = Rat(1, 4) * CycNum::sqrt2(f);  // 1/sqrt8 = sqrt2/4
        for (int j = 0; j < 8; ++j)
            for (int l = 0; l < 8; ++l)
                CHECK(in.at(j, l) == scale * CycNum::zeta_pow(f, j * l));
    }
}
