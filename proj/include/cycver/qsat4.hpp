#pragma once

#include "cycver/hamiltonian.hpp"

namespace cycver {

// ---------------------------------------------------------------------------
// 4-local quantum SAT for the rational gateset {X, CX, CCX, HxH}
// ---------------------------------------------------------------------------
//
// Clock: one logical qu-5-it per gate, each on 4 physical qubits with the
// logical alphabet (unborn, alive 1..3, dead)
//   u = |1000>, a1 = |0010>, a2 = |0011>, a3 = |0001>, d = |0100>.
// A gate's gadget lives on the alive steps; the clock advances
// (u..u) -> (a1 u..) -> ... -> (d d .. d) through 4m+1 logical states.

namespace qu5 {
constexpr unsigned long U = 0b1000;
constexpr unsigned long A1 = 0b0010;
constexpr unsigned long A2 = 0b0011;
constexpr unsigned long A3 = 0b0001;
constexpr unsigned long D = 0b0100;
// On the (q3, q4) pair the alive states read a1 = 10, a2 = 11, a3 = 01.
constexpr int A1_34 = 2, A2_34 = 3, A3_34 = 1;
}  // namespace qu5

struct Qsat4Instance {
    FieldSpec spec{1};
    int comp_qubits = 0;
    int ancillas = 0;
    int num_gates = 0;
    std::vector<Gate> circuit_gates;
    HamInstance ham;  // all terms PSD, rational, locality <= 4
    // term-index groups, for reporting
    std::vector<size_t> penalty_terms, transition_terms, gadget_terms, inout_terms;

    int clock_qubits() const { return 4 * num_gates; }
    int total_qubits() const { return comp_qubits + clock_qubits(); }
    int clock_states() const { return 4 * num_gates + 1; }

    /// Physical index of the s-th logical clock state (s in 0..4m).
    unsigned long clock_index(int s) const {
        unsigned long idx = 0;
        for (int g = 0; g < num_gates; ++g) {
            unsigned long code;
            if (s == 0) {
                code = qu5::U;
            } else {
                int owner = (s - 1) / 4, phase = (s - 1) % 4;
                if (g < owner) code = qu5::D;
                else if (g > owner) code = qu5::U;
                else code = (phase == 0) ? qu5::A1 : (phase == 1) ? qu5::A2
                            : (phase == 2) ? qu5::A3 : qu5::D;
            }
            idx = (idx << 4) | code;
        }
        return idx;
    }

    unsigned long index_of(unsigned long comp, int s) const {
        return (comp << clock_qubits()) | clock_index(s);
    }
};

namespace detail {

/// Gate applied between alive steps 1 and 2 of its qu-5-it: the full gate for
/// X/CX, the inner CX for CCX, and (1/sqrt2) H on the first target for HxH
/// (the second h-term carries the balancing sqrt2 so everything is rational).
inline CycMatrix qsat4_mid_operator(const FieldSpec& spec, const Gate& g, int comp_qubits) {
    HamInstance tmp{spec, comp_qubits, 4, HamKind::kLH, {}};
    switch (g.kind) {
        case GateKind::X:
            tmp.terms.push_back({{g.targets[0]}, gate_matrix(spec, GateKind::X)});
            break;
        case GateKind::CX:
            tmp.terms.push_back({{g.targets[0], g.targets[1]}, gate_matrix(spec, GateKind::CX)});
            break;
        case GateKind::CCX:
            tmp.terms.push_back({{g.targets[1], g.targets[2]}, gate_matrix(spec, GateKind::CX)});
            break;
        case GateKind::HH: {
            CycMatrix hs = CycMatrix::from_rational(spec, 2, 2,
                                                    {Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(-1, 2)});
            tmp.terms.push_back({{g.targets[0]}, hs});
            break;
        }
        default:
            throw std::invalid_argument("qsat4: unsupported gate");
    }
    return dense(tmp);
}

inline CycMatrix qsat4_gate_operator(const FieldSpec& spec, const Gate& g, int comp_qubits) {
    HamInstance tmp{spec, comp_qubits, 4, HamKind::kLH, {}};
    std::vector<int> t = g.targets;
    tmp.terms.push_back({t, gate_matrix(spec, g.kind)});
    return dense(tmp);
}

}  // namespace detail

/// PSD transition terms between two clock codes of a qu-5-it's (q3, q4)
/// pair, with V acting on `op_qubits` of the computational register.
///
/// Both are Gram forms R^dag R with kernel {|i> x + |j> V x}:
///   backward: R = <j| x I - <i| x V      ->  [[V^dag V, -V^dag], [-V, I]]
///   forward:  R = <i| x I - <j| x V^-dag ->  [[I, -W^dag], [-W, W W^dag]],
/// written with W = (V^dag)^{-1} so that only W appears in the entries.
/// For unitary V the two coincide with the standard h_{ij}(V); the
/// sqrt2-weighted Hadamard hops use one of each so every entry stays
/// rational (the doubled diagonal block sits on the alive-2 site).
inline LocalTerm qsat4_hop_backward(const FieldSpec& spec, int code_i, int code_j,
                                    const CycMatrix& v, const std::vector<int>& clock_pair,
                                    const std::vector<int>& op_qubits) {
    const int cd = v.rows();
    CycMatrix m(spec, 4 * cd, 4 * cd);
    CycMatrix vdag = v.conj_transpose();
    CycMatrix vv = vdag * v;
    CycMatrix eye = CycMatrix::identity(spec, cd);
    for (int r = 0; r < cd; ++r)
        for (int c = 0; c < cd; ++c) {
            m.at(code_i * cd + r, code_i * cd + c) = vv.at(r, c);
            m.at(code_j * cd + r, code_j * cd + c) = eye.at(r, c);
            m.at(code_i * cd + r, code_j * cd + c) = -vdag.at(r, c);
            m.at(code_j * cd + r, code_i * cd + c) = -v.at(r, c);
        }
    std::vector<int> qubits = clock_pair;
    for (int q : op_qubits) qubits.push_back(q);
    return {qubits, m};
}

inline LocalTerm qsat4_hop_forward(const FieldSpec& spec, int code_i, int code_j,
                                   const CycMatrix& w, const std::vector<int>& clock_pair,
                                   const std::vector<int>& op_qubits) {
    const int cd = w.rows();
    CycMatrix m(spec, 4 * cd, 4 * cd);
    CycMatrix wdag = w.conj_transpose();
    CycMatrix ww = w * wdag;
    CycMatrix eye = CycMatrix::identity(spec, cd);
    for (int r = 0; r < cd; ++r)
        for (int c = 0; c < cd; ++c) {
            m.at(code_i * cd + r, code_i * cd + c) = eye.at(r, c);
            m.at(code_j * cd + r, code_j * cd + c) = ww.at(r, c);
            m.at(code_i * cd + r, code_j * cd + c) = -wdag.at(r, c);
            m.at(code_j * cd + r, code_i * cd + c) = -w.at(r, c);
        }
    std::vector<int> qubits = clock_pair;
    for (int q : op_qubits) qubits.push_back(q);
    return {qubits, m};
}

/// Build the Appendix-D style 4-QSAT instance for a G_2 circuit.  All terms
/// are PSD with rational entries; an accepting circuit is frustration-free on
/// the history state.
inline Qsat4Instance build_qsat4_g2(const Circuit& c) {
    const FieldSpec& spec = c.spec;
    for (const auto& g : c.gates)
        if (g.kind != GateKind::X && g.kind != GateKind::CX && g.kind != GateKind::CCX &&
            g.kind != GateKind::HH)
            throw std::invalid_argument("build_qsat4_g2: gates must come from {X, CX, CCX, HxH}");
    if (c.gates.empty()) throw std::invalid_argument("build_qsat4_g2: empty circuit");

    Qsat4Instance inst;
    inst.spec = spec;
    inst.comp_qubits = c.qubits;
    inst.ancillas = c.ancillas;
    inst.num_gates = static_cast<int>(c.gates.size());
    inst.circuit_gates = c.gates;
    const int n = c.qubits;
    const int m = inst.num_gates;
    if (inst.total_qubits() > 22)
        throw std::invalid_argument("build_qsat4_g2: instance exceeds the exact-simulation cap");
    HamInstance h{spec, inst.total_qubits(), 4, HamKind::kQSAT, {}};
    auto q = [n](int g, int local) { return n + 4 * g + local; };  // local 0..3 = q1..q4

    // Logical-space penalties: the 11 illegal patterns per qu-5-it.
    for (int g = 0; g < m; ++g) {
        for (unsigned long pat : {0UL, 5UL, 6UL, 7UL, 9UL, 10UL, 11UL, 12UL, 13UL, 14UL, 15UL}) {
            inst.penalty_terms.push_back(h.terms.size());
            h.terms.push_back({{q(g, 0), q(g, 1), q(g, 2), q(g, 3)},
                               basis_projector(spec, 16, static_cast<int>(pat))});
        }
    }

    // Clock transitions: normalized projectors onto |i> - |j>.
    auto proj_diff = [&spec](int dim, int i, int j) {
        CycVector v(spec, dim);
        v[i] = CycNum::one(spec);
        v[j] = -CycNum::one(spec);
        return Rat(1, 2) * vector_projector(v);
    };
    {   // u -> a1 on the first qu-5-it: |100> - |010> on (q1, q3, q4);
        // 3-local so the pattern cannot alias the a2 state.
        inst.transition_terms.push_back(h.terms.size());
        h.terms.push_back({{q(0, 0), q(0, 2), q(0, 3)}, proj_diff(8, 0b100, 0b010)});
    }
    for (int g = 0; g + 1 < m; ++g) {
        // (a3, u) -> (d, u): |0011> - |1001> on (q2, q3, q4; next q1)
        inst.transition_terms.push_back(h.terms.size());
        h.terms.push_back({{q(g, 1), q(g, 2), q(g, 3), q(g + 1, 0)}, proj_diff(16, 0b0011, 0b1001)});
        // (d, u) -> (d, a1): |1100> - |1010> on (q2; next q1, q3, q4)
        inst.transition_terms.push_back(h.terms.size());
        h.terms.push_back(
            {{q(g, 1), q(g + 1, 0), q(g + 1, 2), q(g + 1, 3)}, proj_diff(16, 0b1100, 0b1010)});
    }
    {   // final a3 -> d on the last qu-5-it: |001> - |100> on (q2, q3, q4)
        inst.transition_terms.push_back(h.terms.size());
        h.terms.push_back({{q(m - 1, 1), q(m - 1, 2), q(m - 1, 3)}, proj_diff(8, 0b001, 0b100)});
    }

    // Gate gadgets on (q3, q4) of the gate's own qu-5-it.
    for (int g = 0; g < m; ++g) {
        const Gate& gate = c.gates[g];
        std::vector<int> pair{q(g, 2), q(g, 3)};
        auto push = [&](LocalTerm t) {
            inst.gadget_terms.push_back(h.terms.size());
            h.terms.push_back(std::move(t));
        };
        const CycMatrix eye1 = CycMatrix::identity(spec, 1);
        switch (gate.kind) {
            case GateKind::X:
                push(qsat4_hop_backward(spec, qu5::A1_34, qu5::A2_34, gate_matrix(spec, GateKind::X),
                                        pair, {gate.targets[0]}));
                push(qsat4_hop_backward(spec, qu5::A2_34, qu5::A3_34, eye1, pair, {}));
                break;
            case GateKind::CX:
                push(qsat4_hop_backward(spec, qu5::A1_34, qu5::A2_34, gate_matrix(spec, GateKind::CX),
                                        pair, {gate.targets[0], gate.targets[1]}));
                push(qsat4_hop_backward(spec, qu5::A2_34, qu5::A3_34, eye1, pair, {}));
                break;
            case GateKind::HH: {
                // (1/sqrt2) H on the first target, then sqrt2 H on the second;
                // both hops come out with integer entries.
                CycMatrix s2h = CycMatrix::from_rational(spec, 2, 2, {Rat(1), Rat(1), Rat(1), Rat(-1)});
                push(qsat4_hop_forward(spec, qu5::A1_34, qu5::A2_34, s2h, pair, {gate.targets[0]}));
                push(qsat4_hop_backward(spec, qu5::A2_34, qu5::A3_34, s2h, pair, {gate.targets[1]}));
                break;
            }
            case GateKind::CCX: {
                push(qsat4_hop_backward(spec, qu5::A1_34, qu5::A2_34, gate_matrix(spec, GateKind::CX),
                                        pair, {gate.targets[1], gate.targets[2]}));
                // |0><0|_ctrl x h13(I) and |1><1|_ctrl x h23(I)
                for (int bit = 0; bit < 2; ++bit) {
                    int from = bit ? qu5::A2_34 : qu5::A1_34;
                    CycVector v(spec, 8);
                    v[(bit << 2) | from] = CycNum::one(spec);
                    v[(bit << 2) | qu5::A3_34] = -CycNum::one(spec);
                    inst.gadget_terms.push_back(h.terms.size());
                    h.terms.push_back(
                        {{gate.targets[0], q(g, 2), q(g, 3)}, Rat(1, 2) * vector_projector(v)});
                }
                break;
            }
            default: break;
        }
    }

    // Initialization and acceptance penalties (2-local): ancilla |1> at the
    // all-unborn step, output |0> at the all-dead step.
    {
        CycMatrix pen11(spec, 4, 4);
        pen11.at(3, 3) = CycNum::one(spec);
        for (int i = 0; i < c.ancillas; ++i) {
            inst.inout_terms.push_back(h.terms.size());
            h.terms.push_back({{i, q(0, 0)}, pen11});
        }
        CycMatrix pen01(spec, 4, 4);
        pen01.at(1, 1) = CycNum::one(spec);
        inst.inout_terms.push_back(h.terms.size());
        h.terms.push_back({{0, q(m - 1, 1)}, pen01});
    }

    inst.ham = std::move(h);
    return inst;
}

/// Exact history state of a qsat4 instance on computational input alpha.
/// Clock step s carries the partial computation; the alive-2 step carries the
/// gadget's mid-operator weighting.
inline SparseVec qsat4_history_state(const Qsat4Instance& inst, const CycVector& alpha) {
    const FieldSpec& spec = inst.spec;
    if (alpha.size() != (1 << inst.comp_qubits))
        throw std::invalid_argument("qsat4_history_state: input dimension mismatch");
    SparseVec v;
    auto add_step = [&](int s, const CycVector& comp) {
        for (int a = 0; a < comp.size(); ++a) {
            if (comp[a].is_zero()) continue;
            sv_add(v, inst.index_of(static_cast<unsigned long>(a), s), comp[a]);
        }
    };
    CycVector cur = alpha;
    add_step(0, cur);
    for (int g = 0; g < inst.num_gates; ++g) {
        const Gate& gate = inst.circuit_gates[g];
        add_step(4 * g + 1, cur);
        CycMatrix mid = detail::qsat4_mid_operator(spec, gate, inst.comp_qubits);
        add_step(4 * g + 2, mid * cur);
        CycMatrix full = detail::qsat4_gate_operator(spec, gate, inst.comp_qubits);
        cur = full * cur;
        add_step(4 * g + 3, cur);
        add_step(4 * g + 4, cur);
    }
    return v;
}

/// Standalone qsat4 gadget report: restricted to the alive block of one
/// qu-5-it, the gadget's kernel has dimension 2^{comp} spanned by
/// |a1>x + |a2>(M x) + |a3>(G x).
struct Qsat4GadgetReport {
    std::string name;
    int corank = 0;
    int expected_corank = 0;
    bool all_terms_psd = false;
    bool all_terms_rational = false;
    bool kernel_matches = false;
    bool pass() const {
        return corank == expected_corank && all_terms_psd && all_terms_rational && kernel_matches;
    }
};

inline Qsat4GadgetReport verify_qsat4_gadget(GateKind kind, double tol = 1e-9) {
    FieldSpec spec(1);
    int nc = gate_arity(kind);
    Circuit c{spec, nc, 0, nc, GatesetTag::G2, {{kind, {}}}};
    for (int i = 0; i < nc; ++i) c.gates[0].targets.push_back(i);
    Qsat4Instance inst = build_qsat4_g2(c);
    Qsat4GadgetReport rep;
    rep.name = std::string("qsat4-") + gate_name(kind);
    rep.expected_corank = 1 << nc;
    rep.all_terms_psd = true;
    rep.all_terms_rational = true;
    HamInstance gadget{spec, inst.total_qubits(), 4, HamKind::kQSAT, {}};
    for (size_t i : inst.gadget_terms) gadget.terms.push_back(inst.ham.terms[i]);
    for (const auto& t : gadget.terms) {
        rep.all_terms_psd = rep.all_terms_psd && is_psd(t.block, tol);
        for (int r = 0; r < t.block.rows(); ++r)
            for (int cc = 0; cc < t.block.cols(); ++cc)
                rep.all_terms_rational = rep.all_terms_rational && t.block.at(r, cc).is_rational();
    }
    // restriction basis: comp x {a1, a2, a3} on the single qu-5-it
    std::vector<SparseVec> basis;
    for (unsigned long a = 0; a < (1UL << nc); ++a)
        for (int s = 1; s <= 3; ++s) {
            SparseVec b;
            b.emplace(inst.index_of(a, s), CycNum::one(spec));
            basis.push_back(std::move(b));
        }
    CycMatrix restricted = restrict_to_basis(gadget, basis);
    auto kb = kernel(restricted);
    rep.corank = kb.corank;
    // claimed kernel: |a1>x + |a2>(M x) + |a3>(G x) annihilated term-by-term
    rep.kernel_matches = true;
    CycMatrix mid = detail::qsat4_mid_operator(spec, c.gates[0], nc);
    CycMatrix full = detail::qsat4_gate_operator(spec, c.gates[0], nc);
    for (unsigned long b = 0; b < (1UL << nc); ++b) {
        CycVector x = basis_vec(spec, 1 << nc, static_cast<int>(b));
        SparseVec w;
        CycVector m1 = mid * x, m2 = full * x;
        for (int aidx = 0; aidx < (1 << nc); ++aidx) {
            if (!x[aidx].is_zero()) sv_add(w, inst.index_of(aidx, 1), x[aidx]);
            if (!m1[aidx].is_zero()) sv_add(w, inst.index_of(aidx, 2), m1[aidx]);
            if (!m2[aidx].is_zero()) sv_add(w, inst.index_of(aidx, 3), m2[aidx]);
        }
        rep.kernel_matches = rep.kernel_matches && violated_terms(gadget, w).empty();
    }
    return rep;
}

}  // namespace cycver
