#pragma once

#include "cycver/hamiltonian.hpp"

namespace cycver {

// ---------------------------------------------------------------------------
// 2-local circuit-to-Hamiltonian assembly
// ---------------------------------------------------------------------------

/// One circuit gate entering the 2-local construction: either a single-qubit
/// gate given as eigen-data, or CNOT on (control, target).
struct GateSpec {
    bool is_cx = false;
    int q0 = 0;  ///< single-qubit target, or CX control
    int q1 = 0;  ///< CX target
    GateEigenData data{CycMatrix(), CycMatrix(), CycNum(), CycNum()};

    static GateSpec single(int target, GateEigenData d) {
        GateSpec g;
        g.q0 = target;
        g.data = std::move(d);
        return g;
    }
    static GateSpec cx(int control, int target) {
        GateSpec g;
        g.is_cx = true;
        g.q0 = control;
        g.q1 = target;
        return g;
    }
};

/// Dense operator of a gate on the full computational register.
inline CycMatrix gate_spec_unitary(const FieldSpec& spec, const GateSpec& g, int comp_qubits) {
    HamInstance tmp{spec, comp_qubits, 2, HamKind::kLH, {}};
    if (g.is_cx)
        tmp.terms.push_back({{g.q0, g.q1}, gate_matrix(spec, GateKind::CX)});
    else
        tmp.terms.push_back({{g.q0}, eigen_data_unitary(g.data)});
    return dense(tmp);
}

/// The assembled instance H = Hprop + Hin + Hout + Jclock*Hclock with
/// gadget-local clock sites concatenated left to right and joined by
/// identity connectors h_{v_i, u_{i+1}}.
struct Assembled2Local {
    FieldSpec spec{1};
    int comp_qubits = 0;
    int ancillas = 0;
    int clock_sites = 0;
    std::vector<GateSpec> gates;
    std::vector<int> offset;  ///< clock-site offset per gadget
    HamInstance hprop, hin, hout, hclock;
    Rat jclock;

    int total_qubits() const { return comp_qubits + clock_sites; }

    unsigned long index_of(unsigned long comp, int site) const {
        return (comp << clock_sites) | one_hot_index(clock_sites, site);
    }

    /// S_clock basis: computational register x one-hot clock states.
    std::vector<SparseVec> sclock_basis() const {
        std::vector<SparseVec> basis;
        for (unsigned long a = 0; a < (1UL << comp_qubits); ++a)
            for (int s = 0; s < clock_sites; ++s) {
                SparseVec v;
                v.emplace(index_of(a, s), CycNum::one(spec));
                basis.push_back(std::move(v));
            }
        return basis;
    }

    /// H1 = Hprop + Hin + Hout.
    HamInstance h1() const {
        HamInstance h = hprop;
        for (const auto& t : hin.terms) h.terms.push_back(t);
        for (const auto& t : hout.terms) h.terms.push_back(t);
        return h;
    }

    /// Full H = H1 + Jclock * Hclock as one term list.
    HamInstance total() const {
        HamInstance h = h1();
        CycNum j = CycNum::from_rational(spec, jclock);
        for (const auto& t : hclock.terms) h.terms.push_back({t.qubits, j * t.block});
        return h;
    }

    /// Exact history state for computational input alpha:
    /// sum_i psi_i(alpha_i), alpha_{i+1} = U_i alpha_i.
    SparseVec history_state(const CycVector& alpha) const {
        SparseVec v;
        CycVector cur = alpha;
        for (size_t i = 0; i < gates.size(); ++i) {
            const GateSpec& g = gates[i];
            std::vector<CycMatrix> site_ops;
            std::vector<int> gadget_qubits;
            if (g.is_cx) {
                CxGadget cg = build_cx_gadget(spec);
                for (int s = 0; s < 12; ++s) site_ops.push_back(cg.site_operator(s));
                gadget_qubits = {g.q0, g.q1};
            } else {
                GateGadget gg = build_gate_gadget(g.data);
                for (int s = 0; s < 6; ++s) site_ops.push_back(gg.site_operator(s));
                gadget_qubits = {g.q0};
            }
            for (int s = 0; s < static_cast<int>(site_ops.size()); ++s) {
                HamInstance op{spec, comp_qubits, 2, HamKind::kLH, {{gadget_qubits, site_ops[s]}}};
                CycMatrix full = dense(op);
                CycVector comp = full * cur;
                for (int a = 0; a < comp.size(); ++a) {
                    if (comp[a].is_zero()) continue;
                    sv_add(v, index_of(static_cast<unsigned long>(a), offset[i] + s), comp[a]);
                }
            }
            CycMatrix u = gate_spec_unitary(spec, g, comp_qubits);
            cur = u * cur;
        }
        return v;
    }
};

/// Default Jclock: smallest power of two exceeding 4||H1||^2/eps + 2||H1||
/// with eps = 1/1024 (the paper fixes only Jclock in poly(1/(n eps))).
inline Rat default_jclock(double h1_norm_upper) {
    double eps = 1.0 / 1024.0;
    double need = 4.0 * h1_norm_upper * h1_norm_upper / eps + 2.0 * h1_norm_upper;
    Rat j(1);
    while (j.get_d() <= need) j *= 2;
    return j;
}

inline Assembled2Local assemble_2local(const FieldSpec& spec, int comp_qubits, int ancillas,
                                       const std::vector<GateSpec>& gates,
                                       std::optional<Rat> jclock = std::nullopt,
                                       bool with_in_out = true) {
    if (gates.empty()) throw std::invalid_argument("assemble_2local: empty circuit");
    Assembled2Local a;
    a.spec = spec;
    a.comp_qubits = comp_qubits;
    a.ancillas = ancillas;
    a.gates = gates;
    int off = 0;
    for (const auto& g : gates) {
        a.offset.push_back(off);
        off += g.is_cx ? 12 : 6;
        int hi = g.is_cx ? std::max(g.q0, g.q1) : g.q0;
        if (hi >= comp_qubits) throw std::invalid_argument("assemble_2local: gate target out of range");
    }
    a.clock_sites = off;
    if (a.total_qubits() > 20)
        throw std::invalid_argument("assemble_2local: instance exceeds the exact-simulation cap");

    const int n = comp_qubits;
    auto clock_qubit = [n](int site) { return n + site; };

    HamInstance hprop{spec, a.total_qubits(), 2, HamKind::kLH, {}};
    for (size_t i = 0; i < gates.size(); ++i) {
        const GateSpec& g = gates[i];
        std::vector<LocalTerm> ts;
        if (g.is_cx) {
            CxGadget cg = build_cx_gadget(spec);
            ts = cg.ham.terms;
            // gadget-local qubits: 0 -> control, 1 -> target, 2+s -> clock site
            for (auto& t : ts)
                for (auto& q : t.qubits)
                    q = (q == 0) ? g.q0 : (q == 1) ? g.q1 : clock_qubit(a.offset[i] + (q - 2));
        } else {
            GateGadget gg = build_gate_gadget(g.data);
            ts = gg.ham.terms;
            for (auto& t : ts)
                for (auto& q : t.qubits) q = (q == 0) ? g.q0 : clock_qubit(a.offset[i] + (q - 1));
        }
        for (auto& t : ts) hprop.terms.push_back(std::move(t));
        if (i + 1 < gates.size()) {
            int v_i = a.offset[i] + (g.is_cx ? 11 : 5);
            int u_next = a.offset[i + 1];
            hprop.terms.push_back(
                {{clock_qubit(v_i), clock_qubit(u_next)}, h_transition(spec, CycNum::one(spec))});
        }
    }
    a.hprop = std::move(hprop);

    // Hin penalizes |1> ancillas at the first clock site, Hout penalizes a
    // non-accepting output qubit at the last site.
    a.hin = HamInstance{spec, a.total_qubits(), 2, HamKind::kLH, {}};
    a.hout = HamInstance{spec, a.total_qubits(), 2, HamKind::kLH, {}};
    if (with_in_out) {
        CycMatrix pen11(spec, 4, 4);
        pen11.at(3, 3) = CycNum::one(spec);
        for (int i = 0; i < ancillas; ++i)
            a.hin.terms.push_back({{i, clock_qubit(0)}, pen11});
        CycMatrix pen01(spec, 4, 4);
        pen01.at(1, 1) = CycNum::one(spec);
        a.hout.terms.push_back({{0, clock_qubit(a.clock_sites - 1)}, pen01});
    }

    // Hclock over all clock sites (T+1 qubits with T = sites-1), embedded
    // after the computational register.
    HamInstance clock = build_hclock(spec, a.clock_sites - 1);
    a.hclock = HamInstance{spec, a.total_qubits(), 2, HamKind::kLH, {}};
    for (auto t : clock.terms) {
        for (auto& q : t.qubits) q = clock_qubit(q);
        a.hclock.terms.push_back(std::move(t));
    }

    a.jclock = jclock ? *jclock : default_jclock(norm_upper_bound(a.h1()));
    return a;
}

// ---------------------------------------------------------------------------
// Projection Lemma
// ---------------------------------------------------------------------------

struct ProjectionBound {
    double lower = 0;       ///< lambda_min(H1|_S) - ||H1||^2/(J - 2||H1||)
    double upper = 0;       ///< lambda_min(H1|_S)
    double lambda_min = 0;  ///< measured lambda_min(H1 + J H2)
    double h1_norm = 0;
    bool holds = false;
};

/// Generic dense form: S is the exact kernel of H2 (computed here), and
/// lambda_min(H) comes from a dense eigensolve.  Desk scale only.
inline ProjectionBound projection_bound(const HamInstance& h1, const HamInstance& h2, const Rat& j) {
    if (h1.qubits != h2.qubits) throw std::invalid_argument("projection_bound: qubit mismatch");
    CycMatrix m1 = dense(h1), m2 = dense(h2);
    auto kb = kernel(m2);
    if (kb.corank == 0) throw std::invalid_argument("projection_bound: H2 has trivial kernel");
    double norm1 = 0;
    {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(embed(m1));
        norm1 = svd.singularValues()(0);
    }
    if (j.get_d() <= 2 * norm1)
        throw std::invalid_argument(
            "projection_bound: J too small; the projection lemma needs J > 2||H1||");
    ProjectionBound b;
    b.h1_norm = norm1;
    // lambda_min of H1 restricted to S (generalized, basis may be unnormalized)
    {
        const int m = static_cast<int>(kb.vectors.size());
        Eigen::MatrixXcd g(m, m), hh(m, m);
        std::vector<CycVector> av;
        for (const auto& v : kb.vectors) av.push_back(m1 * v);
        for (int i = 0; i < m; ++i)
            for (int jx = 0; jx < m; ++jx) {
                hh(i, jx) = inner(kb.vectors[i], av[jx]).embed();
                g(i, jx) = inner(kb.vectors[i], kb.vectors[jx]).embed();
            }
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(hh, g, Eigen::EigenvaluesOnly);
        b.upper = es.eigenvalues().minCoeff();
    }
    b.lower = b.upper - norm1 * norm1 / (j.get_d() - 2 * norm1);
    CycMatrix total = m1 + (CycNum::from_rational(h1.spec, j) * m2);
    b.lambda_min = spectral_report(total).lambda_min;
    const double slack = 1e-7;
    b.holds = (b.lower - slack <= b.lambda_min) && (b.lambda_min <= b.upper + slack);
    return b;
}

/// Projection-lemma check for an assembled instance.  The full operator
/// preserves clock Hamming-weight sectors, so lambda_min(H) is the minimum of
/// the weight-1 sector (which is exactly H1|_S, dense and small) and a
/// certified lower bound J*min_diag(Hclock|sector) - ||H1|| for the others.
inline ProjectionBound projection_bound(const Assembled2Local& a) {
    const FieldSpec& spec = a.spec;
    HamInstance h1 = a.h1();
    double norm1 = norm_upper_bound(h1);
    double j = a.jclock.get_d();
    if (j <= 2 * norm1)
        throw std::invalid_argument(
            "projection_bound: J too small; the projection lemma needs J > 2||H1||");
    auto basis = a.sclock_basis();
    CycMatrix restricted = restrict_to_basis(h1, basis);
    SpectralReport rep = spectral_report(restricted);
    ProjectionBound b;
    b.h1_norm = norm1;
    b.upper = rep.lambda_min;
    b.lower = b.upper - norm1 * norm1 / (j - 2 * norm1);
    // Smallest Hclock diagonal on Hamming weight h of T+1 clock qubits:
    // 2h(h-1)T - hT + (T+1-h); weight 1 gives 0, all others stay positive.
    const int T = a.clock_sites - 1;
    double other_min = std::numeric_limits<double>::infinity();
    for (int h = 0; h <= T + 1; ++h) {
        if (h == 1) continue;
        double diag = 2.0 * h * (h - 1) * T - static_cast<double>(h) * T + (T + 1 - h);
        other_min = std::min(other_min, j * diag - norm1);
    }
    if (other_min < b.upper)
        throw std::logic_error("projection_bound: sector bound too weak; raise Jclock");
    b.lambda_min = rep.lambda_min;  // weight-1 sector attains the minimum
    const double slack = 1e-7;
    b.holds = (b.lower - slack <= b.lambda_min) && (b.lambda_min <= b.upper + slack);
    return b;
}

}  // namespace cycver
