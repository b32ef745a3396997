#pragma once

#include "cycver/linalg.hpp"
#include "cycver/regrep.hpp"

#include <map>
#include <optional>

namespace cycver {

// ---------------------------------------------------------------------------
// Gates and circuits
// ---------------------------------------------------------------------------

enum class GateKind { X, CX, CCX, HH, H, T, S, CS, WH };

inline const char* gate_name(GateKind g) {
    switch (g) {
        case GateKind::X: return "X";
        case GateKind::CX: return "CX";
        case GateKind::CCX: return "CCX";
        case GateKind::HH: return "HH";
        case GateKind::H: return "H";
        case GateKind::T: return "T";
        case GateKind::S: return "S";
        case GateKind::CS: return "CS";
        case GateKind::WH: return "wH";
    }
    return "?";
}

inline std::optional<GateKind> gate_from_name(const std::string& s) {
    if (s == "X") return GateKind::X;
    if (s == "CX") return GateKind::CX;
    if (s == "CCX") return GateKind::CCX;
    if (s == "HH") return GateKind::HH;
    if (s == "H") return GateKind::H;
    if (s == "T") return GateKind::T;
    if (s == "S") return GateKind::S;
    if (s == "CS") return GateKind::CS;
    if (s == "wH") return GateKind::WH;
    return std::nullopt;
}

inline int gate_arity(GateKind g) {
    switch (g) {
        case GateKind::X:
        case GateKind::H:
        case GateKind::T:
        case GateKind::S:
        case GateKind::WH: return 1;
        case GateKind::CX:
        case GateKind::HH:
        case GateKind::CS: return 2;
        case GateKind::CCX: return 3;
    }
    return 0;
}

/// Exact gate matrix over the given field.  Each gate states its minimal k.
inline CycMatrix gate_matrix(const FieldSpec& spec, GateKind g) {
    const CycNum one = CycNum::one(spec);
    switch (g) {
        case GateKind::X: {
            CycMatrix m(spec, 2, 2);
            m.at(0, 1) = one; m.at(1, 0) = one;
            return m;
        }
        case GateKind::CX: {
            CycMatrix m = CycMatrix::identity(spec, 4);
            m.at(2, 2) = CycNum(spec); m.at(3, 3) = CycNum(spec);
            m.at(2, 3) = one; m.at(3, 2) = one;
            return m;
        }
        case GateKind::CCX: {
            CycMatrix m = CycMatrix::identity(spec, 8);
            m.at(6, 6) = CycNum(spec); m.at(7, 7) = CycNum(spec);
            m.at(6, 7) = one; m.at(7, 6) = one;
            return m;
        }
        case GateKind::HH: {
            // (H x H) entry sign is (-1)^{r1 c1 + r2 c2}; magnitude 1/2
            CycMatrix m(spec, 4, 4);
            const Rat h(1, 2);
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) {
                    int e = (((r >> 1) & (c >> 1) & 1) + (r & c & 1)) & 1;
                    m.at(r, c) = CycNum::from_rational(spec, e ? -h : h);
                }
            return m;
        }
        case GateKind::H: {
            if (spec.k() < 3) throw std::domain_error("gate H: requires k >= 3 (sqrt 2)");
            CycNum h = Rat(1, 2) * CycNum::sqrt2(spec);
            CycMatrix m(spec, 2, 2);
            m.at(0, 0) = h; m.at(0, 1) = h; m.at(1, 0) = h; m.at(1, 1) = -h;
            return m;
        }
        case GateKind::T: {
            if (spec.k() < 3) throw std::domain_error("gate T: requires k >= 3");
            CycMatrix m(spec, 2, 2);
            m.at(0, 0) = one; m.at(1, 1) = CycNum::zeta(spec);
            return m;
        }
        case GateKind::S: {
            if (spec.k() < 2) throw std::domain_error("gate S: requires k >= 2");
            CycMatrix m(spec, 2, 2);
            m.at(0, 0) = one; m.at(1, 1) = CycNum::imag_unit(spec);
            return m;
        }
        case GateKind::CS: {
            if (spec.k() < 2) throw std::domain_error("gate CS: requires k >= 2");
            CycMatrix m = CycMatrix::identity(spec, 4);
            m.at(3, 3) = CycNum::imag_unit(spec);
            return m;
        }
        case GateKind::WH: {
            // zeta_8 * H = ((1+i)/2) [[1,1],[1,-1]]; lives in Q(i)
            if (spec.k() < 2) throw std::domain_error("gate wH: requires k >= 2");
            CycNum w = Rat(1, 2) * (CycNum::one(spec) + CycNum::imag_unit(spec));
            CycMatrix m(spec, 2, 2);
            m.at(0, 0) = w; m.at(0, 1) = w; m.at(1, 0) = w; m.at(1, 1) = -w;
            return m;
        }
    }
    throw std::logic_error("gate_matrix: unknown gate");
}

struct Gate {
    GateKind kind;
    std::vector<int> targets;
};

enum class GatesetTag { G2, G4, G2K };

inline std::string gateset_name(GatesetTag t, int k) {
    switch (t) {
        case GatesetTag::G2: return "G2";
        case GatesetTag::G4: return "G4";
        case GatesetTag::G2K: return "G" + std::to_string(1L << k);
    }
    return "?";
}

/// Generators plus the phase/controlled-phase gates they synthesize exactly.
inline bool gateset_allows(GatesetTag t, GateKind g) {
    switch (t) {
        case GatesetTag::G2:
            return g == GateKind::X || g == GateKind::CX || g == GateKind::CCX || g == GateKind::HH;
        case GatesetTag::G4:
            return g == GateKind::X || g == GateKind::CX || g == GateKind::CCX ||
                   g == GateKind::WH || g == GateKind::S || g == GateKind::CS;
        case GatesetTag::G2K:
            return true;
    }
    return false;
}

struct Circuit {
    FieldSpec spec;
    int qubits = 0;
    int ancillas = 0;
    int proof_qubits = 0;
    GatesetTag gateset = GatesetTag::G2K;
    std::vector<Gate> gates;
};

// ---------------------------------------------------------------------------
// Exact statevector with postselection
// ---------------------------------------------------------------------------

/// Unnormalized exact statevector.  Square roots never enter the field:
/// states carry an exact squared norm instead, and postselections multiply
/// the accumulated success probability.
///
/// Qubit 0 is the most significant bit of the amplitude index.
class SimState {
public:
    SimState(const FieldSpec& spec, int qubits)
        : spec_(spec), qubits_(qubits), amps_(1ULL << qubits, CycNum(spec)),
          prob_(CycNum::one(spec)) {
        if (qubits < 0 || qubits > 24) throw std::invalid_argument("SimState: qubit count out of range");
    }

    static SimState basis(const FieldSpec& spec, int qubits, unsigned long index) {
        SimState s(spec, qubits);
        s.amps_.at(index) = CycNum::one(spec);
        return s;
    }

    static SimState from_amplitudes(const FieldSpec& spec, int qubits, std::vector<CycNum> amps) {
        SimState s(spec, qubits);
        if (amps.size() != s.amps_.size())
            throw std::invalid_argument("SimState: amplitude count mismatch");
        s.amps_ = std::move(amps);
        return s;
    }

    const FieldSpec& spec() const { return spec_; }
    int qubits() const { return qubits_; }
    unsigned long dim() const { return amps_.size(); }
    const CycNum& amp(unsigned long i) const { return amps_.at(i); }
    CycNum& amp(unsigned long i) { return amps_.at(i); }
    const std::vector<CycNum>& amplitudes() const { return amps_; }

    /// Accumulated success probability of all postselections so far.
    const CycNum& probability() const { return prob_; }

    CycNum norm_sq() const {
        CycNum s(spec_);
        for (const auto& a : amps_) s += a.abs_sq();
        return s;
    }

    CycVector vec() const { return CycVector(spec_, amps_); }

    /// Apply an exact unitary block to the given (distinct) target qubits.
    void apply_matrix(const CycMatrix& u, const std::vector<int>& targets) {
        const int t = static_cast<int>(targets.size());
        if (u.rows() != (1 << t) || u.cols() != (1 << t))
            throw std::invalid_argument("apply_matrix: block size mismatch");
        check_same_spec(spec_, u.spec(), "apply_matrix");
        unsigned long mask = 0;
        for (int q : targets) {
            if (q < 0 || q >= qubits_) throw std::out_of_range("apply_matrix: target out of range");
            unsigned long bit = 1ULL << (qubits_ - 1 - q);
            if (mask & bit) throw std::invalid_argument("apply_matrix: duplicate target");
            mask |= bit;
        }
        std::vector<unsigned long> bits(t);
        for (int j = 0; j < t; ++j) bits[j] = 1ULL << (qubits_ - 1 - targets[j]);
        std::vector<CycNum> local(1 << t, CycNum(spec_));
        for (unsigned long base = 0; base < dim(); ++base) {
            if (base & mask) continue;  // enumerate states with all target bits 0
            for (int v = 0; v < (1 << t); ++v) {
                unsigned long idx = base;
                for (int j = 0; j < t; ++j)
                    if ((v >> (t - 1 - j)) & 1) idx |= bits[j];
                local[v] = amps_[idx];
            }
            for (int r = 0; r < (1 << t); ++r) {
                CycNum acc(spec_);
                for (int c = 0; c < (1 << t); ++c) {
                    if (u.at(r, c).is_zero() || local[c].is_zero()) continue;
                    acc += u.at(r, c) * local[c];
                }
                unsigned long idx = base;
                for (int j = 0; j < t; ++j)
                    if ((r >> (t - 1 - j)) & 1) idx |= bits[j];
                amps_[idx] = acc;
            }
        }
    }

    void apply_gate(GateKind g, const std::vector<int>& targets) {
        if (static_cast<int>(targets.size()) != gate_arity(g))
            throw std::invalid_argument(std::string("apply_gate: ") + gate_name(g) + " arity mismatch");
        apply_matrix(gate_matrix(spec_, g), targets);
    }

    void apply_gate(const Gate& g) { apply_gate(g.kind, g.targets); }

    /// Project the given register onto the uniform superposition (the
    /// all-|+> Hadamard-basis outcome) and drop it.  Amplitudes of the
    /// reduced state are plain sums; the branch fraction
    /// ||new||^2 / (2^r ||old||^2) multiplies the success probability.
    SimState postselect_uniform(const std::vector<int>& targets) const {
        unsigned long mask = 0;
        for (int q : targets) mask |= 1ULL << (qubits_ - 1 - q);
        const int r = static_cast<int>(targets.size());
        SimState out(spec_, qubits_ - r);
        CycNum old_sq = norm_sq();
        if (old_sq.is_zero()) throw std::domain_error("postselect_uniform: zero state");
        // compress the non-target bits
        for (unsigned long i = 0; i < dim(); ++i) {
            if (amps_[i].is_zero()) continue;
            unsigned long rest = 0;
            int outpos = 0;
            for (int q = 0; q < qubits_; ++q) {
                unsigned long bit = 1ULL << (qubits_ - 1 - q);
                if (bit & mask) continue;
                rest |= ((i & bit) ? 1ULL : 0ULL) << (out.qubits_ - 1 - outpos);
                ++outpos;
            }
            out.amps_[rest] += amps_[i];
        }
        CycNum new_sq = out.norm_sq();
        Rat pow2(1, 1L << r);
        out.prob_ = prob_ * (pow2 * (new_sq * old_sq.inverse()));
        return out;
    }

    /// Project a single qubit onto |value> and drop it.
    SimState postselect_bit(int qubit, int value) const {
        unsigned long bit = 1ULL << (qubits_ - 1 - qubit);
        SimState out(spec_, qubits_ - 1);
        CycNum old_sq = norm_sq();
        if (old_sq.is_zero()) throw std::domain_error("postselect_bit: zero state");
        for (unsigned long i = 0; i < dim(); ++i) {
            if (amps_[i].is_zero()) continue;
            if (((i & bit) != 0) != (value != 0)) continue;
            unsigned long rest = 0;
            int outpos = 0;
            for (int q = 0; q < qubits_; ++q) {
                unsigned long b = 1ULL << (qubits_ - 1 - q);
                if (b == bit) continue;
                rest |= ((i & b) ? 1ULL : 0ULL) << (out.qubits_ - 1 - outpos);
                ++outpos;
            }
            out.amps_[rest] = amps_[i];
        }
        CycNum new_sq = out.norm_sq();
        out.prob_ = prob_ * (new_sq * old_sq.inverse());
        return out;
    }

    void scale_probability(const CycNum& f) { prob_ = prob_ * f; }

private:
    FieldSpec spec_;
    int qubits_;
    std::vector<CycNum> amps_;
    CycNum prob_;
};

/// Dense unitary of a whole circuit (oracle path for small circuits).
inline CycMatrix circuit_unitary(const Circuit& c) {
    if (c.qubits > 12) throw std::invalid_argument("circuit_unitary: too many qubits for dense form");
    const unsigned long dim = 1UL << c.qubits;
    CycMatrix u(c.spec, static_cast<int>(dim), static_cast<int>(dim));
    for (unsigned long col = 0; col < dim; ++col) {
        SimState s = SimState::basis(c.spec, c.qubits, col);
        for (const auto& g : c.gates) s.apply_gate(g);
        for (unsigned long row = 0; row < dim; ++row)
            u.at(static_cast<int>(row), static_cast<int>(col)) = s.amp(row);
    }
    return u;
}

/// Exact acceptance probability of a verifier circuit on the given proof:
/// p_acc = || (|1><1| on qubit 0) Q (|0^a> x |proof>) ||^2 / ||proof||^2.
/// Perfect completeness is p_acc == 1 exactly.
inline CycNum run_verifier(const Circuit& c, const CycVector& proof) {
    if (c.ancillas + c.proof_qubits != c.qubits)
        throw std::invalid_argument("run_verifier: register split does not match qubit count");
    if (proof.size() != (1 << c.proof_qubits))
        throw std::invalid_argument("run_verifier: proof dimension mismatch");
    for (const auto& g : c.gates) {
        if (!gateset_allows(c.gateset, g.kind))
            throw std::invalid_argument(std::string("run_verifier: gate ") + gate_name(g.kind) +
                                        " not in declared gateset");
        for (int t : g.targets)
            if (t < 0 || t >= c.qubits) throw std::out_of_range("run_verifier: gate target out of range");
    }
    CycNum in_sq = proof.norm_sq();
    if (in_sq.is_zero()) throw std::invalid_argument("run_verifier: zero proof");
    SimState s(c.spec, c.qubits);
    for (int i = 0; i < proof.size(); ++i) s.amp(static_cast<unsigned long>(i)) = proof[i];
    for (const auto& g : c.gates) s.apply_gate(g);
    // Accepting projector |1><1| on the first qubit.
    CycNum acc(c.spec);
    unsigned long bit = 1ULL << (c.qubits - 1);
    for (unsigned long i = 0; i < s.dim(); ++i)
        if (i & bit) acc += s.amp(i).abs_sq();
    return acc * in_sq.inverse();
}

// ---------------------------------------------------------------------------
// Integer state preparation (postselected)
// ---------------------------------------------------------------------------

struct PreparedState {
    SimState state;       ///< amplitudes equal the requested coefficients exactly
    CycNum probability;   ///< exact overall success probability
    CycNum asserted_bound;///< the bound that was verified against `probability`
};

namespace detail {

inline int ceil_log2(const Int& v) {
    if (v <= 1) return 0;
    Int x = v - 1;
    int n = 0;
    while (x > 0) { x >>= 1; ++n; }
    return n;
}

/// Core of the preparation lemma for nonnegative integer coefficients:
/// uniform superposition, range cut to [0, A), tagging (a permutation),
/// Hadamard-basis acceptance on the work register.  Returns the exact
/// success probability sum(a_i^2) / 2^(n+m); the prepared amplitudes are the
/// a_i themselves (unnormalized convention).
inline Rat unsigned_integer_prepare_probability(const std::vector<Int>& a) {
    Int A = 0, sq = 0, amax = 0;
    for (const auto& v : a) {
        if (v < 0) throw std::invalid_argument("integer prepare: negative magnitude");
        A += v;
        sq += v * v;
        if (v > amax) amax = v;
    }
    if (A == 0) throw std::invalid_argument("integer prepare: all-zero target");
    const int n = ceil_log2(A);
    const int m = ceil_log2(amax);
    // p1 = A/2^n from the range-cut measurement, p2 = sum a^2/(2^m A) from
    // the Hadamard-basis acceptance; the tagging stages are permutations.
    Rat p(sq);
    p /= Rat(Int(1) << (n + m));
    p.canonicalize();
    return p;
}

}  // namespace detail

/// Lemma-style preparation of |psi> proportional to sum_i a_i |i> with integer
/// coefficients (not all zero), over gateset G_2.  The returned state's
/// amplitudes are exactly a_i; probability >= 1/(4d) is asserted.
inline PreparedState prepare_integer_state(const FieldSpec& spec, const std::vector<Int>& a) {
    const int d = static_cast<int>(a.size());
    if (d == 0) throw std::invalid_argument("prepare_integer_state: empty target");
    std::vector<Int> mags(a.size());
    for (size_t i = 0; i < a.size(); ++i) mags[i] = abs(a[i]);
    Rat p = detail::unsigned_integer_prepare_probability(mags);
    Rat bound(1, 4 * d);
    if (p < bound) throw std::logic_error("prepare_integer_state: probability below lemma bound");
    int qubits = detail::ceil_log2(Int(d));
    if ((1 << qubits) < d) ++qubits;
    std::vector<CycNum> amps(1ULL << qubits, CycNum(spec));
    for (int i = 0; i < d; ++i) amps[i] = CycNum::from_rational(spec, Rat(a[i]));  // signs via CZ-type phases
    SimState s = SimState::from_amplitudes(spec, qubits, std::move(amps));
    s.scale_probability(CycNum::from_rational(spec, p));
    return PreparedState{std::move(s), CycNum::from_rational(spec, p),
                         CycNum::from_rational(spec, bound)};
}

/// Gaussian-integer variant: coefficients a_i + b_i*i, requires k >= 2.
/// Probability >= 1/(16d) is asserted.
inline PreparedState prepare_integer_state_complex(const FieldSpec& spec,
                                                   const std::vector<std::pair<Int, Int>>& ab) {
    if (spec.k() < 2) throw std::domain_error("prepare_integer_state_complex: requires k >= 2");
    const int d = static_cast<int>(ab.size());
    if (d == 0) throw std::invalid_argument("prepare_integer_state_complex: empty target");
    bool any = false;
    std::vector<Int> mags;
    mags.reserve(2 * ab.size());
    for (const auto& [re, im] : ab) {
        mags.push_back(abs(re));
        any = any || re != 0 || im != 0;
    }
    for (const auto& [re, im] : ab) mags.push_back(abs(im));
    if (!any) throw std::invalid_argument("prepare_integer_state_complex: all-zero target");
    Rat p1 = detail::unsigned_integer_prepare_probability(mags);
    // Merging the real and imaginary halves in the Hadamard basis succeeds
    // with probability exactly 1/2 (|a|^2 + |b|^2 = |a + ib|^2).
    Rat p = p1 / 2;
    Rat bound(1, 16 * d);
    if (p < bound) throw std::logic_error("prepare_integer_state_complex: probability below lemma bound");
    int qubits = detail::ceil_log2(Int(d));
    if ((1 << qubits) < d) ++qubits;
    std::vector<CycNum> amps(1ULL << qubits, CycNum(spec));
    CycNum iu = CycNum::imag_unit(spec);
    for (int i = 0; i < d; ++i)
        amps[i] = CycNum::from_rational(spec, Rat(ab[i].first)) +
                  CycNum::from_rational(spec, Rat(ab[i].second)) * iu;
    SimState s = SimState::from_amplitudes(spec, qubits, std::move(amps));
    s.scale_probability(CycNum::from_rational(spec, p));
    return PreparedState{std::move(s), CycNum::from_rational(spec, p),
                         CycNum::from_rational(spec, bound)};
}

/// Cyclotomic-integer variant: each a_i in Z[zeta], a_i != 0.  The final
/// Hadamard-basis acceptance on the zeta-power register has exact success
/// probability sum|a_i|^2 / (d_field * sum b_ij^2); the asserted bound
/// substitutes the small-sum lower bound for each |a_i|.
inline PreparedState prepare_integer_state_cyclotomic(const std::vector<CycNum>& a) {
    if (a.empty()) throw std::invalid_argument("prepare_integer_state_cyclotomic: empty target");
    const FieldSpec spec = a.front().spec();
    const int d = static_cast<int>(a.size());
    const int df = spec.degree();
    std::vector<Int> b;
    b.reserve(a.size() * df);
    CycNum num(spec);  // sum_i |a_i|^2
    Int den = 0;       // sum_ij b_ij^2
    CycNum bound_num(spec);
    for (const auto& ai : a) {
        check_same_spec(spec, ai.spec(), "prepare_integer_state_cyclotomic");
        if (ai.is_zero())
            throw std::invalid_argument("prepare_integer_state_cyclotomic: zero coefficient");
        for (int j = 0; j < df; ++j) {
            const Rat& q = ai.coeff(j);
            if (q.get_den() != 1)
                throw std::invalid_argument("prepare_integer_state_cyclotomic: integer coefficients required");
            b.push_back(abs(q.get_num()));
            den += q.get_num() * q.get_num();
        }
        num += ai.abs_sq();
        Rat sb = small_sum_bound(ai);
        bound_num += CycNum::from_rational(spec, sb * sb);
    }
    Rat p1 = detail::unsigned_integer_prepare_probability(b);
    Rat zeta_reg_scale(1, df);
    CycNum frac = (zeta_reg_scale * num) * CycNum::from_rational(spec, Rat(den)).inverse();
    CycNum p = CycNum::from_rational(spec, p1) * frac;
    CycNum bound = CycNum::from_rational(spec, p1 * zeta_reg_scale) * bound_num *
                   CycNum::from_rational(spec, Rat(den)).inverse();
    if (sign_real(p - bound) < 0)
        throw std::logic_error("prepare_integer_state_cyclotomic: probability below derived bound");
    int qubits = detail::ceil_log2(Int(d));
    if ((1 << qubits) < d) ++qubits;
    std::vector<CycNum> amps(1ULL << qubits, CycNum(spec));
    for (int i = 0; i < d; ++i) amps[i] = a[i];
    SimState s = SimState::from_amplitudes(spec, qubits, std::move(amps));
    s.scale_probability(p);
    return PreparedState{std::move(s), p, bound};
}

// ---------------------------------------------------------------------------
// Linear combination of unitaries
// ---------------------------------------------------------------------------

inline unsigned long swap_bit_pairs(unsigned long y, int n) {
    unsigned long r = 0;
    for (int j = 0; j < n; ++j) {
        unsigned long pair = (y >> (2 * (n - 1 - j))) & 3UL;
        unsigned long sw = ((pair & 1UL) << 1) | (pair >> 1);
        r |= sw << (2 * (n - 1 - j));
    }
    return r;
}

struct LcuOutcome {
    unsigned long y = 0;        ///< Hadamard-measurement outcome (2n bits)
    unsigned long y_tilde = 0;  ///< pairwise-swapped outcome; U_y = P_y~ A P_y~
    CycVector branch;           ///< unnormalized post-measurement state 2^{-n} U_y |psi>
    CycNum sq_norm;             ///< exact squared norm of `branch`
    CycNum probability;         ///< sq_norm / (sum_x |a_x|^2 * ||psi||^2)
};

/// Simulate the LCU application of A to psi: prepare |A>, apply controlled
/// Paulis, measure the ancilla in the Hadamard basis.  Outcome y applies
/// U_y = P_y~ A P_y~ scaled by 2^{-n}; for unitary A every branch probability
/// is exactly 4^{-n}, and the y=0 branch probability vanishes iff A psi = 0.
inline std::vector<LcuOutcome> lcu_apply(const CycMatrix& a, const CycVector& psi) {
    if (!a.is_square()) throw std::invalid_argument("lcu_apply: square matrix required");
    if (a.is_zero()) throw std::invalid_argument("lcu_apply: zero operator");
    if (a.spec().k() < 2) throw std::domain_error("lcu_apply: requires k >= 2");
    int n = 0;
    while ((1 << n) < a.rows()) ++n;
    if ((1 << n) != a.rows() || psi.size() != a.rows())
        throw std::invalid_argument("lcu_apply: dimension mismatch");
    const FieldSpec& spec = a.spec();
    std::vector<CycNum> coeff = pauli_decompose(a);
    const unsigned long count = coeff.size();
    // table[x] = a_x * P_x |psi>
    std::vector<CycVector> table;
    table.reserve(count);
    for (unsigned long x = 0; x < count; ++x) {
        CycVector v(spec, psi.size());
        if (!coeff[x].is_zero()) {
            for (unsigned long r = 0; r < static_cast<unsigned long>(psi.size()); ++r) {
                if (psi[static_cast<int>(r)].is_zero()) continue;
                unsigned long c;
                CycNum ph(spec);
                pauli_action(spec, x, n, r, c, ph);
                v[static_cast<int>(c)] += coeff[x] * ph * psi[static_cast<int>(r)];
            }
        }
        table.push_back(std::move(v));
    }
    CycNum weight_sq(spec);
    for (const auto& ax : coeff) weight_sq += ax.abs_sq();
    CycNum total = weight_sq * psi.norm_sq();
    if (total.is_zero()) throw std::invalid_argument("lcu_apply: zero input state");
    Rat scale(1, 1L << n);
    std::vector<LcuOutcome> out;
    out.reserve(count);
    for (unsigned long y = 0; y < count; ++y) {
        CycVector branch(spec, psi.size());
        for (unsigned long x = 0; x < count; ++x) {
            if (table[x].is_zero()) continue;
            bool neg = __builtin_parityl(x & y);
            branch = neg ? branch - table[x] : branch + table[x];
        }
        branch = CycNum::from_rational(spec, scale) * branch;
        LcuOutcome o;
        o.y = y;
        o.y_tilde = swap_bit_pairs(y, n);
        o.sq_norm = branch.norm_sq();
        o.probability = o.sq_norm * total.inverse();
        o.branch = std::move(branch);
        out.push_back(std::move(o));
    }
    return out;
}

/// Residual operator of a failed LCU round: P_y~ A P_y~.
inline CycMatrix lcu_residual(const CycMatrix& a, unsigned long y) {
    int n = 0;
    while ((1 << n) < a.rows()) ++n;
    unsigned long yt = swap_bit_pairs(y, n);
    CycMatrix p = pauli_string(a.spec(), yt, n);
    return p * a * p;
}

// ---------------------------------------------------------------------------
// Oblivious amplitude amplification
// ---------------------------------------------------------------------------

/// sin((2l+1) theta) as an exact rational in s = sin(theta):
/// t_{m+1} = 2(1-2s^2) t_m - t_{m-1}, t_0 = s, t_1 = (3-4s^2)s.
inline Rat odd_sine_multiple(const Rat& s, int ell) {
    Rat c2 = 1 - 2 * s * s;  // cos(2 theta)
    Rat tm1 = s;
    if (ell == 0) return tm1;
    Rat t = (3 - 4 * s * s) * s;
    for (int m = 1; m < ell; ++m) {
        Rat nxt = 2 * c2 * t - tm1;
        tm1 = t;
        t = nxt;
    }
    return t;
}

struct ObliviousResult {
    SimState out;          ///< S^l U |0^mu>|psi>
    CycMatrix v;           ///< exact V with <0^mu| U |0^mu> = sin(theta) V
    Rat target_amplitude;  ///< sin((2l+1) theta), exact
    double defect;         ///< max numeric deviation of the block from target
};

/// Apply S^l U with S = -U R U^dagger R, R = 2|0^mu><0^mu| x I - I, to
/// |0^mu>|psi>.  The block-encoding precondition <0^mu|U|0^mu> = sin(theta) V
/// is checked exactly (B^dagger B = sin^2(theta) I); violation throws with the
/// measured defect.  The amplified block is compared against
/// sin((2l+1)theta) V |psi> numerically at the given tolerance.
inline ObliviousResult oblivious_amplify(const CycMatrix& u, int mu, const Rat& sin_theta, int ell,
                                         const CycVector& psi, double tol = 1e-9) {
    if (!is_unitary(u)) throw std::invalid_argument("oblivious_amplify: U must be exactly unitary");
    if (ell < 0) throw std::invalid_argument("oblivious_amplify: l must be >= 0");
    const FieldSpec& spec = u.spec();
    int total_qubits = 0;
    while ((1 << total_qubits) < u.rows()) ++total_qubits;
    if ((1 << total_qubits) != u.rows()) throw std::invalid_argument("oblivious_amplify: dimension not a power of two");
    const int n = total_qubits - mu;
    if (n < 0 || psi.size() != (1 << n)) throw std::invalid_argument("oblivious_amplify: psi dimension mismatch");
    const int sysdim = 1 << n;
    // B = <0^mu| U |0^mu> block, top-left corner.
    CycMatrix b(spec, sysdim, sysdim);
    for (int i = 0; i < sysdim; ++i)
        for (int j = 0; j < sysdim; ++j) b.at(i, j) = u.at(i, j);
    CycNum s2 = CycNum::from_rational(spec, sin_theta * sin_theta);
    CycMatrix gram = b.conj_transpose() * b;
    CycMatrix want = s2 * CycMatrix::identity(spec, sysdim);
    if (gram != want) {
        double defect = 0;
        for (int i = 0; i < sysdim; ++i)
            for (int j = 0; j < sysdim; ++j)
                defect = std::max(defect, std::abs((gram.at(i, j) - want.at(i, j)).embed()));
        throw std::domain_error("oblivious_amplify: block structure violated, defect " +
                                std::to_string(defect));
    }
    CycMatrix v = CycNum::from_rational(spec, sin_theta).inverse() * b;

    // Work in the full space.
    SimState st(spec, total_qubits);
    for (int i = 0; i < sysdim; ++i) st.amp(static_cast<unsigned long>(i)) = psi[i];
    std::vector<int> all(total_qubits);
    for (int q = 0; q < total_qubits; ++q) all[q] = q;
    auto apply_r = [&](SimState& s) {  // R = 2 Pi - I
        for (unsigned long i = static_cast<unsigned long>(sysdim); i < s.dim(); ++i)
            s.amp(i) = -s.amp(i);
    };
    CycMatrix udag = u.conj_transpose();
    st.apply_matrix(u, all);
    for (int it = 0; it < ell; ++it) {
        apply_r(st);
        st.apply_matrix(udag, all);
        apply_r(st);
        st.apply_matrix(u, all);
        for (unsigned long i = 0; i < st.dim(); ++i) st.amp(i) = -st.amp(i);
    }
    Rat target = odd_sine_multiple(sin_theta, ell);
    CycVector expect = CycNum::from_rational(spec, target) * (v * psi);
    double defect = 0;
    for (int i = 0; i < sysdim; ++i)
        defect = std::max(defect, std::abs((st.amp(static_cast<unsigned long>(i)) - expect[i]).embed()));
    if (defect > tol)
        throw std::logic_error("oblivious_amplify: amplified block off target by " + std::to_string(defect));
    return ObliviousResult{std::move(st), std::move(v), target, defect};
}

/// Padding circuit U' on r+1 qubits with <0^{r+1}|U'|0^{r+1}> = c'/2^r:
/// H^r on the first r qubits, flip the last qubit when the first r encode an
/// integer >= c', H^r again.  Even r keeps all entries rational; odd r needs
/// sqrt 2 in the field.
inline CycMatrix padding_unitary(const FieldSpec& spec, int r, long c_prime) {
    if (r < 1 || c_prime < 0 || c_prime > (1L << r))
        throw std::invalid_argument("padding_unitary: need 0 <= c' <= 2^r, r >= 1");
    CycNum scale(spec);
    if (r % 2 == 0)
        scale = CycNum::from_rational(spec, Rat(1, 1L << (r / 2)));
    else
        scale = Rat(1, 1L << ((r + 1) / 2)) * CycNum::sqrt2(spec);  // 2^{-r/2} via sqrt2/2^{(r+1)/2}
    const int dim = 1 << (r + 1);
    // H^{x r} x I
    CycMatrix hr(spec, dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            if ((i & 1) != (j & 1)) continue;
            int par = __builtin_parity((i >> 1) & (j >> 1));
            hr.at(i, j) = par ? -scale : scale;
        }
    CycMatrix flip(spec, dim, dim);
    for (int i = 0; i < dim; ++i) {
        long j = i >> 1;
        int b = i & 1;
        int nb = (j >= c_prime) ? 1 - b : b;
        flip.at((static_cast<int>(j) << 1) | nb, i) = CycNum::one(spec);
    }
    return hr * flip * hr;
}

}  // namespace cycver
