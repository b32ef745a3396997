#pragma once

#include "cycver/matrix.hpp"

namespace cycver {

/// Rational matrices live in the k=1 field (degree 1).
inline FieldSpec rational_spec() { return FieldSpec(1); }

/// Companion matrix M_zeta: subdiagonal ones, -1 in the top-right corner.
/// For d = 1 (k = 1) this is the 1x1 matrix (-1), consistent with zeta_2 = -1.
inline CycMatrix companion_mzeta(const FieldSpec& spec) {
    const int d = spec.degree();
    const FieldSpec q = rational_spec();
    CycMatrix m(q, d, d);
    if (d == 1) {
        m.at(0, 0) = CycNum::from_int(q, -1);
        return m;
    }
    for (int i = 0; i + 1 < d; ++i) m.at(i + 1, i) = CycNum::one(q);
    m.at(0, d - 1) = CycNum::from_int(q, -1);
    return m;
}

/// Coordinate vector v(a) of a in the integral basis, as a rational vector.
inline CycVector coordinate_vector(const CycNum& a) {
    const FieldSpec q = rational_spec();
    CycVector v(q, a.degree());
    for (int i = 0; i < a.degree(); ++i) v[i] = CycNum::from_rational(q, a.coeff(i));
    return v;
}

/// Regular representation M_a = sum_i a_i (M_zeta)^i, a d x d exact rational
/// matrix with M_a v(b) = v(ab) and M_a^T = M_conj(a).
inline CycMatrix reg_rep(const CycNum& a) {
    const int d = a.degree();
    const FieldSpec q = rational_spec();
    CycMatrix m(q, d, d);
    // Column j of M_a is v(a * zeta^j); builds the sum of shifted companion
    // powers without forming them explicitly.
    for (int j = 0; j < d; ++j) {
        CycNum col = a * CycNum::zeta_pow(a.spec(), j);
        for (int i = 0; i < d; ++i) m.at(i, j) = CycNum::from_rational(q, col.coeff(i));
    }
    return m;
}

/// The homomorphism Psi: U(N, Q(zeta_{2^k})) -> O(dN, Q), applied blockwise.
/// Output index (i, j) = (qubit-basis index, zeta-power index); block (i, j)
/// of the result is reg_rep(u_ij).
inline CycMatrix psi(const CycMatrix& u) {
    const int d = u.spec().degree();
    const FieldSpec q = rational_spec();
    CycMatrix r(q, u.rows() * d, u.cols() * d);
    for (int i = 0; i < u.rows(); ++i)
        for (int j = 0; j < u.cols(); ++j) {
            const CycNum& e = u.at(i, j);
            if (e.is_zero()) continue;
            CycMatrix blk = reg_rep(e);
            for (int p = 0; p < d; ++p)
                for (int s = 0; s < d; ++s) r.at(i * d + p, j * d + s) = blk.at(p, s);
        }
    return r;
}

/// Encoding |v(psi)> of a state vector over the field (Eq.-style interleaving:
/// index i*d + j carries coefficient a_{ij} of basis state i, zeta power j).
inline CycVector encode_state(const CycVector& v) {
    const int d = v.spec().degree();
    const FieldSpec q = rational_spec();
    CycVector r(q, v.size() * d);
    for (int i = 0; i < v.size(); ++i)
        for (int j = 0; j < d; ++j) r[i * d + j] = CycNum::from_rational(q, v[i].coeff(j));
    return r;
}

/// True iff every entry of U lies in Z[1/2, zeta_{2^k}].  Combined with an
/// exact unitarity check this decides exact synthesizability over G_{2^k}.
inline bool in_ring_D(const CycMatrix& u) {
    for (int i = 0; i < u.rows(); ++i)
        for (int j = 0; j < u.cols(); ++j)
            if (!in_ring_D(u.at(i, j))) return false;
    return true;
}

}  // namespace cycver
