#pragma once

#include "cycver/matrix.hpp"

#include <Eigen/Dense>
#include <algorithm>

namespace cycver {

/// Exact Gauss-Jordan over the field.  Pivoting is deterministic positional:
/// for each column (left to right) the first nonzero row from the top is
/// taken; no magnitude pivoting, which is meaningless over exact fields.
inline std::pair<CycMatrix, int> rref(const CycMatrix& a) {
    CycMatrix m = a;
    int rank = 0;
    for (int col = 0; col < m.cols() && rank < m.rows(); ++col) {
        int pivot = -1;
        for (int r = rank; r < m.rows(); ++r)
            if (!m.at(r, col).is_zero()) { pivot = r; break; }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int c = 0; c < m.cols(); ++c) std::swap(m.at(pivot, c), m.at(rank, c));
        CycNum inv = m.at(rank, col).inverse();
        for (int c = col; c < m.cols(); ++c) m.at(rank, c) = inv * m.at(rank, c);
        for (int r = 0; r < m.rows(); ++r) {
            if (r == rank || m.at(r, col).is_zero()) continue;
            CycNum f = m.at(r, col);
            for (int c = col; c < m.cols(); ++c) m.at(r, c) -= f * m.at(rank, c);
        }
        ++rank;
    }
    return {m, rank};
}

inline int rank(const CycMatrix& a) { return rref(a).second; }

struct KernelBasis {
    std::vector<CycVector> vectors;
    int corank = 0;
};

/// Exact kernel basis from the reduced row echelon form.  Every returned
/// vector satisfies A v = 0 exactly (asserted before returning).
inline KernelBasis kernel(const CycMatrix& a) {
    auto [m, rk] = rref(a);
    const int n = a.cols();
    std::vector<int> pivot_col_of_row(rk, -1);
    std::vector<bool> is_pivot(n, false);
    for (int r = 0, c = 0; r < rk && c < n; ++c) {
        if (!m.at(r, c).is_zero()) {
            pivot_col_of_row[r] = c;
            is_pivot[c] = true;
            ++r;
        }
    }
    KernelBasis kb;
    kb.corank = n - rk;
    for (int free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        CycVector v(a.spec(), n);
        v[free] = CycNum::one(a.spec());
        for (int r = 0; r < rk; ++r) {
            int pc = pivot_col_of_row[r];
            v[pc] = -m.at(r, free);
        }
        if (!(a * v).is_zero()) throw std::logic_error("kernel: residual not exactly zero");
        kb.vectors.push_back(std::move(v));
    }
    return kb;
}

inline int corank(const CycMatrix& a) { return a.cols() - rank(a); }

inline bool is_hermitian(const CycMatrix& a) {
    return a.is_square() && a == a.conj_transpose();
}

inline bool is_unitary(const CycMatrix& a) {
    if (!a.is_square()) return false;
    return a.conj_transpose() * a == CycMatrix::identity(a.spec(), a.rows());
}

/// Numeric image of an exact matrix.
inline Eigen::MatrixXcd embed(const CycMatrix& a) {
    Eigen::MatrixXcd m(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m(i, j) = a.at(i, j).embed();
    return m;
}

struct SpectralReport {
    double lambda_min = 0.0;  ///< smallest eigenvalue
    double gamma = 0.0;       ///< smallest eigenvalue above tolerance
    double sigma_1 = 0.0;     ///< smallest singular value = min |eigenvalue|
    double lambda_max = 0.0;
    double tolerance = 1e-9;
};

/// Floating eigen-diagnostics of an exactly Hermitian matrix.  Exactness is
/// checked before embedding; results are reported with the tolerance used and
/// never feed exact pass/fail verdicts.
inline SpectralReport spectral_report(const CycMatrix& a, double tolerance = 1e-9) {
    if (!is_hermitian(a)) throw std::invalid_argument("spectral_report: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(embed(a), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    SpectralReport rep;
    rep.tolerance = tolerance;
    rep.lambda_min = ev(0);
    rep.lambda_max = ev(ev.size() - 1);
    rep.sigma_1 = ev.cwiseAbs().minCoeff();
    rep.gamma = rep.lambda_max;
    for (int i = 0; i < ev.size(); ++i)
        if (ev(i) > tolerance) { rep.gamma = ev(i); break; }
    return rep;
}

/// PSD check restricted to the span of `basis`: floating eigenvalues of the
/// projected matrix must clear -tolerance.  Callers pair this with exact
/// kernel verification; the two-sided check is deliberate.
inline bool is_psd_on_subspace(const CycMatrix& a, const std::vector<CycVector>& basis,
                               double tolerance = 1e-9) {
    if (!a.is_square()) throw std::invalid_argument("is_psd_on_subspace: square matrix required");
    const int m = static_cast<int>(basis.size());
    if (m == 0) return true;
    for (const auto& b : basis)
        if (b.size() != a.rows()) throw std::invalid_argument("is_psd_on_subspace: dimension mismatch");
    // Generalized problem <b_i|A|b_j> x = lambda <b_i|b_j> x handles
    // unnormalized basis vectors.
    Eigen::MatrixXcd g(m, m), h(m, m);
    std::vector<CycVector> av;
    av.reserve(m);
    for (const auto& b : basis) av.push_back(a * b);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            h(i, j) = inner(basis[i], av[j]).embed();
            g(i, j) = inner(basis[i], basis[j]).embed();
        }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, g, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tolerance;
}

inline bool is_psd(const CycMatrix& a, double tolerance = 1e-9) {
    if (!is_hermitian(a)) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(embed(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tolerance;
}

// ---------------------------------------------------------------------------
// Pauli decomposition
// ---------------------------------------------------------------------------

/// sigma_00 = I, sigma_01 = X, sigma_10 = Y, sigma_11 = Z; qubit j of an
/// n-qubit string x owns bits (x_{2j-1}, x_{2j}) in the paper's convention,
/// i.e. the two most significant bits of x address the first qubit.
inline CycMatrix pauli_1q(const FieldSpec& spec, int code) {
    CycMatrix m(spec, 2, 2);
    const CycNum one = CycNum::one(spec);
    switch (code) {
        case 0:  // I
            m.at(0, 0) = one; m.at(1, 1) = one; break;
        case 1:  // X
            m.at(0, 1) = one; m.at(1, 0) = one; break;
        case 2: {  // Y
            CycNum i = CycNum::imag_unit(spec);
            m.at(0, 1) = -i; m.at(1, 0) = i; break;
        }
        case 3:  // Z
            m.at(0, 0) = one; m.at(1, 1) = -one; break;
        default: throw std::invalid_argument("pauli_1q: code in 0..3");
    }
    return m;
}

/// Whether the 2n-bit string x needs the Y component (code 2 on some qubit).
inline bool pauli_needs_y(unsigned long x, int n) {
    for (int j = 0; j < n; ++j)
        if (((x >> (2 * (n - 1 - j))) & 3UL) == 2UL) return true;
    return false;
}

/// Tensor-product Pauli P_x as a signed permutation: row r maps to
/// (column, phase).  Used to act on states without materializing P_x.
inline void pauli_action(const FieldSpec& spec, unsigned long x, int n, unsigned long row,
                         unsigned long& col, CycNum& phase) {
    phase = CycNum::one(spec);
    col = 0;
    for (int j = 0; j < n; ++j) {
        int code = static_cast<int>((x >> (2 * (n - 1 - j))) & 3UL);
        int bit = static_cast<int>((row >> (n - 1 - j)) & 1UL);
        int outbit = bit;
        switch (code) {
            case 0: break;
            case 1: outbit = 1 - bit; break;
            case 2:
                outbit = 1 - bit;
                // Y = [[0,-i],[i,0]]: Y|0> = i|1>, Y|1> = -i|0>
                phase *= (bit == 0) ? CycNum::imag_unit(spec) : -CycNum::imag_unit(spec);
                break;
            case 3:
                if (bit == 1) phase = -phase;
                break;
        }
        col = (col << 1) | static_cast<unsigned long>(outbit);
    }
}

inline CycMatrix pauli_string(const FieldSpec& spec, unsigned long x, int n) {
    CycMatrix m(spec, 1, 1);
    m.at(0, 0) = CycNum::one(spec);
    for (int j = 0; j < n; ++j) {
        int code = static_cast<int>((x >> (2 * (n - 1 - j))) & 3UL);
        m = kron(m, pauli_1q(spec, code));
    }
    return m;
}

/// Exact Pauli coefficients a_x = 2^{-n} Tr(P_x U), indexed by the 2n-bit
/// string x.  Requires k >= 2 whenever a Y component is present.
inline std::vector<CycNum> pauli_decompose(const CycMatrix& u) {
    if (!u.is_square()) throw std::invalid_argument("pauli_decompose: square matrix required");
    int n = 0;
    while ((1 << n) < u.rows()) ++n;
    if ((1 << n) != u.rows()) throw std::invalid_argument("pauli_decompose: dimension must be a power of two");
    const unsigned long count = 1UL << (2 * n);
    const FieldSpec& spec = u.spec();
    std::vector<CycNum> a(count, CycNum(spec));
    Rat scale(1, 1 << n);
    for (unsigned long x = 0; x < count; ++x) {
        if (spec.k() < 2 && pauli_needs_y(x, n)) {
            // Tr(P_x U) would need i; only legal if the trace vanishes, which
            // cannot be expressed in Q.  Reject per contract.
            throw std::domain_error("pauli_decompose: Y component requires k >= 2");
        }
        // P_x|m> = ph_m |col_m>, so (P_x)_{r,m} = ph_m [r == col_m] and
        // Tr(P_x U) = sum_m ph_m U_{m, col_m}.
        for (unsigned long m = 0; m < (1UL << n); ++m) {
            unsigned long cm;
            CycNum ph(spec);
            pauli_action(spec, x, n, m, cm, ph);
            const CycNum& ue = u.at(static_cast<int>(m), static_cast<int>(cm));
            if (!ue.is_zero()) a[x] += ph * ue;
        }
        a[x] = scale * a[x];
    }
    return a;
}

/// Reconstruct sum_x a_x P_x exactly.
inline CycMatrix pauli_reconstruct(const FieldSpec& spec, const std::vector<CycNum>& a, int n) {
    const int dim = 1 << n;
    CycMatrix u(spec, dim, dim);
    for (unsigned long x = 0; x < a.size(); ++x) {
        if (a[x].is_zero()) continue;
        for (unsigned long r = 0; r < (1UL << n); ++r) {
            unsigned long c;
            CycNum ph(spec);
            pauli_action(spec, x, n, r, c, ph);
            // P_x|r> = ph|c>  =>  (P_x)_{c,r} = ph
            u.at(static_cast<int>(c), static_cast<int>(r)) += a[x] * ph;
        }
    }
    return u;
}

}  // namespace cycver
