#pragma once

#include <complex>
#include <cstdint>
#include <gmpxx.h>
#include <mpfr.h>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cycver {

using Int = mpz_class;
using Rat = mpq_class;

/// Parameters of the cyclotomic field Q(zeta_n) with n = 2^k.
///
/// The integral basis is {1, zeta, ..., zeta^{d-1}} with degree
/// d = 2^{k-1} (d = 1 for k = 1, where the field is plain Q).
/// Reduction rule: zeta^d = -1.
class FieldSpec {
public:
    explicit FieldSpec(int k) : k_(k) {
        if (k < 1) throw std::invalid_argument("FieldSpec: k must be >= 1");
        if (k > 16) throw std::invalid_argument("FieldSpec: k too large");
        d_ = (k == 1) ? 1 : (1 << (k - 1));
    }

    int k() const { return k_; }
    /// Order of the root of unity, n = 2^k.
    long n() const { return 1L << k_; }
    /// Degree of the field extension over Q.
    int degree() const { return d_; }

    friend bool operator==(const FieldSpec& a, const FieldSpec& b) { return a.k_ == b.k_; }
    friend bool operator!=(const FieldSpec& a, const FieldSpec& b) { return a.k_ != b.k_; }

private:
    int k_;
    int d_;
};

inline void check_same_spec(const FieldSpec& a, const FieldSpec& b, const char* op) {
    if (a != b)
        throw std::invalid_argument(std::string(op) + ": mismatched field (k=" +
                                    std::to_string(a.k()) + " vs k=" + std::to_string(b.k()) + ")");
}

/// Element of Q(zeta_{2^k}), stored as exact rational coordinates over the
/// integral basis.  The representation is unique; all arithmetic is exact.
class CycNum {
public:
    CycNum() : spec_(1), c_(1, Rat(0)) {}

    explicit CycNum(const FieldSpec& spec) : spec_(spec), c_(spec.degree(), Rat(0)) {}

    CycNum(const FieldSpec& spec, std::vector<Rat> coeffs) : spec_(spec), c_(std::move(coeffs)) {
        if (static_cast<int>(c_.size()) != spec.degree())
            throw std::invalid_argument("CycNum: coefficient count must equal the field degree");
        for (auto& q : c_) q.canonicalize();
    }

    static CycNum zero(const FieldSpec& spec) { return CycNum(spec); }

    static CycNum one(const FieldSpec& spec) { return from_rational(spec, Rat(1)); }

    static CycNum from_rational(const FieldSpec& spec, const Rat& q) {
        CycNum a(spec);
        a.c_[0] = q;
        a.c_[0].canonicalize();
        return a;
    }

    static CycNum from_int(const FieldSpec& spec, long v) { return from_rational(spec, Rat(v)); }

    /// zeta^e for any integer exponent, reduced into the basis with signs.
    static CycNum zeta_pow(const FieldSpec& spec, long e) {
        const long n = spec.n();
        const int d = spec.degree();
        long r = e % n;
        if (r < 0) r += n;
        CycNum a(spec);
        if (spec.k() == 1) {
            a.c_[0] = (r == 0) ? 1 : -1;  // zeta_2 = -1
            return a;
        }
        if (r < d)
            a.c_[r] = 1;
        else
            a.c_[r - d] = -1;  // zeta^d = -1
        return a;
    }

    static CycNum zeta(const FieldSpec& spec) { return zeta_pow(spec, 1); }

    /// The imaginary unit i = zeta_{2^k}^{2^{k-2}}; requires k >= 2.
    static CycNum imag_unit(const FieldSpec& spec) {
        if (spec.k() < 2) throw std::domain_error("imag_unit: requires k >= 2 (Q(i) subfield)");
        return zeta_pow(spec, spec.n() / 4);
    }

    /// sqrt(2) = zeta_8 - zeta_8^3; requires k >= 3.
    static CycNum sqrt2(const FieldSpec& spec) {
        if (spec.k() < 3) throw std::domain_error("sqrt2: requires k >= 3 (zeta_8 in field)");
        const long s = spec.n() / 8;
        return zeta_pow(spec, s) - zeta_pow(spec, 3 * s);
    }

    const FieldSpec& spec() const { return spec_; }
    int degree() const { return spec_.degree(); }
    const Rat& coeff(int i) const { return c_.at(i); }
    const std::vector<Rat>& coeffs() const { return c_; }

    bool is_zero() const {
        for (const auto& q : c_)
            if (q != 0) return false;
        return true;
    }

    bool is_rational() const {
        for (size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }

    /// Rational value; throws unless the element lies in Q.
    Rat rational_value() const {
        if (!is_rational()) throw std::domain_error("rational_value: element not in Q");
        return c_[0];
    }

    friend CycNum operator+(const CycNum& a, const CycNum& b) {
        check_same_spec(a.spec_, b.spec_, "CycNum +");
        CycNum r(a.spec_);
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
        return r;
    }

    friend CycNum operator-(const CycNum& a, const CycNum& b) {
        check_same_spec(a.spec_, b.spec_, "CycNum -");
        CycNum r(a.spec_);
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
        return r;
    }

    CycNum operator-() const {
        CycNum r(spec_);
        for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = -c_[i];
        return r;
    }

    /// Product with reduction zeta^{i+j} -> -zeta^{i+j-d} for i+j >= d.
    friend CycNum operator*(const CycNum& a, const CycNum& b) {
        check_same_spec(a.spec_, b.spec_, "CycNum *");
        const int d = a.degree();
        CycNum r(a.spec_);
        for (int i = 0; i < d; ++i) {
            if (a.c_[i] == 0) continue;
            for (int j = 0; j < d; ++j) {
                if (b.c_[j] == 0) continue;
                Rat p = a.c_[i] * b.c_[j];
                if (i + j < d)
                    r.c_[i + j] += p;
                else
                    r.c_[i + j - d] -= p;
            }
        }
        return r;
    }

    CycNum& operator+=(const CycNum& b) { return *this = *this + b; }
    CycNum& operator-=(const CycNum& b) { return *this = *this - b; }
    CycNum& operator*=(const CycNum& b) { return *this = *this * b; }

    friend CycNum operator*(const Rat& q, const CycNum& a) {
        CycNum r(a.spec_);
        for (size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = q * a.c_[i];
        return r;
    }

    friend bool operator==(const CycNum& a, const CycNum& b) {
        return a.spec_ == b.spec_ && a.c_ == b.c_;
    }
    friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

    /// Complex conjugate via the basis table conj(zeta^i) = -zeta^{d-i} for i > 0.
    CycNum conj() const {
        const int d = degree();
        CycNum r(spec_);
        r.c_[0] = c_[0];
        if (spec_.k() == 1) return r;
        for (int i = 1; i < d; ++i) r.c_[d - i] = -c_[i];
        return r;
    }

    bool is_real() const { return *this == conj(); }

    /// Multiplicative inverse, solved from the regular representation.
    /// Throws on zero.
    CycNum inverse() const {
        if (is_zero()) throw std::domain_error("CycNum::inverse: division by zero");
        const int d = degree();
        // Columns of M_a are v(a * zeta^j); solve M_a x = e_0.
        std::vector<std::vector<Rat>> m(d, std::vector<Rat>(d + 1, Rat(0)));
        for (int j = 0; j < d; ++j) {
            CycNum col = *this * zeta_pow(spec_, j);
            for (int i = 0; i < d; ++i) m[i][j] = col.c_[i];
        }
        m[0][d] = 1;
        for (int col = 0, row = 0; col < d && row < d; ++col) {
            int p = -1;
            for (int r = row; r < d; ++r)
                if (m[r][col] != 0) { p = r; break; }
            if (p < 0) continue;
            std::swap(m[p], m[row]);
            Rat inv = 1 / m[row][col];
            for (int c = col; c <= d; ++c) m[row][c] *= inv;
            for (int r = 0; r < d; ++r) {
                if (r == row || m[r][col] == 0) continue;
                Rat f = m[r][col];
                for (int c = col; c <= d; ++c) m[r][c] -= f * m[row][c];
            }
            ++row;
        }
        std::vector<Rat> x(d);
        for (int i = 0; i < d; ++i) x[i] = m[i][d];
        CycNum r(spec_, std::move(x));
        return r;
    }

    friend CycNum operator/(const CycNum& a, const CycNum& b) { return a * b.inverse(); }

    /// |a|^2 = a * conj(a); always in the real subfield.
    CycNum abs_sq() const { return *this * conj(); }

    /// Numeric evaluation sum_i a_i e^{2*pi*i*j/n}.  Approximate; never used
    /// in exact pass/fail decisions.
    std::complex<double> embed() const {
        const double n = static_cast<double>(spec_.n());
        std::complex<double> z(0.0, 0.0);
        for (size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            double ang = 2.0 * 3.14159265358979323846 * static_cast<double>(j) / n;
            z += c_[j].get_d() * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        return z;
    }

    std::string str() const {
        std::ostringstream os;
        os << '[';
        for (size_t i = 0; i < c_.size(); ++i) {
            if (i) os << ", ";
            os << c_[i].get_str();
        }
        os << ']';
        return os.str();
    }

private:
    FieldSpec spec_;
    std::vector<Rat> c_;
};

/// True iff every coefficient denominator is a power of two, i.e. the value
/// lies in Z[1/2, zeta_{2^k}].
inline bool in_ring_D(const CycNum& a) {
    for (int i = 0; i < a.degree(); ++i) {
        Int den = a.coeff(i).get_den();
        // den is a power of two iff its odd part is 1
        while (mpz_even_p(den.get_mpz_t())) den >>= 1;
        if (den != 1) return false;
    }
    return true;
}

/// Myerson-style lower bound (sum |a_i|)^{-n} on |a| for a nonzero integer
/// combination of zeta_n powers.  Pre: integer coefficients, not all zero.
inline Rat small_sum_bound(const CycNum& a) {
    if (a.is_zero()) throw std::domain_error("small_sum_bound: undefined for zero");
    Int s = 0;
    for (int i = 0; i < a.degree(); ++i) {
        const Rat& q = a.coeff(i);
        if (q.get_den() != 1)
            throw std::domain_error("small_sum_bound: requires integer coefficients");
        s += abs(q.get_num());
    }
    Rat bound(1);
    for (long e = 0; e < a.spec().n(); ++e) bound /= Rat(s);
    return bound;
}

namespace detail {

/// Certified sign of a nonzero real cyclotomic value with integer
/// coefficients.  MPFR precision is raised until the enclosure excludes
/// zero; the small-sum lower bound guarantees termination.
inline int sign_real_integer(const FieldSpec& spec, const std::vector<Int>& y) {
    Int abssum = 0;
    for (const auto& v : y) abssum += abs(v);
    if (abssum == 0) return 0;
    const long n = spec.n();
    for (mpfr_prec_t prec = 128;; prec *= 2) {
        mpfr_t pi, ang, c, term, acc, err;
        mpfr_inits2(prec, pi, ang, c, term, acc, err, static_cast<mpfr_ptr>(nullptr));
        mpfr_const_pi(pi, MPFR_RNDN);
        mpfr_set_zero(acc, 1);
        for (size_t j = 0; j < y.size(); ++j) {
            if (y[j] == 0) continue;
            mpfr_mul_si(ang, pi, 2 * static_cast<long>(j), MPFR_RNDN);
            mpfr_div_si(ang, ang, n, MPFR_RNDN);
            mpfr_cos(c, ang, MPFR_RNDN);
            mpfr_mul_z(term, c, y[j].get_mpz_t(), MPFR_RNDN);
            mpfr_add(acc, acc, term, MPFR_RNDN);
        }
        // Coarse rounding-error envelope: |y|_1 * 2^(6-prec).
        mpfr_set_z(err, abssum.get_mpz_t(), MPFR_RNDU);
        mpfr_mul_2si(err, err, 6 - static_cast<long>(prec), MPFR_RNDU);
        mpfr_t absacc;
        mpfr_init2(absacc, prec);
        mpfr_abs(absacc, acc, MPFR_RNDN);
        bool decided = mpfr_cmp(absacc, err) > 0;
        int s = mpfr_sgn(acc);
        mpfr_clears(pi, ang, c, term, acc, err, static_cast<mpfr_ptr>(nullptr));
        mpfr_clear(absacc);
        if (decided) return s > 0 ? 1 : -1;
        if (prec > 1 << 20) throw std::runtime_error("sign_real: precision limit exceeded");
    }
}

}  // namespace detail

/// Exact sign (-1, 0, +1) of a real cyclotomic value.
/// Throws if the value is not fixed by conjugation.
inline int sign_real(const CycNum& a) {
    if (a.is_zero()) return 0;
    if (!a.is_real()) throw std::domain_error("sign_real: value is not real");
    if (a.is_rational()) return sgn(a.rational_value());
    // Clear denominators; the sign is unchanged.
    Int den = 1;
    for (int i = 0; i < a.degree(); ++i)
        den = lcm(den, a.coeff(i).get_den());
    std::vector<Int> y(a.degree());
    for (int i = 0; i < a.degree(); ++i) {
        Rat q = a.coeff(i) * Rat(den);
        q.canonicalize();
        y[i] = q.get_num();
    }
    return detail::sign_real_integer(a.spec(), y);
}

/// a < b, a <= b for real cyclotomic values (exact).
inline bool less_real(const CycNum& a, const CycNum& b) { return sign_real(a - b) < 0; }
inline bool leq_real(const CycNum& a, const CycNum& b) { return sign_real(a - b) <= 0; }

}  // namespace cycver
