#pragma once

#include "cycver/field.hpp"

#include <functional>
#include <initializer_list>

namespace cycver {

class CycMatrix;

/// Dense exact vector over CycNum.
class CycVector {
public:
    CycVector() : spec_(1) {}
    CycVector(const FieldSpec& spec, int size) : spec_(spec), e_(size, CycNum(spec)) {}
    CycVector(const FieldSpec& spec, std::vector<CycNum> entries)
        : spec_(spec), e_(std::move(entries)) {
        for (const auto& x : e_) check_same_spec(spec_, x.spec(), "CycVector");
    }

    const FieldSpec& spec() const { return spec_; }
    int size() const { return static_cast<int>(e_.size()); }
    CycNum& operator[](int i) { return e_.at(i); }
    const CycNum& operator[](int i) const { return e_.at(i); }

    bool is_zero() const {
        for (const auto& x : e_)
            if (!x.is_zero()) return false;
        return true;
    }

    friend CycVector operator+(const CycVector& a, const CycVector& b) {
        check_same_spec(a.spec_, b.spec_, "CycVector +");
        if (a.size() != b.size()) throw std::invalid_argument("CycVector +: size mismatch");
        CycVector r(a.spec_, a.size());
        for (int i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
        return r;
    }

    friend CycVector operator-(const CycVector& a, const CycVector& b) {
        check_same_spec(a.spec_, b.spec_, "CycVector -");
        if (a.size() != b.size()) throw std::invalid_argument("CycVector -: size mismatch");
        CycVector r(a.spec_, a.size());
        for (int i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
        return r;
    }

    friend CycVector operator*(const CycNum& s, const CycVector& v) {
        CycVector r(v.spec_, v.size());
        for (int i = 0; i < v.size(); ++i) r[i] = s * v[i];
        return r;
    }

    friend bool operator==(const CycVector& a, const CycVector& b) {
        return a.spec_ == b.spec_ && a.e_ == b.e_;
    }

    /// <a|b> = sum conj(a_i) b_i.
    friend CycNum inner(const CycVector& a, const CycVector& b) {
        check_same_spec(a.spec_, b.spec_, "inner");
        if (a.size() != b.size()) throw std::invalid_argument("inner: size mismatch");
        CycNum s(a.spec_);
        for (int i = 0; i < a.size(); ++i) s += a[i].conj() * b[i];
        return s;
    }

    /// Exact squared norm (real subfield element).
    CycNum norm_sq() const { return inner(*this, *this); }

private:
    FieldSpec spec_;
    std::vector<CycNum> e_;
};

/// Dense exact matrix over CycNum, row-major.
class CycMatrix {
public:
    CycMatrix() : spec_(1), rows_(0), cols_(0) {}

    CycMatrix(const FieldSpec& spec, int rows, int cols)
        : spec_(spec), rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols, CycNum(spec)) {
        if (rows <= 0 || cols <= 0) throw std::invalid_argument("CycMatrix: dimensions must be positive");
    }

    static CycMatrix identity(const FieldSpec& spec, int n) {
        CycMatrix m(spec, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = CycNum::one(spec);
        return m;
    }

    static CycMatrix zero(const FieldSpec& spec, int rows, int cols) { return CycMatrix(spec, rows, cols); }

    /// Build from rationals, row-major.
    static CycMatrix from_rational(const FieldSpec& spec, int rows, int cols,
                                   std::initializer_list<Rat> vals) {
        CycMatrix m(spec, rows, cols);
        if (static_cast<int>(vals.size()) != rows * cols)
            throw std::invalid_argument("from_rational: wrong entry count");
        int i = 0;
        for (const Rat& v : vals) m.e_[i++] = CycNum::from_rational(spec, v);
        return m;
    }

    const FieldSpec& spec() const { return spec_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    CycNum& at(int r, int c) {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("CycMatrix::at");
        return e_[static_cast<size_t>(r) * cols_ + c];
    }
    const CycNum& at(int r, int c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("CycMatrix::at");
        return e_[static_cast<size_t>(r) * cols_ + c];
    }

    bool is_square() const { return rows_ == cols_; }

    friend CycMatrix operator+(const CycMatrix& a, const CycMatrix& b) {
        check_same_spec(a.spec_, b.spec_, "CycMatrix +");
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("CycMatrix +: shape mismatch");
        CycMatrix r(a.spec_, a.rows_, a.cols_);
        for (size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = a.e_[i] + b.e_[i];
        return r;
    }

    friend CycMatrix operator-(const CycMatrix& a, const CycMatrix& b) {
        check_same_spec(a.spec_, b.spec_, "CycMatrix -");
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("CycMatrix -: shape mismatch");
        CycMatrix r(a.spec_, a.rows_, a.cols_);
        for (size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = a.e_[i] - b.e_[i];
        return r;
    }

    friend CycMatrix operator*(const CycNum& s, const CycMatrix& a) {
        CycMatrix r(a.spec_, a.rows_, a.cols_);
        for (size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = s * a.e_[i];
        return r;
    }

    friend CycMatrix operator*(const Rat& s, const CycMatrix& a) {
        return CycNum::from_rational(a.spec_, s) * a;
    }

    friend CycMatrix operator*(const CycMatrix& a, const CycMatrix& b) {
        check_same_spec(a.spec_, b.spec_, "CycMatrix *");
        if (a.cols_ != b.rows_) throw std::invalid_argument("CycMatrix *: inner dimension mismatch");
        CycMatrix r(a.spec_, a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const CycNum& aik = a.at(i, k);
                if (aik.is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j) {
                    const CycNum& bkj = b.at(k, j);
                    if (bkj.is_zero()) continue;
                    r.at(i, j) += aik * bkj;
                }
            }
        return r;
    }

    friend CycVector operator*(const CycMatrix& a, const CycVector& v) {
        check_same_spec(a.spec_, v.spec(), "CycMatrix * CycVector");
        if (a.cols_ != v.size()) throw std::invalid_argument("CycMatrix * CycVector: size mismatch");
        CycVector r(a.spec_, a.rows_);
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) {
                if (a.at(i, j).is_zero() || v[j].is_zero()) continue;
                r[i] += a.at(i, j) * v[j];
            }
        return r;
    }

    friend bool operator==(const CycMatrix& a, const CycMatrix& b) {
        return a.spec_ == b.spec_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }
    friend bool operator!=(const CycMatrix& a, const CycMatrix& b) { return !(a == b); }

    CycMatrix transpose() const {
        CycMatrix r(spec_, cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    CycMatrix conj_transpose() const {
        CycMatrix r(spec_, cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j).conj();
        return r;
    }

    friend CycMatrix kron(const CycMatrix& a, const CycMatrix& b) {
        check_same_spec(a.spec_, b.spec_, "kron");
        CycMatrix r(a.spec_, a.rows_ * b.rows_, a.cols_ * b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) {
                if (a.at(i, j).is_zero()) continue;
                for (int p = 0; p < b.rows_; ++p)
                    for (int q = 0; q < b.cols_; ++q) {
                        if (b.at(p, q).is_zero()) continue;
                        r.at(i * b.rows_ + p, j * b.cols_ + q) = a.at(i, j) * b.at(p, q);
                    }
            }
        return r;
    }

    CycVector col(int j) const {
        CycVector v(spec_, rows_);
        for (int i = 0; i < rows_; ++i) v[i] = at(i, j);
        return v;
    }

    CycVector row(int i) const {
        CycVector v(spec_, cols_);
        for (int j = 0; j < cols_; ++j) v[j] = at(i, j);
        return v;
    }

    /// Frobenius norm squared, exact (real subfield element).
    CycNum frobenius_sq() const {
        CycNum s(spec_);
        for (const auto& x : e_) s += x.abs_sq();
        return s;
    }

    CycNum trace() const {
        if (!is_square()) throw std::invalid_argument("trace: square matrix required");
        CycNum s(spec_);
        for (int i = 0; i < rows_; ++i) s += at(i, i);
        return s;
    }

    bool is_zero() const {
        for (const auto& x : e_)
            if (!x.is_zero()) return false;
        return true;
    }

private:
    FieldSpec spec_;
    int rows_, cols_;
    std::vector<CycNum> e_;
};

/// Outer product |a><b|.
inline CycMatrix outer(const CycVector& a, const CycVector& b) {
    check_same_spec(a.spec(), b.spec(), "outer");
    CycMatrix m(a.spec(), a.size(), b.size());
    for (int i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (int j = 0; j < b.size(); ++j) m.at(i, j) = a[i] * b[j].conj();
    }
    return m;
}

}  // namespace cycver
