#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hopf/qsqrt2.hpp"
#include "hopf/rational.hpp"

namespace hopf {

/// Dense matrix over an exact scalar type.
template <class T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    static Matrix scalar(size_t n, const T& v) {
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = v;
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    T& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }
    friend bool operator!=(const Matrix& x, const Matrix& y) { return !(x == y); }

    bool is_zero() const {
        for (const auto& v : a_)
            if (!v.is_zero()) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix operator-() const {
        Matrix r = *this;
        for (auto& v : r.a_) v = -v;
        return r;
    }
    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o);
        for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o);
        for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    friend Matrix operator+(Matrix x, const Matrix& y) { return x += y; }
    friend Matrix operator-(Matrix x, const Matrix& y) { return x -= y; }

    Matrix& operator*=(const T& s) {
        for (auto& v : a_) v = v * s;
        return *this;
    }
    friend Matrix operator*(Matrix x, const T& s) { return x *= s; }
    friend Matrix operator*(const T& s, Matrix x) { return x *= s; }

    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        if (x.cols_ != y.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
        Matrix r(x.rows_, y.cols_);
        for (size_t i = 0; i < x.rows_; ++i)
            for (size_t k = 0; k < x.cols_; ++k) {
                const T& xik = x(i, k);
                if (xik.is_zero()) continue;  // exact matrices here are block sparse
                for (size_t j = 0; j < y.cols_; ++j) {
                    const T& ykj = y(k, j);
                    if (!ykj.is_zero()) r(i, j) += xik * ykj;
                }
            }
        return r;
    }

    std::vector<T> apply(const std::vector<T>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("Matrix: vector size mismatch");
        std::vector<T> r(rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j)
                if (!(*this)(i, j).is_zero()) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    template <class T2, class F>
    Matrix<T2> map(F&& f) const {
        Matrix<T2> r(rows_, cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r(i, j) = f((*this)(i, j));
        return r;
    }

    void set_block(size_t i0, size_t j0, const Matrix& b) {
        for (size_t i = 0; i < b.rows_; ++i)
            for (size_t j = 0; j < b.cols_; ++j) (*this)(i0 + i, j0 + j) = b(i, j);
    }

    Matrix block(size_t i0, size_t j0, size_t r, size_t c) const {
        Matrix b(r, c);
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < c; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
        return b;
    }

    /// Rows/columns selected with signs: out(i,j) = s_i s_j (*this)(p_i, p_j).
    Matrix signed_principal_submatrix(const std::vector<std::pair<size_t, int>>& sel) const {
        Matrix r(sel.size(), sel.size());
        for (size_t i = 0; i < sel.size(); ++i)
            for (size_t j = 0; j < sel.size(); ++j) {
                T v = (*this)(sel[i].first, sel[j].first);
                if (sel[i].second * sel[j].second < 0) v = -v;
                r(i, j) = v;
            }
        return r;
    }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("Matrix: shape mismatch");
    }

    size_t rows_, cols_;
    std::vector<T> a_;
};

// ---------------------------------------------------------------------------
// Field elimination: RREF, rank, nullspace, solve, inverse.

/// In-place reduced row echelon form; returns pivot column indices.
template <class T>
std::vector<size_t> rref(Matrix<T>& m) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        size_t piv = row;
        while (piv < m.rows() && m(piv, col).is_zero()) ++piv;
        if (piv == m.rows()) continue;
        if (piv != row)
            for (size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
        T inv = m(row, col).inv();
        for (size_t j = col; j < m.cols(); ++j) m(row, j) = m(row, j) * inv;
        for (size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col).is_zero()) continue;
            T f = m(i, col);
            for (size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class T>
size_t rank(Matrix<T> m) {
    return rref(m).size();
}

/// Basis of { v : M v = 0 }, one column vector per free column.
template <class T>
std::vector<std::vector<T>> nullspace(Matrix<T> m) {
    size_t n = m.cols();
    std::vector<size_t> pivots = rref(m);
    std::vector<bool> is_pivot(n, false);
    for (size_t c : pivots) is_pivot[c] = true;
    std::vector<std::vector<T>> basis;
    for (size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<T> v(n);
        v[free] = T(1);
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Solves A X = B for square invertible A.
template <class T>
Matrix<T> solve_lin(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != a.cols() || a.rows() != b.rows())
        throw std::invalid_argument("solve_lin: shape mismatch");
    size_t n = a.rows();
    Matrix<T> m(n, n + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, n, b);
    std::vector<size_t> pivots = rref(m);
    if (pivots.size() != n || pivots[n - 1] != n - 1)
        throw std::domain_error("solve_lin: singular matrix");
    return m.block(0, n, n, b.cols());
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
    return solve_lin(a, Matrix<T>::identity(a.rows()));
}

// ---------------------------------------------------------------------------
// Symmetric exact decompositions.

/// G = L D L^T for symmetric positive definite G; L unit lower triangular.
template <class T>
void ldlt(const Matrix<T>& g, Matrix<T>& l, std::vector<T>& d) {
    size_t n = g.rows();
    l = Matrix<T>::identity(n);
    d.assign(n, T());
    Matrix<T> w = g;
    for (size_t k = 0; k < n; ++k) {
        d[k] = w(k, k);
        if (!(d[k] > T())) throw std::domain_error("ldlt: matrix not positive definite");
        T inv = d[k].inv();
        for (size_t i = k + 1; i < n; ++i) l(i, k) = w(i, k) * inv;
        for (size_t i = k + 1; i < n; ++i) {
            if (w(i, k).is_zero()) continue;
            for (size_t j = k + 1; j <= i; ++j) w(i, j) -= l(i, k) * w(j, k);
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) w(i, j) = w(j, i);
    }
}

struct Inertia {
    size_t positive = 0;
    size_t negative = 0;
    size_t zero = 0;
};

/// Exact inertia (n+, n-, n0) of a symmetric matrix over an ordered exact
/// field, by symmetric elimination with hyperbolic 2x2 pivots where the
/// active diagonal vanishes.
template <class T>
Inertia inertia(Matrix<T> s) {
    if (s.rows() != s.cols()) throw std::invalid_argument("inertia: not square");
    size_t n = s.rows();
    std::vector<bool> active(n, true);
    Inertia out;
    size_t remaining = n;
    while (remaining > 0) {
        size_t pivot = n;
        for (size_t i = 0; i < n; ++i)
            if (active[i] && !s(i, i).is_zero()) {
                pivot = i;
                break;
            }
        if (pivot < n) {
            const T piv = s(pivot, pivot);
            (piv.sign() > 0 ? out.positive : out.negative) += 1;
            T inv = piv.inv();
            for (size_t i = 0; i < n; ++i) {
                if (!active[i] || i == pivot || s(i, pivot).is_zero()) continue;
                T f = s(i, pivot) * inv;
                for (size_t j = 0; j < n; ++j) {
                    if (!active[j] || j == pivot) continue;
                    s(i, j) -= f * s(pivot, j);
                }
            }
            active[pivot] = false;
            --remaining;
            continue;
        }
        // Entire active diagonal is zero: look for an off-diagonal entry.
        size_t oi = n, oj = n;
        for (size_t i = 0; i < n && oi == n; ++i) {
            if (!active[i]) continue;
            for (size_t j = i + 1; j < n; ++j)
                if (active[j] && !s(i, j).is_zero()) {
                    oi = i;
                    oj = j;
                    break;
                }
        }
        if (oi == n) {  // active block is identically zero
            out.zero += remaining;
            break;
        }
        // Block [[0, b], [b, 0]] contributes one +1 and one -1.
        out.positive += 1;
        out.negative += 1;
        T binv = s(oi, oj).inv();
        for (size_t i = 0; i < n; ++i) {
            if (!active[i] || i == oi || i == oj) continue;
            T ci = s(i, oi), cj = s(i, oj);
            if (ci.is_zero() && cj.is_zero()) continue;
            for (size_t j = 0; j < n; ++j) {
                if (!active[j] || j == oi || j == oj) continue;
                s(i, j) -= (ci * s(oj, j) + cj * s(oi, j)) * binv;
            }
        }
        active[oi] = active[oj] = false;
        remaining -= 2;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Univariate polynomials over a field, used by the fraction-free
// characteristic polynomial.

template <class T>
class UPoly {
public:
    UPoly() = default;
    explicit UPoly(const T& c) {
        if (!c.is_zero()) c_.push_back(c);
    }

    static UPoly t() { return from_coeffs({T(), T(1)}); }

    static UPoly from_coeffs(std::vector<T> coeffs) {
        UPoly p;
        p.c_ = std::move(coeffs);
        p.trim();
        return p;
    }

    const std::vector<T>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    T coeff(size_t i) const { return i < c_.size() ? c_[i] : T(); }
    const T& leading() const { return c_.back(); }

    UPoly operator-() const {
        UPoly r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }
    UPoly& operator+=(const UPoly& o) {
        if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
        for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    UPoly& operator-=(const UPoly& o) {
        if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
        for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend UPoly operator+(UPoly x, const UPoly& y) { return x += y; }
    friend UPoly operator-(UPoly x, const UPoly& y) { return x -= y; }

    friend UPoly operator*(const UPoly& x, const UPoly& y) {
        if (x.is_zero() || y.is_zero()) return UPoly();
        std::vector<T> r(x.c_.size() + y.c_.size() - 1);
        for (size_t i = 0; i < x.c_.size(); ++i) {
            if (x.c_[i].is_zero()) continue;
            for (size_t j = 0; j < y.c_.size(); ++j) r[i + j] += x.c_[i] * y.c_[j];
        }
        return from_coeffs(std::move(r));
    }
    UPoly& operator*=(const UPoly& o) { return *this = *this * o; }

    friend bool operator==(const UPoly& x, const UPoly& y) { return x.c_ == y.c_; }
    friend bool operator!=(const UPoly& x, const UPoly& y) { return !(x == y); }

    /// Long division; returns quotient, stores remainder.
    UPoly divmod(const UPoly& den, UPoly* rem_out = nullptr) const {
        if (den.is_zero()) throw std::domain_error("UPoly: division by zero polynomial");
        UPoly rem = *this, quot;
        T lead_inv = den.leading().inv();
        while (!rem.is_zero() && rem.degree() >= den.degree()) {
            size_t shift = rem.degree() - den.degree();
            T f = rem.leading() * lead_inv;
            std::vector<T> qterm(shift + 1);
            qterm[shift] = f;
            UPoly q = from_coeffs(std::move(qterm));
            quot += q;
            rem -= q * den;
        }
        if (rem_out) *rem_out = rem;
        return quot;
    }

    /// Exact division; throws when the remainder is nonzero.
    UPoly divide_exact(const UPoly& den) const {
        UPoly rem;
        UPoly q = divmod(den, &rem);
        if (!rem.is_zero()) throw std::domain_error("UPoly: inexact division");
        return q;
    }

    bool divisible_by(const UPoly& den) const {
        UPoly rem;
        divmod(den, &rem);
        return rem.is_zero();
    }

    T eval(const T& x) const {
        T r;
        for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }

    std::string str(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::string out;
        for (size_t i = c_.size(); i-- > 0;) {
            if (c_[i].is_zero()) continue;
            if (!out.empty()) out += " + ";
            out += "(" + c_[i].str() + ")";
            if (i > 0) out += "*" + var + (i > 1 ? "^" + std::to_string(i) : "");
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<T> c_;
};

/// det(t I - A) by Bareiss fraction-free elimination in the polynomial ring;
/// every interior division is exact, so entries stay polynomial.
template <class T>
UPoly<T> charpoly(const Matrix<T>& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("charpoly: not square");
    size_t n = a.rows();
    if (n == 0) return UPoly<T>(T(1));
    Matrix<UPoly<T>> m(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            UPoly<T> v(-a(i, j));
            if (i == j) v += UPoly<T>::t();
            m(i, j) = v;
        }
    int sign = 1;
    UPoly<T> prev(T(1));
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k).is_zero()) {
            size_t r = k + 1;
            while (r < n && m(r, k).is_zero()) ++r;
            if (r == n) throw std::domain_error("charpoly: zero column (non-square-free structure)");
            for (size_t j = 0; j < n; ++j) std::swap(m(k, j), m(r, j));
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)).divide_exact(prev);
        prev = m(k, k);
    }
    UPoly<T> det = m(n - 1, n - 1);
    if (sign < 0) det = -det;
    return det;
}

}  // namespace hopf
