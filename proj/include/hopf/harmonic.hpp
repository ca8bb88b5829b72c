#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hopf/floatlin.hpp"
#include "hopf/matrix.hpp"
#include "hopf/sphere.hpp"

namespace hopf {

/// Laplace eigenvalue of S^3(sqrt 2) on degree-k harmonics.
inline Rational lambda_k(int k) { return Rational(static_cast<long>(k) * (k + 2), 2); }

/// Laplace eigenvalue of S^2(1/sqrt 2).
inline Rational mu_l(int l) { return Rational(2L * l * (l + 1)); }

inline std::vector<Monomial> monomials_of_degree(int k) {
    std::vector<Monomial> out;
    for (int a = 0; a <= k; ++a)
        for (int b = 0; a + b <= k; ++b)
            for (int c = 0; a + b + c <= k; ++c) {
                Monomial m{{a, b, c, k - a - b - c}};
                out.push_back(m);
            }
    std::sort(out.begin(), out.end());
    return out;
}

/// Ordered basis of the degree-k harmonic space H^k with its exact Gram
/// matrix and an exact expansion solver.
///
/// Bases are stored with rational coefficients; the Gram matrix carries the
/// normalization instead (for k = 1, 2 it is a scalar multiple of the
/// identity, so operator matrices agree entry-for-entry with the matrices
/// in the orthonormal scaling).
class HarmonicBasis {
public:
    int k = 0;
    std::vector<RealPoly> basis;
    Matrix<Rational> gram;

    size_t dim() const { return basis.size(); }

    /// Exact coordinates of p in this basis; throws when p is not in the
    /// span (that signals a non-invariant operator upstream).
    std::vector<QSqrt2> expand(const RealPoly& p) const {
        std::vector<Rational> va(mono_index_.size()), vb(mono_index_.size());
        for (const auto& [m, c] : p.terms()) {
            auto it = mono_index_.find(key_of(m));
            if (it == mono_index_.end())
                throw std::domain_error("HarmonicBasis: image has a foreign monomial " +
                                        format_poly(RealPoly::monomial(m, c)));
            va[it->second] = c.a();
            vb[it->second] = c.b();
        }
        size_t n = dim();
        std::vector<QSqrt2> coeff(n);
        std::vector<Rational> pa(n), pb(n);
        for (size_t r = 0; r < n; ++r) {
            pa[r] = va[pivot_rows_[r]];
            pb[r] = vb[pivot_rows_[r]];
        }
        for (size_t i = 0; i < n; ++i) {
            Rational ca, cb;
            for (size_t j = 0; j < n; ++j) {
                if (!pivot_inverse_(i, j).is_zero()) {
                    ca += pivot_inverse_(i, j) * pa[j];
                    cb += pivot_inverse_(i, j) * pb[j];
                }
            }
            coeff[i] = QSqrt2(ca, cb);
        }
        // Residual check over the sparse basis columns.
        std::vector<QSqrt2> resid(mono_index_.size());
        for (size_t r = 0; r < resid.size(); ++r) resid[r] = QSqrt2(va[r], vb[r]);
        for (size_t j = 0; j < n; ++j) {
            if (coeff[j].is_zero()) continue;
            for (const auto& [row, val] : sparse_columns_[j]) resid[row] -= QSqrt2(val) * coeff[j];
        }
        for (const auto& r : resid)
            if (!r.is_zero())
                throw std::domain_error("HarmonicBasis: expansion residual nonzero (k=" +
                                        std::to_string(k) + ")");
        return coeff;
    }

    static HarmonicBasis build(int k);

private:
    static uint64_t key_of(const Monomial& m) {
        uint64_t key = 0;
        for (int i = 0; i < 4; ++i) key |= static_cast<uint64_t>(m.e[i]) << (8 * i);
        return key;
    }

    void finish_build();

    std::map<uint64_t, size_t> mono_index_;
    std::vector<size_t> pivot_rows_;
    Matrix<Rational> pivot_inverse_;
    std::vector<std::vector<std::pair<size_t, Rational>>> sparse_columns_;
};

inline void HarmonicBasis::finish_build() {
    // Index every monomial that appears in some basis element.
    for (const auto& b : basis)
        for (const auto& [m, c] : b.terms())
            mono_index_.try_emplace(key_of(m), 0);
    size_t idx = 0;
    for (auto& [key, val] : mono_index_) val = idx++;

    size_t n = basis.size(), rows = mono_index_.size();
    sparse_columns_.assign(n, {});
    Matrix<Rational> coeff_matrix(rows, n);
    for (size_t j = 0; j < n; ++j) {
        for (const auto& [m, c] : basis[j].terms()) {
            size_t r = mono_index_.at(key_of(m));
            Rational v = c.rational_part_only();
            coeff_matrix(r, j) = v;
            sparse_columns_[j].emplace_back(r, v);
        }
    }
    // Pick n independent rows via elimination on the transpose.
    Matrix<Rational> work = coeff_matrix.transpose();
    std::vector<size_t> pivots = rref(work);
    if (pivots.size() != n)
        throw std::logic_error("HarmonicBasis: basis polynomials are dependent");
    pivot_rows_ = pivots;
    Matrix<Rational> square(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) square(i, j) = coeff_matrix(pivot_rows_[i], j);
    pivot_inverse_ = inverse(square);

    // Gram matrix of normalized inner products.
    gram = Matrix<Rational>(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            Rational v = inner_product(basis[i], basis[j]).rational_part_only();
            gram(i, j) = v;
            gram(j, i) = v;
        }

    // Guards: harmonicity, homogeneity, dimension.
    if (n != static_cast<size_t>((k + 1) * (k + 1)))
        throw std::logic_error("HarmonicBasis: dimension is not (k+1)^2");
    RealDiffOp lap = euclidean_laplacian();
    for (const auto& b : basis) {
        if (!lap.apply(b).is_zero()) throw std::logic_error("HarmonicBasis: element not harmonic");
        if (!b.is_homogeneous() || b.degree() != k)
            throw std::logic_error("HarmonicBasis: element not homogeneous of degree k");
    }
}

inline HarmonicBasis HarmonicBasis::build(int k) {
    if (k < 0) throw std::invalid_argument("HarmonicBasis: negative degree");
    HarmonicBasis hb;
    hb.k = k;
    if (k == 0) {
        hb.basis = {RealPoly(QSqrt2(1))};
    } else if (k == 1) {
        for (int i = 0; i < 4; ++i) hb.basis.push_back(RealPoly::variable(i));
    } else if (k == 2) {
        hb.basis = {
            parse_poly("x1*x2 + x3*x4"),
            parse_poly("x1*x2 - x3*x4"),
            parse_poly("x1*x3 + x2*x4"),
            parse_poly("x1*x3 - x2*x4"),
            parse_poly("x1*x4 + x2*x3"),
            parse_poly("x1*x4 - x2*x3"),
            parse_poly("1/2*x1^2 + 1/2*x2^2 - 1/2*x3^2 - 1/2*x4^2"),
            parse_poly("1/2*x1^2 - 1/2*x2^2 + 1/2*x3^2 - 1/2*x4^2"),
            parse_poly("1/2*x1^2 - 1/2*x2^2 - 1/2*x3^2 + 1/2*x4^2"),
        };
    } else {
        // Kernel of the Laplacian, parity class by parity class: the
        // Laplacian maps each class into itself, so kernel vectors are
        // class-pure and the Gram matrix comes out block diagonal.
        std::vector<Monomial> top = monomials_of_degree(k), low = monomials_of_degree(k - 2);
        for (int cls = 0; cls < 16; ++cls) {
            std::vector<Monomial> cols, rows;
            for (const auto& m : top)
                if (m.parity_class() == cls) cols.push_back(m);
            if (cols.empty()) continue;
            for (const auto& m : low)
                if (m.parity_class() == cls) rows.push_back(m);
            std::map<Monomial, size_t> row_index;
            for (size_t r = 0; r < rows.size(); ++r) row_index[rows[r]] = r;
            Matrix<Rational> lap(rows.size(), cols.size());
            for (size_t j = 0; j < cols.size(); ++j) {
                const Monomial& m = cols[j];
                for (int i = 0; i < 4; ++i) {
                    if (m.e[i] < 2) continue;
                    Monomial n = m;
                    n.e[i] -= 2;
                    lap(row_index.at(n), j) -= Rational(static_cast<long>(m.e[i]) * (m.e[i] - 1));
                }
            }
            for (const auto& v : nullspace(lap)) {
                RealPoly p;
                for (size_t j = 0; j < cols.size(); ++j)
                    if (!v[j].is_zero()) p.add_term(cols[j], QSqrt2(v[j]));
                hb.basis.push_back(std::move(p));
            }
        }
    }
    hb.finish_build();
    return hb;
}

// ---------------------------------------------------------------------------
// Matrices of operators preserving H^k.

struct OperatorOnHk {
    std::string name;
    Matrix<QSqrt2> mat;  // op(b_j) = sum_i mat(i, j) b_i
};

inline Matrix<QSqrt2> operator_matrix(const std::function<RealPoly(const RealPoly&)>& op,
                                      const HarmonicBasis& hb) {
    size_t n = hb.dim();
    Matrix<QSqrt2> m(n, n);
    for (size_t j = 0; j < n; ++j) {
        std::vector<QSqrt2> col = hb.expand(op(hb.basis[j]));
        for (size_t i = 0; i < n; ++i) m(i, j) = col[i];
    }
    return m;
}

inline Matrix<QSqrt2> frame_matrix(int frame_index, const HarmonicBasis& hb) {
    const FrameField& f = frame_field(frame_index);
    return operator_matrix([&f](const RealPoly& p) { return vf_apply(f, p); }, hb);
}

inline Matrix<Rational> to_rational_matrix(const Matrix<QSqrt2>& m) {
    return m.map<Rational>([](const QSqrt2& v) { return v.rational_part_only(); });
}

inline Matrix<QSqrt2> to_qsqrt2_matrix(const Matrix<Rational>& m) {
    return m.map<QSqrt2>([](const Rational& v) { return QSqrt2(v); });
}

/// Matrix of the vertical Laplacian -X1 X1 on H^k (rational entries).
inline Matrix<Rational> vertical_laplacian_matrix(const HarmonicBasis& hb) {
    return to_rational_matrix(operator_matrix(
        [](const RealPoly& p) { return vertical_laplacian_apply(p); }, hb));
}

// ---------------------------------------------------------------------------
// Cached per-degree data shared by the spectral assemblies.

struct DegreeData {
    std::shared_ptr<const HarmonicBasis> basis;
    Matrix<QSqrt2> m1, m2, m3;          // frame derivation matrices
    Matrix<Rational> vertical;          // -m1*m1, exact
};

class OperatorCache {
public:
    const DegreeData& degree(int k) {
        auto it = cache_.find(k);
        if (it != cache_.end()) return it->second;
        DegreeData d;
        d.basis = std::make_shared<HarmonicBasis>(HarmonicBasis::build(k));
        d.m1 = frame_matrix(1, *d.basis);
        d.m2 = frame_matrix(2, *d.basis);
        d.m3 = frame_matrix(3, *d.basis);
        d.vertical = to_rational_matrix(-(d.m1 * d.m1));
        // Frame Casimir guard: -(M1^2 + M2^2 + M3^2) = lambda_k I exactly.
        Matrix<QSqrt2> casimir = -(d.m1 * d.m1 + d.m2 * d.m2 + d.m3 * d.m3);
        if (casimir != Matrix<QSqrt2>::scalar(d.basis->dim(), QSqrt2(lambda_k(k))))
            throw std::logic_error("OperatorCache: frame Casimir is not lambda_k I at k=" +
                                   std::to_string(k));
        return cache_.emplace(k, std::move(d)).first->second;
    }

private:
    std::map<int, DegreeData> cache_;
};

// ---------------------------------------------------------------------------
// Vertical Laplacian spectrum by exact rank counting.

struct RationalEigenvalue {
    Rational value;
    int multiplicity = 0;
};

/// Exact spectrum of Delta^V on H^k: candidate eigenvalues (k-2l)^2/2 are
/// checked by nullity of (Delta^V - c I); the multiplicities must exhaust
/// dim H^k, and a floating cross-solve must not see anything else.
inline std::vector<RationalEigenvalue> vertical_spectrum_bruteforce(int k,
                                                                    OperatorCache& cache) {
    const DegreeData& d = cache.degree(k);
    size_t n = d.basis->dim();
    std::vector<Rational> candidates;
    for (int l = 0; 2 * l <= k; ++l) {
        Rational c(static_cast<long>(k - 2 * l) * (k - 2 * l), 2);
        if (std::find(candidates.begin(), candidates.end(), c) == candidates.end())
            candidates.push_back(c);
    }
    std::sort(candidates.begin(), candidates.end());
    std::vector<RationalEigenvalue> out;
    size_t total = 0;
    for (const Rational& c : candidates) {
        Matrix<Rational> shifted = d.vertical - Matrix<Rational>::scalar(n, c);
        size_t nullity = n - rank(shifted);
        if (nullity > 0) {
            out.push_back({c, static_cast<int>(nullity)});
            total += nullity;
        }
    }
    if (total != n)
        throw std::logic_error("vertical_spectrum_bruteforce: candidates do not exhaust H^k");
    // Floating cross-check that no unexpected eigenvalue exists.
    auto floats = generalized_float_spectrum(to_qsqrt2_matrix(d.vertical), d.basis->gram);
    size_t fi = 0;
    for (const auto& ev : out)
        for (int m = 0; m < ev.multiplicity; ++m, ++fi)
            if (std::fabs(floats[fi] - ev.value.to_double()) > 1e-9)
                throw std::logic_error("vertical_spectrum_bruteforce: float cross-check failed");
    return out;
}

}  // namespace hopf
