#pragma once

#include <array>
#include <map>
#include <string>

#include "hopf/poly.hpp"

namespace hopf {

/// Formal linear differential operator: sum of (coefficient polynomial) *
/// d^alpha terms. Terms with equal derivative multi-index are merged, so
/// equality of normalized operators is structural.
template <class K>
class DiffOp {
public:
    using MultiIndex = std::array<int, 4>;
    using TermMap = std::map<MultiIndex, Poly<K>>;

    DiffOp() = default;

    static DiffOp identity() { return term(Poly<K>(K(1)), {0, 0, 0, 0}); }

    static DiffOp partial(int i, int order = 1) {
        MultiIndex a{0, 0, 0, 0};
        a[i] = order;
        return term(Poly<K>(K(1)), a);
    }

    static DiffOp multiply_by(const Poly<K>& p) { return term(p, {0, 0, 0, 0}); }

    static DiffOp term(const Poly<K>& coeff, const MultiIndex& alpha) {
        DiffOp d;
        if (!coeff.is_zero()) d.terms_[alpha] = coeff;
        return d;
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const MultiIndex& alpha, const Poly<K>& p) {
        if (p.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(alpha, p);
        if (!inserted) {
            it->second += p;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    DiffOp operator-() const {
        DiffOp r;
        for (const auto& [a, p] : terms_) r.terms_[a] = -p;
        return r;
    }
    DiffOp& operator+=(const DiffOp& o) {
        for (const auto& [a, p] : o.terms_) add_term(a, p);
        return *this;
    }
    DiffOp& operator-=(const DiffOp& o) {
        for (const auto& [a, p] : o.terms_) add_term(a, -p);
        return *this;
    }
    friend DiffOp operator+(DiffOp x, const DiffOp& y) { return x += y; }
    friend DiffOp operator-(DiffOp x, const DiffOp& y) { return x -= y; }

    DiffOp& operator*=(const K& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [a, p] : terms_) p *= s;
        return *this;
    }
    friend DiffOp operator*(DiffOp x, const K& s) { return x *= s; }
    friend DiffOp operator*(const K& s, DiffOp x) { return x *= s; }

    friend bool operator==(const DiffOp& x, const DiffOp& y) { return x.terms_ == y.terms_; }
    friend bool operator!=(const DiffOp& x, const DiffOp& y) { return !(x == y); }

    Poly<K> apply(const Poly<K>& p) const {
        Poly<K> r;
        for (const auto& [a, coeff] : terms_) r += coeff * p.derivative_multi(a);
        return r;
    }

    /// Operator composition this o other (apply other first), via Leibniz:
    /// d^a (q f) = sum_{g <= a} C(a, g) d^g(q) d^{a-g} f.
    DiffOp compose(const DiffOp& other) const {
        DiffOp r;
        for (const auto& [a, p] : terms_) {
            for (const auto& [b, q] : other.terms_) {
                MultiIndex g;
                for (g[0] = 0; g[0] <= a[0]; ++g[0])
                    for (g[1] = 0; g[1] <= a[1]; ++g[1])
                        for (g[2] = 0; g[2] <= a[2]; ++g[2])
                            for (g[3] = 0; g[3] <= a[3]; ++g[3]) {
                                Poly<K> dq = q.derivative_multi(g);
                                if (dq.is_zero()) continue;
                                long binom = 1;
                                for (int i = 0; i < 4; ++i) binom *= binom_small(a[i], g[i]);
                                MultiIndex rest{a[0] - g[0] + b[0], a[1] - g[1] + b[1],
                                                a[2] - g[2] + b[2], a[3] - g[3] + b[3]};
                                r.add_term(rest, p * dq * K(binom));
                            }
            }
        }
        return r;
    }

    friend DiffOp commutator(const DiffOp& x, const DiffOp& y) {
        return x.compose(y) - y.compose(x);
    }

private:
    static long binom_small(int n, int k) {
        long r = 1;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    }

    TermMap terms_;
};

using RealDiffOp = DiffOp<QSqrt2>;
using CDiffOp = DiffOp<GaussQSqrt2>;

/// Derivation sum_i coeffs[i] * d_i (a polynomial vector field).
template <class K>
DiffOp<K> derivation(const std::array<Poly<K>, 4>& coeffs) {
    DiffOp<K> d;
    for (int i = 0; i < 4; ++i) {
        std::array<int, 4> a{0, 0, 0, 0};
        a[i] = 1;
        d.add_term(a, coeffs[i]);
    }
    return d;
}

/// Euclidean Laplacian on R^4 in the geometer's sign convention -sum d_i^2.
inline RealDiffOp euclidean_laplacian() {
    RealDiffOp d;
    for (int i = 0; i < 4; ++i) d += RealDiffOp::partial(i, 2);
    return d * QSqrt2(-1);
}

/// Translates a real-chart operator to the complex chart
/// (z = x1 + i x2, w = x3 + i x4).
inline CDiffOp diffop_to_complex(const RealDiffOp& op) {
    // d/dx1 = dz + dzb, d/dx2 = i(dz - dzb), d/dx3 = dw + dwb, d/dx4 = i(dw - dwb)
    static const std::array<CDiffOp, 4> partials = [] {
        GaussQSqrt2 i = GaussQSqrt2::i();
        std::array<CDiffOp, 4> ps;
        ps[0] = CDiffOp::partial(0) + CDiffOp::partial(1);
        ps[1] = (CDiffOp::partial(0) - CDiffOp::partial(1)) * i;
        ps[2] = CDiffOp::partial(2) + CDiffOp::partial(3);
        ps[3] = (CDiffOp::partial(2) - CDiffOp::partial(3)) * i;
        return ps;
    }();
    CDiffOp out;
    for (const auto& [alpha, coeff] : op.terms()) {
        CDiffOp d = CDiffOp::identity();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < alpha[i]; ++j) d = d.compose(partials[i]);
        out += CDiffOp::multiply_by(complexify(coeff)).compose(d);
    }
    return out;
}

}  // namespace hopf
