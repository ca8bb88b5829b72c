#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hopf/qsqrt2.hpp"
#include "hopf/rational.hpp"

namespace hopf {

/// Exponent tuple of a monomial in four variables. The real chart reads the
/// slots as x1..x4, the complex chart as z, zbar, w, wbar.
struct Monomial {
    std::array<int, 4> e{0, 0, 0, 0};

    int degree() const { return e[0] + e[1] + e[2] + e[3]; }

    /// Parity bitmask of the exponents; key structural fact: both the
    /// Laplacian and the sphere moments respect these classes.
    int parity_class() const {
        return (e[0] & 1) | ((e[1] & 1) << 1) | ((e[2] & 1) << 2) | ((e[3] & 1) << 3);
    }

    friend bool operator==(const Monomial& x, const Monomial& y) { return x.e == y.e; }

    // Graded order, x1-dominant monomials first within a degree.
    friend bool operator<(const Monomial& x, const Monomial& y) {
        int dx = x.degree(), dy = y.degree();
        if (dx != dy) return dx < dy;
        return x.e > y.e;
    }
};

inline Monomial operator*(const Monomial& x, const Monomial& y) {
    return Monomial{{x.e[0] + y.e[0], x.e[1] + y.e[1], x.e[2] + y.e[2], x.e[3] + y.e[3]}};
}

/// Sparse polynomial with coefficients in K; no zero coefficients stored.
template <class K>
class Poly {
public:
    using Coeff = K;
    using TermMap = std::map<Monomial, K>;

    Poly() = default;
    explicit Poly(const K& c) {
        if (!c.is_zero()) terms_[Monomial{}] = c;
    }

    static Poly variable(int i, int power = 1) {
        Poly p;
        Monomial m;
        m.e[i] = power;
        p.terms_[m] = K(1);
        return p;
    }

    static Poly monomial(const Monomial& m, const K& c) {
        Poly p;
        if (!c.is_zero()) p.terms_[m] = c;
        return p;
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    int degree() const {  // -1 for the zero polynomial
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        int d = terms_.begin()->first.degree();
        for (const auto& [m, c] : terms_)
            if (m.degree() != d) return false;
        return true;
    }

    K coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? K() : it->second;
    }

    void add_term(const Monomial& m, const K& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Poly operator-() const {
        Poly r;
        for (const auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }

    Poly& operator+=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Poly operator+(Poly x, const Poly& y) { return x += y; }
    friend Poly operator-(Poly x, const Poly& y) { return x -= y; }

    Poly& operator*=(const K& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }
    friend Poly operator*(Poly x, const K& s) { return x *= s; }
    friend Poly operator*(const K& s, Poly x) { return x *= s; }

    friend Poly operator*(const Poly& x, const Poly& y) {
        Poly r;
        for (const auto& [mx, cx] : x.terms_)
            for (const auto& [my, cy] : y.terms_) r.add_term(mx * my, cx * cy);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend bool operator==(const Poly& x, const Poly& y) { return x.terms_ == y.terms_; }
    friend bool operator!=(const Poly& x, const Poly& y) { return !(x == y); }

    Poly pow(int n) const {
        Poly r(K(1));
        for (int i = 0; i < n; ++i) r *= *this;
        return r;
    }

    /// Partial derivative in variable i.
    Poly derivative(int i) const {
        Poly r;
        for (const auto& [m, c] : terms_) {
            if (m.e[i] == 0) continue;
            Monomial n = m;
            n.e[i] -= 1;
            r.add_term(n, c * K(m.e[i]));
        }
        return r;
    }

    /// d^alpha, with the falling-factorial coefficients.
    Poly derivative_multi(const std::array<int, 4>& alpha) const {
        Poly r;
        for (const auto& [m, c] : terms_) {
            long factor = 1;
            Monomial n = m;
            bool vanished = false;
            for (int i = 0; i < 4 && !vanished; ++i) {
                for (int j = 0; j < alpha[i]; ++j) {
                    if (n.e[i] == 0) {
                        vanished = true;
                        break;
                    }
                    factor *= n.e[i];
                    n.e[i] -= 1;
                }
            }
            if (!vanished) r.add_term(n, c * K(factor));
        }
        return r;
    }

    /// Substitutes values[i] for variable i (used by the chart maps).
    template <class K2>
    Poly<K2> substitute(const std::array<Poly<K2>, 4>& values,
                        const std::function<K2(const K&)>& lift) const {
        // Power caches keep repeated exponents cheap.
        std::array<std::vector<Poly<K2>>, 4> powers;
        for (int i = 0; i < 4; ++i) powers[i].push_back(Poly<K2>(K2(1)));
        auto power_of = [&](int i, int n) -> const Poly<K2>& {
            while (static_cast<int>(powers[i].size()) <= n)
                powers[i].push_back(powers[i].back() * values[i]);
            return powers[i][n];
        };
        Poly<K2> out;
        for (const auto& [m, c] : terms_) {
            Poly<K2> term(lift(c));
            for (int i = 0; i < 4; ++i)
                if (m.e[i] > 0) term *= power_of(i, m.e[i]);
            out += term;
        }
        return out;
    }

    double eval(const std::array<double, 4>& x) const {
        double s = 0;
        for (const auto& [m, c] : terms_) {
            double t = c.to_double();
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < m.e[i]; ++j) t *= x[i];
            s += t;
        }
        return s;
    }

private:
    TermMap terms_;
};

using RealPoly = Poly<QSqrt2>;       // chart x1..x4
using CPoly = Poly<GaussQSqrt2>;     // chart z, zbar, w, wbar

// ---------------------------------------------------------------------------
// Sphere ideal S^3(sqrt 2): x1^2 + x2^2 + x3^2 + x4^2 = 2.
// Canonical representatives eliminate x4^2.

inline const RealPoly& sphere_relation_x4sq() {
    // 2 - x1^2 - x2^2 - x3^2
    static const RealPoly rel = [] {
        RealPoly r(QSqrt2(2));
        for (int i = 0; i < 3; ++i) r -= RealPoly::variable(i, 2);
        return r;
    }();
    return rel;
}

/// Canonical remainder of p modulo the sphere ideal: substitutes
/// x4^2 -> 2 - x1^2 - x2^2 - x3^2 until every x4 exponent is 0 or 1.
inline RealPoly reduce_mod_sphere(const RealPoly& p) {
    RealPoly out, work = p;
    while (!work.is_zero()) {
        RealPoly carry;
        for (const auto& [m, c] : work.terms()) {
            if (m.e[3] <= 1) {
                out.add_term(m, c);
            } else {
                Monomial n = m;
                n.e[3] -= 2;
                carry.add_term(n, c);
            }
        }
        if (carry.is_zero()) break;
        work = carry * sphere_relation_x4sq();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Chart translation. Complex chart variables: slot 0 = z, 1 = zbar,
// 2 = w, 3 = wbar with z = x1 + i x2, w = x3 + i x4.

inline GaussQSqrt2 to_gauss(const QSqrt2& v) { return GaussQSqrt2(v); }

inline CPoly complexify(const RealPoly& p) {
    static const std::array<CPoly, 4> images = [] {
        GaussQSqrt2 half(QSqrt2(Rational(1, 2)));
        GaussQSqrt2 minus_half_i = GaussQSqrt2(QSqrt2(), QSqrt2(Rational(-1, 2)));
        std::array<CPoly, 4> im;
        // x1 = (z + zbar)/2
        im[0] = (CPoly::variable(0) + CPoly::variable(1)) * half;
        // x2 = -(i/2)(z - zbar)
        im[1] = (CPoly::variable(0) - CPoly::variable(1)) * minus_half_i;
        // x3 = (w + wbar)/2
        im[2] = (CPoly::variable(2) + CPoly::variable(3)) * half;
        // x4 = -(i/2)(w - wbar)
        im[3] = (CPoly::variable(2) - CPoly::variable(3)) * minus_half_i;
        return im;
    }();
    return p.template substitute<GaussQSqrt2>(
        images, [](const QSqrt2& c) { return GaussQSqrt2(c); });
}

/// Back to the real chart; the result still carries Gauss coefficients
/// (imaginary parts vanish exactly when the value is real).
inline Poly<GaussQSqrt2> realify(const CPoly& p) {
    static const std::array<CPoly, 4> images = [] {
        GaussQSqrt2 i = GaussQSqrt2::i();
        std::array<CPoly, 4> im;
        im[0] = CPoly::variable(0) + CPoly::variable(1) * i;  // z  = x1 + i x2
        im[1] = CPoly::variable(0) - CPoly::variable(1) * i;  // zb = x1 - i x2
        im[2] = CPoly::variable(2) + CPoly::variable(3) * i;  // w  = x3 + i x4
        im[3] = CPoly::variable(2) - CPoly::variable(3) * i;  // wb = x3 - i x4
        return im;
    }();
    return p.template substitute<GaussQSqrt2>(
        images, [](const GaussQSqrt2& c) { return c; });
}

inline RealPoly to_real_poly(const Poly<GaussQSqrt2>& p) {
    RealPoly out;
    for (const auto& [m, c] : p.terms()) {
        if (!c.im().is_zero())
            throw std::domain_error("to_real_poly: nonzero imaginary part at a term");
        out.add_term(m, c.re());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Textual format (real chart): signed sum of coeff*x1^a*x2^b*x3^c*x4^d terms.

inline std::string format_poly(const RealPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : p.terms()) {
        bool mixed = !c.a().is_zero() && !c.b().is_zero();
        std::string cs = c.str();
        bool negative = !mixed && c.sign() < 0;
        if (negative) cs = (-c).str();
        if (out.empty()) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        std::string vars;
        for (int i = 0; i < 4; ++i) {
            if (m.e[i] == 0) continue;
            if (!vars.empty()) vars += "*";
            vars += "x" + std::to_string(i + 1);
            if (m.e[i] > 1) vars += "^" + std::to_string(m.e[i]);
        }
        if (vars.empty()) {
            out += mixed ? "(" + cs + ")" : cs;
        } else if (mixed) {
            out += "(" + cs + ")*" + vars;
        } else if (cs == "1") {
            out += vars;
        } else {
            out += cs + "*" + vars;
        }
    }
    return out;
}

inline RealPoly parse_poly(const std::string& text) {
    RealPoly out;
    // Split into signed terms at top level (not inside parentheses).
    size_t i = 0, n = text.size();
    int sign = 1;
    while (i < n) {
        while (i < n && (text[i] == ' ')) ++i;
        if (i < n && (text[i] == '+' || text[i] == '-')) {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            while (i < n && text[i] == ' ') ++i;
        }
        size_t start = i;
        int depth = 0;
        while (i < n) {
            char ch = text[i];
            if (ch == '(') ++depth;
            if (ch == ')') --depth;
            if (depth == 0 && (ch == '+' || ch == '-')) break;
            ++i;
        }
        std::string term = text.substr(start, i - start);
        while (!term.empty() && term.back() == ' ') term.pop_back();
        if (term.empty()) throw std::domain_error("parse_poly: empty term in '" + text + "'");

        QSqrt2 coeff(1);
        Monomial mono;
        size_t j = 0, tn = term.size();
        while (j < tn) {
            size_t fstart = j;
            if (term[j] == '(') {
                int d = 0;
                do {
                    if (term[j] == '(') ++d;
                    if (term[j] == ')') --d;
                    ++j;
                } while (j < tn && d > 0);
            } else {
                while (j < tn && term[j] != '*') ++j;
                // keep "r/s*sqrt2" together
                if (j + 1 < tn && term.substr(j + 1, 5) == "sqrt2") j += 6;
            }
            std::string factor = term.substr(fstart, j - fstart);
            if (j < tn && term[j] == '*') ++j;
            if (factor.empty()) continue;
            if (factor[0] == 'x') {
                int var = factor[1] - '1';
                if (var < 0 || var > 3) throw std::domain_error("parse_poly: bad variable " + factor);
                int expo = 1;
                if (factor.size() > 2) {
                    if (factor[2] != '^') throw std::domain_error("parse_poly: bad factor " + factor);
                    expo = std::stoi(factor.substr(3));
                }
                mono.e[var] += expo;
            } else if (factor[0] == '(') {
                coeff *= QSqrt2::parse(factor.substr(1, factor.size() - 2));
            } else {
                coeff *= QSqrt2::parse(factor);
            }
        }
        if (sign < 0) coeff = -coeff;
        out.add_term(mono, coeff);
        sign = 1;
    }
    return out;
}

}  // namespace hopf
