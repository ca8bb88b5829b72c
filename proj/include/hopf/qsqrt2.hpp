#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "hopf/rational.hpp"

namespace hopf {

/// Element a + b*sqrt(2) of the real quadratic field Q(sqrt 2).
/// The (a, b) pair is a canonical representation, so equality is
/// componentwise and equal values are bit-identical.
class QSqrt2 {
public:
    QSqrt2() = default;
    QSqrt2(long n) : a_(n) {}
    QSqrt2(const Rational& a) : a_(a) {}
    QSqrt2(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

    static QSqrt2 sqrt2() { return QSqrt2(Rational(0), Rational(1)); }

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }

    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    bool is_rational() const { return b_.is_zero(); }

    /// Exact conversion to Rational; throws when a sqrt(2) part is present.
    Rational rational_part_only() const {
        if (!b_.is_zero()) throw std::domain_error("QSqrt2: value not rational: " + str());
        return a_;
    }

    QSqrt2 conj() const { return QSqrt2(a_, -b_); }

    /// Field norm a^2 - 2 b^2; zero only at zero.
    Rational norm() const { return a_ * a_ - Rational(2) * b_ * b_; }

    QSqrt2 operator-() const { return QSqrt2(-a_, -b_); }
    QSqrt2& operator+=(const QSqrt2& o) { a_ += o.a_; b_ += o.b_; return *this; }
    QSqrt2& operator-=(const QSqrt2& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
    QSqrt2& operator*=(const QSqrt2& o) {
        // (a + b s)(c + d s) = (ac + 2bd) + (ad + bc) s
        Rational na = a_ * o.a_ + Rational(2) * b_ * o.b_;
        Rational nb = a_ * o.b_ + b_ * o.a_;
        a_ = std::move(na);
        b_ = std::move(nb);
        return *this;
    }
    QSqrt2& operator/=(const QSqrt2& o) { return *this *= o.inv(); }

    friend QSqrt2 operator+(QSqrt2 x, const QSqrt2& y) { return x += y; }
    friend QSqrt2 operator-(QSqrt2 x, const QSqrt2& y) { return x -= y; }
    friend QSqrt2 operator*(QSqrt2 x, const QSqrt2& y) { return x *= y; }
    friend QSqrt2 operator/(QSqrt2 x, const QSqrt2& y) { return x /= y; }

    friend bool operator==(const QSqrt2& x, const QSqrt2& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend bool operator!=(const QSqrt2& x, const QSqrt2& y) { return !(x == y); }

    QSqrt2 inv() const {
        if (is_zero()) throw std::domain_error("QSqrt2: division by zero");
        Rational n = norm();
        return QSqrt2(a_ / n, -b_ / n);
    }

    /// Exact sign of the real value a + b*sqrt(2).
    int sign() const {
        int sa = a_.sign(), sb = b_.sign();
        if (sa == 0 && sb == 0) return 0;
        if (sa >= 0 && sb >= 0) return 1;
        if (sa <= 0 && sb <= 0) return -1;
        // Opposite signs: compare a^2 with 2 b^2.
        Rational a2 = a_ * a_, b22 = Rational(2) * b_ * b_;
        if (a2 == b22) return 0;  // impossible for nonzero b (sqrt2 irrational), kept for safety
        bool a_dominates = a2 > b22;
        return a_dominates ? sa : sb;
    }

    friend bool operator<(const QSqrt2& x, const QSqrt2& y) { return (x - y).sign() < 0; }
    friend bool operator>(const QSqrt2& x, const QSqrt2& y) { return (x - y).sign() > 0; }
    friend bool operator<=(const QSqrt2& x, const QSqrt2& y) { return (x - y).sign() <= 0; }
    friend bool operator>=(const QSqrt2& x, const QSqrt2& y) { return (x - y).sign() >= 0; }

    double to_double() const {
        static const double kSqrt2 = std::sqrt(2.0);
        return a_.to_double() + b_.to_double() * kSqrt2;
    }

    /// Square root within the field, when it exists.
    /// (x + y s)^2 = (x^2 + 2 y^2) + 2 x y s.
    std::optional<QSqrt2> sqrt_in_field() const {
        if (sign() < 0) return std::nullopt;
        if (is_zero()) return QSqrt2();
        if (b_.is_zero()) {
            Rational r;
            if (a_.rational_sqrt(&r)) return QSqrt2(r);
            // a = 2 y^2 gives sqrt(a) = y sqrt(2)
            Rational half = a_ / Rational(2), y;
            if (half.rational_sqrt(&y)) return QSqrt2(Rational(0), y);
            return std::nullopt;
        }
        // y^2 = (a +- sqrt(a^2 - 2 b^2)) / 4, x = b / (2 y)
        Rational disc = norm(), root;
        if (disc.sign() < 0 || !disc.rational_sqrt(&root)) return std::nullopt;
        for (int s : {1, -1}) {
            Rational y2 = (a_ + Rational(s) * root) / Rational(4);
            Rational y;
            if (y2.sign() >= 0 && y2.rational_sqrt(&y) && !y.is_zero()) {
                Rational x = b_ / (Rational(2) * y);
                QSqrt2 cand(x, y);
                if (cand.sign() < 0) cand = -cand;
                if (cand * cand == *this) return cand;
            }
        }
        return std::nullopt;
    }

    /// "0", "3/2", "1/4*sqrt2", "3/2-1/4*sqrt2", ...
    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        if (!a_.is_zero()) out += a_.str();
        if (!b_.is_zero()) {
            if (!out.empty() && b_.sign() > 0) out += "+";
            if (b_ == Rational(1)) {
                out += "sqrt2";
            } else if (b_ == Rational(-1)) {
                out += "-sqrt2";
            } else {
                out += b_.str() + "*sqrt2";
            }
        }
        return out;
    }

    /// Inverse of str() for the shapes str() emits (also accepts "sqrt2"
    /// terms appearing first).
    static QSqrt2 parse(const std::string& s) {
        if (s.empty()) throw std::domain_error("QSqrt2: empty literal");
        // Split at the last top-level '+'/'-' that separates two terms.
        for (size_t i = s.size(); i-- > 1;) {
            if ((s[i] == '+' || s[i] == '-') && s[i - 1] != '/' && s[i - 1] != '+' && s[i - 1] != '-') {
                std::string lhs = s.substr(0, i);
                std::string rhs = s.substr(i);
                if (rhs.find("sqrt2") != std::string::npos && lhs.find("sqrt2") == std::string::npos)
                    return QSqrt2(parse_term(lhs).a() + parse_term(rhs).a(),
                                  parse_term(lhs).b() + parse_term(rhs).b());
            }
        }
        return parse_term(s);
    }

private:
    static QSqrt2 parse_term(const std::string& t) {
        auto pos = t.find("sqrt2");
        if (pos == std::string::npos) return QSqrt2(Rational::parse(t));
        std::string coeff = t.substr(0, pos);
        if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
        if (coeff.empty() || coeff == "+") return QSqrt2(Rational(0), Rational(1));
        if (coeff == "-") return QSqrt2(Rational(0), Rational(-1));
        return QSqrt2(Rational(0), Rational::parse(coeff));
    }

    Rational a_, b_;
};

/// Element re + i*im with re, im in Q(sqrt 2): the field Q(i, sqrt 2).
class GaussQSqrt2 {
public:
    GaussQSqrt2() = default;
    GaussQSqrt2(long n) : re_(n) {}
    GaussQSqrt2(const Rational& r) : re_(r) {}
    GaussQSqrt2(const QSqrt2& re) : re_(re) {}
    GaussQSqrt2(QSqrt2 re, QSqrt2 im) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussQSqrt2 i() { return GaussQSqrt2(QSqrt2(), QSqrt2(1)); }

    const QSqrt2& re() const { return re_; }
    const QSqrt2& im() const { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }

    GaussQSqrt2 conj() const { return GaussQSqrt2(re_, -im_); }

    GaussQSqrt2 operator-() const { return GaussQSqrt2(-re_, -im_); }
    GaussQSqrt2& operator+=(const GaussQSqrt2& o) { re_ += o.re_; im_ += o.im_; return *this; }
    GaussQSqrt2& operator-=(const GaussQSqrt2& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
    GaussQSqrt2& operator*=(const GaussQSqrt2& o) {
        QSqrt2 nr = re_ * o.re_ - im_ * o.im_;
        QSqrt2 ni = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(nr);
        im_ = std::move(ni);
        return *this;
    }
    GaussQSqrt2& operator/=(const GaussQSqrt2& o) { return *this *= o.inv(); }

    friend GaussQSqrt2 operator+(GaussQSqrt2 x, const GaussQSqrt2& y) { return x += y; }
    friend GaussQSqrt2 operator-(GaussQSqrt2 x, const GaussQSqrt2& y) { return x -= y; }
    friend GaussQSqrt2 operator*(GaussQSqrt2 x, const GaussQSqrt2& y) { return x *= y; }
    friend GaussQSqrt2 operator/(GaussQSqrt2 x, const GaussQSqrt2& y) { return x /= y; }

    friend bool operator==(const GaussQSqrt2& x, const GaussQSqrt2& y) {
        return x.re_ == y.re_ && x.im_ == y.im_;
    }
    friend bool operator!=(const GaussQSqrt2& x, const GaussQSqrt2& y) { return !(x == y); }

    GaussQSqrt2 inv() const {
        if (is_zero()) throw std::domain_error("GaussQSqrt2: division by zero");
        QSqrt2 n = re_ * re_ + im_ * im_;
        QSqrt2 ninv = n.inv();
        return GaussQSqrt2(re_ * ninv, -im_ * ninv);
    }

    std::string str() const {
        if (is_zero()) return "0";
        if (im_.is_zero()) return re_.str();
        std::string out;
        if (!re_.is_zero()) out += re_.str() + (im_.sign() >= 0 ? "+" : "");
        out += "(" + im_.str() + ")*i";
        return out;
    }

private:
    QSqrt2 re_, im_;
};

}  // namespace hopf
