#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace hopf {

/// Exact rational number: always reduced to lowest terms, denominator > 0.
/// Value wrapper over GMP's mpq_class so intermediate results in long
/// eliminations never overflow.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(long num, long den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Rational(const mpz_class& n) : v_(n) {}
    Rational(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    /// Parses "p", "-p", "+p", or "p/q".
    static Rational parse(const std::string& s) {
        std::string t = s;
        if (!t.empty() && t.front() == '+') t.erase(t.begin());
        auto slash = t.find('/');
        try {
            if (slash == std::string::npos) return Rational(mpz_class(t));
            return Rational(mpz_class(t.substr(0, slash)), mpz_class(t.substr(slash + 1)));
        } catch (const std::invalid_argument&) {
            throw std::domain_error("Rational: cannot parse '" + s + "'");
        }
    }

    const mpz_class num() const { return v_.get_num(); }
    const mpz_class den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    Rational abs() const { return sign() < 0 ? -*this : *this; }

    Rational inv() const {
        if (is_zero()) throw std::domain_error("Rational: inverse of zero");
        return Rational(mpq_class(1) / v_);
    }

    double to_double() const { return v_.get_d(); }

    /// True iff the value is the square of a rational; *root gets the
    /// non-negative square root when so.
    bool rational_sqrt(Rational* root = nullptr) const {
        if (sign() < 0) return false;
        mpz_class n = v_.get_num(), d = v_.get_den();
        if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
        if (mpz_perfect_square_p(d.get_mpz_t()) == 0) return false;
        if (root) {
            mpz_class rn, rd;
            mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
            mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
            *root = Rational(rn, rd);
        }
        return true;
    }

    std::string str() const {
        if (v_.get_den() == 1) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

private:
    mpq_class v_;
};

inline Rational factorial(unsigned n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return Rational(r);
}

/// (n)!! with (-1)!! = 0!! = 1.
inline Rational double_factorial(int n) {
    if (n <= 0) return Rational(1);
    mpz_class r;
    mpz_2fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(r);
}

inline Rational binomial(unsigned n, unsigned k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return Rational(r);
}

}  // namespace hopf
