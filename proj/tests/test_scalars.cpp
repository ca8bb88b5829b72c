#include <doctest.h>

#include <cmath>

#include "hopf/qsqrt2.hpp"
#include "hopf/rational.hpp"
#include "test_rng.hpp"

using hopf::GaussQSqrt2;
using hopf::QSqrt2;
using hopf::Rational;

namespace {
const QSqrt2 kSqrt2 = QSqrt2::sqrt2();
}

TEST_CASE("rational basics") {
    CHECK(Rational(6, 4) == Rational(3, 2));
    CHECK(Rational(6, -4) == Rational(-3, 2));
    CHECK(Rational(-3, 2).str() == "-3/2");
    CHECK(Rational::parse("-39/4") == Rational(-39, 4));
    CHECK(Rational::parse("7") == Rational(7));
    CHECK_THROWS(Rational(1, 0));
    CHECK_THROWS(Rational(1, 2) / Rational(0));
    CHECK(Rational(-15, 4).to_double() == -3.75);

    Rational root;
    CHECK(Rational(49, 36).rational_sqrt(&root));
    CHECK(root == Rational(7, 6));
    CHECK_FALSE(Rational(2).rational_sqrt());
}

TEST_CASE("sqrt2 times sqrt2 is 2") {
    CHECK(kSqrt2 * kSqrt2 == QSqrt2(2));
}

TEST_CASE("conjugate product is the field norm") {
    QSqrt2 x(Rational(1), Rational(1));  // 1 + sqrt2
    CHECK(x * x.conj() == QSqrt2(-1));
}

TEST_CASE("division by sqrt2") {
    // (3/2) / sqrt2 = (3/4) sqrt2; checked by multiplying back.
    QSqrt2 q = QSqrt2(Rational(3, 2)) / kSqrt2;
    CHECK(q == QSqrt2(Rational(0), Rational(3, 4)));
    CHECK(q * kSqrt2 == QSqrt2(Rational(3, 2)));
}

TEST_CASE("division by zero is an error") {
    CHECK_THROWS(QSqrt2(1) / QSqrt2());
    CHECK_THROWS(GaussQSqrt2(1) / GaussQSqrt2());
}

TEST_CASE("to_float reference values") {
    CHECK(kSqrt2.to_double() == doctest::Approx(1.4142135623730951).epsilon(1e-15));
    CHECK(QSqrt2(Rational(-15, 4)).to_double() == -3.75);
}

TEST_CASE("field axioms on random triples") {
    hopf_test::Rng rng(0xabc123);
    for (int trial = 0; trial < 200; ++trial) {
        QSqrt2 x = rng.qsqrt2(), y = rng.qsqrt2(), z = rng.qsqrt2();
        CHECK((x + y) + z == x + (y + z));
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * (y + z) == x * y + x * z);
        if (!x.is_zero()) CHECK(x * x.inv() == QSqrt2(1));
    }
}

TEST_CASE("gauss field axioms and involution") {
    hopf_test::Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        GaussQSqrt2 x = rng.gauss(), y = rng.gauss(), z = rng.gauss();
        CHECK(x * (y + z) == x * y + x * z);
        CHECK((x * y).conj() == x.conj() * y.conj());
        CHECK(x.conj().conj() == x);
        if (!x.is_zero()) CHECK(x * x.inv() == GaussQSqrt2(1));
    }
    CHECK(GaussQSqrt2::i() * GaussQSqrt2::i() == GaussQSqrt2(-1));
}

TEST_CASE("canonical form: equal values compare equal componentwise") {
    QSqrt2 x = (QSqrt2(Rational(1, 3)) + kSqrt2) * QSqrt2(6);
    CHECK(x.a() == Rational(2));
    CHECK(x.b() == Rational(6));
}

TEST_CASE("to_float is multiplicative within 1e-12 relative") {
    hopf_test::Rng rng(1234);
    for (int trial = 0; trial < 300; ++trial) {
        QSqrt2 x = rng.qsqrt2(999, 50), y = rng.qsqrt2(999, 50);
        double lhs = (x * y).to_double();
        double rhs = x.to_double() * y.to_double();
        double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
        CHECK(std::fabs(lhs - rhs) / scale <= 1e-12);
    }
}

TEST_CASE("exact sign and ordering") {
    CHECK(QSqrt2(Rational(3), Rational(-2)).sign() == 1);    // 3 - 2 sqrt2 > 0
    CHECK(QSqrt2(Rational(-3), Rational(2)).sign() == -1);   // 2 sqrt2 < 3
    CHECK(QSqrt2(Rational(-3), Rational(2)) < QSqrt2(Rational(3), Rational(-2)));
    CHECK(QSqrt2(Rational(1), Rational(-1)).sign() < 0);     // 1 - sqrt2 < 0
    CHECK(QSqrt2().sign() == 0);
    // Boundary values from the positivity bounds.
    CHECK(QSqrt2(Rational(3584), Rational(-2400)).sign() == 1);
    CHECK(QSqrt2(Rational(23), Rational(-14)).sign() == 1);
}

TEST_CASE("sqrt within the field") {
    auto r = QSqrt2(8).sqrt_in_field();
    REQUIRE(r.has_value());
    CHECK(*r == QSqrt2(Rational(0), Rational(2)));  // sqrt(8) = 2 sqrt2

    auto s = (QSqrt2(Rational(3), Rational(2)) * QSqrt2(Rational(3), Rational(2))).sqrt_in_field();
    REQUIRE(s.has_value());
    CHECK(*s == QSqrt2(Rational(3), Rational(2)));

    // 768 = (16 sqrt3)^2 has no square root in Q(sqrt2): the k=2 bienergy
    // eigenvalues 24 +- 16 sqrt3 live outside the coefficient field.
    CHECK_FALSE(QSqrt2(768).sqrt_in_field().has_value());
    CHECK_FALSE(QSqrt2(40).sqrt_in_field().has_value());  // (2 sqrt10)^2
}

TEST_CASE("string round trips") {
    hopf_test::Rng rng(5150);
    for (int trial = 0; trial < 100; ++trial) {
        QSqrt2 x = rng.qsqrt2();
        CHECK(QSqrt2::parse(x.str()) == x);
    }
    CHECK(QSqrt2::parse("-3/2") == QSqrt2(Rational(-3, 2)));
    CHECK(QSqrt2::parse("sqrt2") == kSqrt2);
    CHECK(QSqrt2::parse("1/2-3*sqrt2") == QSqrt2(Rational(1, 2), Rational(-3)));
}
