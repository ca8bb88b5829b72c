#include <doctest.h>

#include "hopf/diffop.hpp"
#include "hopf/poly.hpp"
#include "test_rng.hpp"

using namespace hopf;

namespace {

const GaussQSqrt2 kI = GaussQSqrt2::i();

CDiffOp op_e() {  // i(wb d_z - zb d_w)
    return CDiffOp::term(CPoly::variable(3) * kI, {1, 0, 0, 0}) +
           CDiffOp::term(CPoly::variable(1) * (-kI), {0, 0, 1, 0});
}
CDiffOp op_f() {  // i(w d_zb - z d_wb)
    return CDiffOp::term(CPoly::variable(2) * kI, {0, 1, 0, 0}) +
           CDiffOp::term(CPoly::variable(0) * (-kI), {0, 0, 0, 1});
}
CDiffOp op_h() {  // zb d_zb - z d_z + wb d_wb - w d_w
    return CDiffOp::term(CPoly::variable(1), {0, 1, 0, 0}) -
           CDiffOp::term(CPoly::variable(0), {1, 0, 0, 0}) +
           CDiffOp::term(CPoly::variable(3), {0, 0, 0, 1}) -
           CDiffOp::term(CPoly::variable(2), {0, 0, 1, 0});
}
CDiffOp op_delta_c() {  // -4 (d_z d_zb + d_w d_wb)
    return (CDiffOp::term(CPoly(GaussQSqrt2(1)), {1, 1, 0, 0}) +
            CDiffOp::term(CPoly(GaussQSqrt2(1)), {0, 0, 1, 1})) *
           GaussQSqrt2(-4);
}

RealPoly sum_of_squares() {
    RealPoly s;
    for (int i = 0; i < 4; ++i) s += RealPoly::variable(i, 2);
    return s;
}

}  // namespace

TEST_CASE("monomial products and degrees") {
    RealPoly x1 = RealPoly::variable(0);
    CHECK(x1 * x1 == RealPoly::variable(0, 2));
    RealPoly p = parse_poly("x1*x2 + x3*x4");
    CHECK(p * RealPoly(QSqrt2(1)) == p);
    CHECK(p.degree() == 2);
    CHECK(p.is_homogeneous());
    CHECK_FALSE((p + x1).is_homogeneous());
}

TEST_CASE("euclidean laplacian on reference inputs") {
    RealDiffOp lap = euclidean_laplacian();
    CHECK(lap.apply(parse_poly("x1*x2")).is_zero());
    CHECK(lap.apply(sum_of_squares()) == RealPoly(QSqrt2(-8)));
}

TEST_CASE("canonical commutation relation") {
    RealDiffOp d1 = RealDiffOp::partial(0);
    RealDiffOp mul_x1 = RealDiffOp::multiply_by(RealPoly::variable(0));
    CHECK(commutator(d1, mul_x1) == RealDiffOp::identity());
}

TEST_CASE("sl2 brackets as exact operator identities") {
    CDiffOp e = op_e(), f = op_f(), h = op_h(), lap = op_delta_c();
    CHECK(commutator(e, f) == h);
    CHECK(commutator(h, e) == e * GaussQSqrt2(2));
    CHECK(commutator(h, f) == f * GaussQSqrt2(-2));
    CHECK(commutator(lap, h).is_zero());
    CHECK(commutator(lap, e).is_zero());
    CHECK(commutator(lap, f).is_zero());
}

TEST_CASE("h scales highest weight monomials by the degree") {
    for (auto [k, n] : {std::pair{3, 1}, std::pair{5, 0}, std::pair{4, 4}}) {
        CPoly fn;
        Monomial m;
        m.e[1] = n;
        m.e[3] = k - n;
        fn.add_term(m, GaussQSqrt2(1));
        CHECK(op_h().apply(fn) == fn * GaussQSqrt2(k));
        CHECK(op_delta_c().apply(fn).is_zero());
        CHECK(op_e().apply(fn).is_zero());
    }
}

TEST_CASE("sphere reduction reference values") {
    CHECK(reduce_mod_sphere(sum_of_squares()) == RealPoly(QSqrt2(2)));
    CHECK(reduce_mod_sphere(sum_of_squares() * RealPoly::variable(0)) ==
          RealPoly::variable(0) * QSqrt2(2));
    CHECK(reduce_mod_sphere(parse_poly("x1^2")) == parse_poly("x1^2"));
}

TEST_CASE("sphere reduction is idempotent, multiplicative, and ideal-exact") {
    hopf_test::Rng rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        RealPoly p = rng.real_poly(6, 8), q = rng.real_poly(5, 6);
        RealPoly rp = reduce_mod_sphere(p);
        CHECK(reduce_mod_sphere(rp) == rp);
        CHECK(reduce_mod_sphere(p * q) ==
              reduce_mod_sphere(reduce_mod_sphere(p) * reduce_mod_sphere(q)));
        CHECK(reduce_mod_sphere(p - rp).is_zero());
        // residual is divisible by the sphere relation
        for (const auto& [m, c] : rp.terms()) CHECK(m.e[3] <= 1);
    }
}

TEST_CASE("diffop composition agrees with sequential application") {
    hopf_test::Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        RealDiffOp d1 = RealDiffOp::term(rng.real_poly(2, 3), {static_cast<int>(rng.uniform(0, 1)), 0,
                                                               static_cast<int>(rng.uniform(0, 2)), 0});
        RealDiffOp d2 = RealDiffOp::term(rng.real_poly(2, 3), {0, static_cast<int>(rng.uniform(0, 2)),
                                                               0, static_cast<int>(rng.uniform(0, 1))});
        RealPoly p = rng.real_poly(6, 6);
        CHECK(d1.compose(d2).apply(p) == d1.apply(d2.apply(p)));
        CHECK(d2.compose(d1).apply(p) == d2.apply(d1.apply(p)));
    }
}

TEST_CASE("commutator is bilinear and antisymmetric, jacobi identity holds") {
    CDiffOp e = op_e(), f = op_f(), h = op_h();
    CHECK(commutator(e, e).is_zero());
    CHECK(commutator(e, f) + commutator(f, e) == CDiffOp());
    CDiffOp jac = commutator(e, commutator(f, h)) + commutator(f, commutator(h, e)) +
                  commutator(h, commutator(e, f));
    CHECK(jac.is_zero());
}

TEST_CASE("chart translation commutes with the laplacian") {
    hopf_test::Rng rng(7);
    CDiffOp lap_c = op_delta_c();
    RealDiffOp lap_r = euclidean_laplacian();
    CHECK(diffop_to_complex(lap_r) == lap_c);
    for (int trial = 0; trial < 15; ++trial) {
        RealPoly p = rng.real_poly(6, 6);
        CHECK(complexify(lap_r.apply(p)) == lap_c.apply(complexify(p)));
        CHECK(to_real_poly(realify(complexify(p))) == p);
    }
}

TEST_CASE("textual format round trips") {
    hopf_test::Rng rng(31337);
    for (int trial = 0; trial < 60; ++trial) {
        RealPoly p = rng.real_poly(5, 7);
        CHECK(parse_poly(format_poly(p)) == p);
    }
    CHECK(format_poly(RealPoly()) == "0");
    RealPoly mixed;
    mixed.add_term(Monomial{{1, 0, 2, 0}}, QSqrt2(Rational(1, 2), Rational(-3, 4)));
    mixed.add_term(Monomial{{0, 0, 0, 0}}, QSqrt2(Rational(-2)));
    CHECK(parse_poly(format_poly(mixed)) == mixed);
    CHECK(parse_poly("1/2*x1^2*x2 - x3") == parse_poly("-x3 + 1/2*x1^2*x2"));
}
