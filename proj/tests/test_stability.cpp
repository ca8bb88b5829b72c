#include <doctest.h>

#include <sstream>

#include "hopf/stability.hpp"
#include "test_rng.hpp"

using namespace hopf;

namespace {

OperatorCache& cache() {
    static OperatorCache c;
    return c;
}

Matrix<QSqrt2> matrix_from_rows(const std::vector<std::string>& rows) {
    std::vector<std::vector<QSqrt2>> parsed;
    for (const auto& row : rows) {
        std::istringstream in(row);
        std::vector<QSqrt2> r;
        std::string tok;
        while (in >> tok) r.push_back(QSqrt2::parse(tok));
        parsed.push_back(std::move(r));
    }
    Matrix<QSqrt2> m(parsed.size(), parsed[0].size());
    for (size_t i = 0; i < parsed.size(); ++i)
        for (size_t j = 0; j < parsed[i].size(); ++j) m(i, j) = parsed[i][j];
    return m;
}

const Matrix<QSqrt2>& printed_jacobi_k1() {
    static const Matrix<QSqrt2> m = matrix_from_rows({
        "3/2 0 0 0 0 -2 0 0",
        "0 3/2 0 0 2 0 0 0",
        "0 0 3/2 0 0 0 0 -2",
        "0 0 0 3/2 0 0 2 0",
        "0 2 0 0 3/2 0 0 0",
        "-2 0 0 0 0 3/2 0 0",
        "0 0 0 2 0 0 3/2 0",
        "0 0 -2 0 0 0 0 3/2",
    });
    return m;
}

const Matrix<QSqrt2>& printed_jacobi_k2_block() {
    static const Matrix<QSqrt2> m = matrix_from_rows({
        "4 0 0 0 0 4",
        "0 4 0 0 0 0",
        "0 0 4 -4 0 0",
        "0 0 -4 4 0 0",
        "0 0 0 0 4 0",
        "4 0 0 0 0 4",
    });
    return m;
}

const Matrix<QSqrt2>& printed_bienergy_k1() {
    static const Matrix<QSqrt2> m = matrix_from_rows({
        "57/4 0 0 0 0 -12 0 0 0 0 -sqrt2 0",
        "0 57/4 0 0 12 0 0 0 0 0 0 sqrt2",
        "0 0 57/4 0 0 0 0 -12 sqrt2 0 0 0",
        "0 0 0 57/4 0 0 12 0 0 -sqrt2 0 0",
        "0 12 0 0 57/4 0 0 0 0 0 0 -sqrt2",
        "-12 0 0 0 0 57/4 0 0 0 0 -sqrt2 0",
        "0 0 0 12 0 0 57/4 0 0 sqrt2 0 0",
        "0 0 -12 0 0 0 0 57/4 sqrt2 0 0 0",
        "0 0 sqrt2 0 0 0 0 sqrt2 -39/4 0 0 0",
        "0 0 0 -sqrt2 0 0 sqrt2 0 0 -39/4 0 0",
        "-sqrt2 0 0 0 0 -sqrt2 0 0 0 0 -39/4 0",
        "0 sqrt2 0 0 -sqrt2 0 0 0 0 0 0 -39/4",
    });
    return m;
}

const Matrix<QSqrt2>& printed_bienergy_k2_block() {
    static const Matrix<QSqrt2> m = matrix_from_rows({
        "56 0 0 0 0 40 0 8*sqrt2 0",
        "0 40 0 0 0 0 -16*sqrt2 0 0",
        "0 0 48 -48 0 0 0 0 0",
        "0 0 -48 48 0 0 0 0 0",
        "0 0 0 0 40 0 0 0 16*sqrt2",
        "40 0 0 0 0 56 0 -8*sqrt2 0",
        "0 -16*sqrt2 0 0 0 0 8 0 0",
        "8*sqrt2 0 0 0 0 -8*sqrt2 0 16 0",
        "0 0 0 0 16*sqrt2 0 0 0 8",
    });
    return m;
}

}  // namespace

TEST_CASE("jacobi matrix reproductions") {
    OperatorAssembly j0 = assemble_J_psi(0, cache());
    CHECK(j0.mat == Matrix<QSqrt2>(2, 2));

    OperatorAssembly j1 = assemble_J_psi(1, cache());
    CHECK(j1.mat == printed_jacobi_k1());
    CHECK(j1.mat(5, 0) == QSqrt2(-2));  // <J(f1 dpsiX2), f2 dpsiX3> entry

    OperatorAssembly j2 = assemble_J_psi(2, cache());
    for (int t = 0; t < 3; ++t)
        CHECK(j2.mat.signed_principal_submatrix(triple_selection(t, 2)) ==
              printed_jacobi_k2_block());
}

TEST_CASE("jacobi exact spectra for the covered degrees") {
    SpectrumReport s0 = jpsi_spectrum_exact(0, cache());
    CHECK(s0.nullity == 2);
    CHECK(s0.index == 0);

    SpectrumReport s1 = jpsi_spectrum_exact(1, cache());
    REQUIRE(s1.eigenvalues.size() == 2);
    CHECK(s1.eigenvalues[0].exact == QSqrt2(Rational(-1, 2)));
    CHECK(s1.eigenvalues[0].multiplicity == 4);
    CHECK(s1.eigenvalues[1].exact == QSqrt2(Rational(7, 2)));
    CHECK(s1.eigenvalues[1].multiplicity == 4);
    CHECK(s1.index == 4);
    CHECK(s1.nullity == 0);

    SpectrumReport s2 = jpsi_spectrum_exact(2, cache());
    REQUIRE(s2.eigenvalues.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(s2.eigenvalues[i].exact == QSqrt2(Rational(4L * i)));
        CHECK(s2.eigenvalues[i].multiplicity == 6);
    }
    CHECK(s2.index == 0);
    CHECK(s2.nullity == 6);
}

TEST_CASE("block spectrum closed form cross-checked for k <= 6") {
    for (int k = 0; k <= 6; ++k) {
        SpectrumReport s = jpsi_spectrum_exact(k, cache());
        CHECK(s.total_multiplicity() == static_cast<int>(2 * (k + 1) * (k + 1)));
        for (const auto& e : s.eigenvalues) CHECK(e.multiplicity == 2 * (k + 1));
        if (k > 2) {
            CHECK(s.index == 0);
            CHECK(s.nullity == 0);
            for (const auto& e : s.eigenvalues) CHECK(e.exact.sign() > 0);
        }
    }
}

TEST_CASE("bienergy of the harmonic map is the squared jacobi matrix") {
    for (int k = 0; k <= 6; ++k) {
        OperatorAssembly j = assemble_J_psi(k, cache());
        OperatorAssembly i = assemble_I_psi(k, cache());
        CHECK(i.mat == j.mat * j.mat);
    }
}

TEST_CASE("squared spectrum at k=1 against a floating oracle") {
    OperatorAssembly i1 = assemble_I_psi(1, cache());
    auto floats = generalized_float_spectrum(i1.mat, i1.gram);
    std::vector<double> expect = {0.25, 0.25, 0.25, 0.25, 12.25, 12.25, 12.25, 12.25};
    REQUIRE(floats.size() == expect.size());
    for (size_t i = 0; i < expect.size(); ++i)
        CHECK(floats[i] == doctest::Approx(expect[i]).epsilon(1e-10));

    SpectrumReport rep = ipsi_spectrum_exact(1, cache());
    REQUIRE(rep.eigenvalues.size() == 2);
    CHECK(rep.eigenvalues[0].exact == QSqrt2(Rational(1, 4)));
    CHECK(rep.eigenvalues[1].exact == QSqrt2(Rational(49, 4)));
    CHECK(rep.index == 0);
}

TEST_CASE("bienergy hessian matrix reproductions") {
    OperatorAssembly i0 = assemble_I_phi(0, cache());
    Matrix<QSqrt2> expect0(3, 3);
    expect0(2, 2) = QSqrt2(-16);
    CHECK(i0.mat == expect0);

    OperatorAssembly i1 = assemble_I_phi(1, cache());
    CHECK(i1.mat == printed_bienergy_k1());

    OperatorAssembly i2 = assemble_I_phi(2, cache());
    for (int t = 0; t < 3; ++t)
        CHECK(i2.mat.signed_principal_submatrix(triple_selection(t, 3)) ==
              printed_bienergy_k2_block());
}

TEST_CASE("bienergy hessian agrees with the delta-phi route") {
    for (int k = 0; k <= 3; ++k) {
        OperatorAssembly direct = assemble_I_phi(k, cache());
        CHECK(direct.mat == assemble_I_phi_via_delta_phi(k, cache()));
    }
}

TEST_CASE("quadratic factors expand as advertised") {
    // (t + 15/4)^2 - 40 = t^2 + (15/2) t - 415/16
    using P = UPoly<Rational>;
    P t = P::t();
    P shifted = (t + P(Rational(15, 4))) * (t + P(Rational(15, 4))) - P(Rational(40));
    CHECK(shifted == P::from_coeffs({Rational(-415, 16), Rational(15, 2), Rational(1)}));
    // (t - 24)^2 - 768 = t^2 - 48 t - 192
    P shifted2 = (t - P(Rational(24))) * (t - P(Rational(24))) - P(Rational(768));
    CHECK(shifted2 == P::from_coeffs({Rational(-192), Rational(-48), Rational(1)}));
}

TEST_CASE("bienergy hessian exact spectra for k <= 2") {
    SpectrumReport s0 = iphi_spectrum_exact_small(0, cache());
    CHECK(s0.index == 1);
    CHECK(s0.nullity == 2);

    SpectrumReport s1 = iphi_spectrum_exact_small(1, cache());
    CHECK(s1.index == 4);
    CHECK(s1.nullity == 0);
    bool found_quad = false;
    for (const auto& e : s1.eigenvalues)
        if (e.kind == EigenEntry::Kind::QuadraticPair) {
            found_quad = true;
            CHECK(e.quad_trace == Rational(-15, 2));
            CHECK(e.quad_det == Rational(-415, 16));
            CHECK(e.multiplicity == 8);
        }
    CHECK(found_quad);

    SpectrumReport s2 = iphi_spectrum_exact_small(2, cache());
    CHECK(s2.index == 6);
    CHECK(s2.nullity == 6);
    CHECK(s2.total_multiplicity() == 27);
}

TEST_CASE("positivity certificates") {
    PositivityCertificate j3 = jpsi_certificate(3);
    CHECK(j3.positive);
    CHECK(j3.quantity_a == QSqrt2(Rational(3, 2)));  // 15/2 - 6

    CHECK_FALSE(iphi_certificate(9).positive);   // B bound needs k >= 10
    CHECK(iphi_certificate(9).quantity_b.sign() < 0);
    CHECK(iphi_certificate(10).quantity_b.sign() > 0);
    CHECK_FALSE(iphi_certificate(10).positive);  // A bound still negative
    CHECK_FALSE(iphi_certificate(11).positive);
    CHECK(iphi_certificate(11).quantity_a.sign() < 0);
    for (int k = 12; k <= 40; ++k) CHECK(iphi_certificate(k).positive);

    CHECK(jpsi_certificate_tail());
    CHECK(iphi_certificate_tail());
}

TEST_CASE("index and nullity tallies") {
    IndexNullityReport jr = index_nullity_report(OpTag::Jpsi, 2, cache());
    CHECK(jr.index == 4);
    CHECK(jr.nullity == 8);
    CHECK(jr.complete);

    IndexNullityReport ir = index_nullity_report(OpTag::Ipsi, 2, cache());
    CHECK(ir.index == 0);
    CHECK(ir.nullity == 8);
    CHECK(ir.complete);

    IndexNullityReport br = index_nullity_report(OpTag::Iphi, 2, cache());
    CHECK(br.index == 11);
    CHECK(br.nullity == 8);
    CHECK_FALSE(br.complete);
    bool warned = false;
    for (const auto& n : br.notes)
        if (n.find("coverage incomplete") != std::string::npos) warned = true;
    CHECK(warned);
}

TEST_CASE("kernel characterization") {
    CheckReport rep = kernel_characterization(cache());
    for (const auto& c : rep.checks) {
        INFO(c.name);
        CHECK(c.pass);
    }
}

TEST_CASE("negative space characterization") {
    CheckReport rep = negative_space_characterization(cache());
    for (const auto& c : rep.checks) {
        INFO(c.name);
        CHECK(c.pass);
    }
}

TEST_CASE("instability witness") {
    InstabilityWitness w = instability_witness(cache());
    CHECK(w.energy_density == QSqrt2(1));
    CHECK(w.value == QSqrt2(-16));
    CHECK(w.unstable);
    CHECK(w.matches_matrix);
}

TEST_CASE("basic subspace spectrum through degree 4") {
    BasicSubspaceReport rep = basic_subspace_spectrum(4, cache());
    CHECK(rep.invariant);
    CHECK(rep.index == 1);
    CHECK(rep.nullity == 6);
    for (const auto& c : rep.section_checks.checks) {
        INFO(c.name);
        CHECK(c.pass);
    }
    REQUIRE(rep.per_degree.size() == 3);
    CHECK(rep.per_degree[0].dim == 1);
    CHECK(rep.per_degree[0].inertia_exact.negative == 1);
    CHECK(rep.per_degree[1].dim == 9);
    CHECK(rep.per_degree[1].inertia_exact.zero == 6);
    CHECK(rep.per_degree[1].inertia_exact.positive == 3);
    CHECK(rep.per_degree[1].inertia_exact.negative == 0);
    CHECK(rep.per_degree[2].dim == 15);
    CHECK(rep.per_degree[2].inertia_exact.positive == 15);
}

TEST_CASE("eigensection combinations f dpsi(X2) -+ (X1 f)/sqrt(c) dpsi(X3)") {
    // For Delta^V f = c f with c = 2 on degree 2, the plus combination is an
    // eigensection for lambda_k + 2 sqrt(2c) = 8, the minus one for 0.
    OperatorAssembly j2 = assemble_J_psi(2, cache());
    const DegreeData& d = cache().degree(2);
    Matrix<Rational> shifted = d.vertical - Matrix<Rational>::scalar(9, Rational(2));
    auto eigenspace = nullspace(shifted);
    REQUIRE(eigenspace.size() == 6);
    QSqrt2 inv_sqrt_c(Rational(0), Rational(1, 2));  // 1/sqrt2
    for (const auto& f : eigenspace) {
        std::vector<QSqrt2> fc(9);
        for (size_t i = 0; i < 9; ++i) fc[i] = QSqrt2(f[i]);
        std::vector<QSqrt2> x1f = d.m1.apply(fc);
        for (int sign : {+1, -1}) {
            std::vector<QSqrt2> v(18);
            for (size_t i = 0; i < 9; ++i) {
                v[i] = fc[i];
                v[9 + i] = x1f[i] * inv_sqrt_c * QSqrt2(sign);
            }
            QSqrt2 expected_eigenvalue(sign > 0 ? 8 : 0);
            std::vector<QSqrt2> jv = j2.mat.apply(v);
            for (size_t i = 0; i < 18; ++i) CHECK(jv[i] == expected_eigenvalue * v[i]);
        }
    }
}

TEST_CASE("gram self-adjointness holds for every assembly k <= 6") {
    for (int k = 0; k <= 6; ++k) {
        CHECK_NOTHROW(assemble_J_psi(k, cache()));
        CHECK_NOTHROW(assemble_I_psi(k, cache()));
        CHECK_NOTHROW(assemble_I_phi(k, cache()));
    }
}

TEST_CASE("scan entries are internally consistent at low degrees") {
    for (int k : {3, 4}) {
        SpectrumReport s = iphi_scan_degree(k, cache());
        CHECK(s.total_multiplicity() == static_cast<int>(3 * (k + 1) * (k + 1)));
        CHECK(s.index == 0);
        CHECK(s.nullity == 0);
        for (const auto& e : s.eigenvalues) CHECK(e.approx > 1.0);
    }
}
