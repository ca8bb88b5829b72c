#pragma once

#include <json.hpp>

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "hopf/stability.hpp"

namespace hopf {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Value rendering.

inline std::string float_str(double v, int digits = 12) {
    std::ostringstream out;
    out.precision(digits);
    out << v;
    return out.str();
}

/// Largest square divisor: n = s^2 m with m squarefree (trial division).
inline void squarefree_split(mpz_class n, mpz_class& s, mpz_class& m) {
    s = 1;
    m = 1;
    if (n == 0) return;
    for (mpz_class p = 2; p * p <= n && p < 1000000; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) s *= p;
        if (e % 2) m *= p;
    }
    m *= n;  // leftover factor (treated as squarefree)
}

/// Renders one root t/2 +- sqrt(t^2/4 - det) of a certified quadratic pair
/// symbolically, e.g. "-15/4-2*sqrt(10)".
inline std::string quadratic_root_str(const Rational& trace, const Rational& det, int sign) {
    Rational half_trace = trace / Rational(2);
    Rational disc = half_trace * half_trace - det;
    if (disc.sign() < 0) return "complex-pair(trace=" + trace.str() + ",det=" + det.str() + ")";
    // sqrt(p/q) = sqrt(p q) / q ; split pq into s^2 m.
    mpz_class pq = disc.num() * disc.den(), s, m;
    squarefree_split(pq, s, m);
    Rational outer(s, disc.den());
    std::string root = m == 1 ? outer.str()
                              : (outer == Rational(1) ? "sqrt(" + m.get_str() + ")"
                                                      : outer.str() + "*sqrt(" + m.get_str() + ")");
    if (m == 1) {
        Rational value = sign > 0 ? half_trace + outer : half_trace - outer;
        return value.str();
    }
    std::string head = half_trace.is_zero() ? "" : half_trace.str();
    if (sign > 0) return head.empty() ? root : head + "+" + root;
    return head.empty() ? "-" + root : head + "-" + root;
}

inline std::string eigen_pretty(const EigenEntry& e) {
    switch (e.kind) {
        case EigenEntry::Kind::Exact:
            return e.exact.str();
        case EigenEntry::Kind::QuadraticPair:
            return quadratic_root_str(e.quad_trace, e.quad_det, -1) + ", " +
                   quadratic_root_str(e.quad_trace, e.quad_det, +1);
        case EigenEntry::Kind::Float:
            return float_str(e.approx);
    }
    return "?";
}

// ---------------------------------------------------------------------------
// JSON encoding. Exact values ride as strings to preserve exactness.

inline Json to_json(const QSqrt2& v) { return Json{{"a", v.a().str()}, {"b", v.b().str()}}; }

inline QSqrt2 qsqrt2_from_json(const Json& j) {
    return QSqrt2(Rational::parse(j.at("a").get<std::string>()),
                  Rational::parse(j.at("b").get<std::string>()));
}

inline Json to_json(const EigenEntry& e) {
    Json j;
    switch (e.kind) {
        case EigenEntry::Kind::Exact:
            j["exact"] = to_json(e.exact);
            break;
        case EigenEntry::Kind::QuadraticPair:
            j["quadratic"] = Json{{"trace", e.quad_trace.str()}, {"det", e.quad_det.str()}};
            break;
        case EigenEntry::Kind::Float:
            j["float"] = e.approx;
            break;
    }
    j["multiplicity"] = e.multiplicity;
    return j;
}

inline EigenEntry eigen_entry_from_json(const Json& j) {
    int mult = j.at("multiplicity").get<int>();
    if (j.contains("exact")) return EigenEntry::exact_value(qsqrt2_from_json(j["exact"]), mult);
    if (j.contains("quadratic"))
        return EigenEntry::quadratic(Rational::parse(j["quadratic"].at("trace").get<std::string>()),
                                     Rational::parse(j["quadratic"].at("det").get<std::string>()),
                                     mult);
    return EigenEntry::floating(j.at("float").get<double>(), mult);
}

inline Json to_json(const SpectrumReport& r) {
    Json j;
    j["operator"] = to_string(r.tag);
    j["k"] = r.k;
    j["dim"] = r.dim;
    j["method"] = r.method;
    j["eigenvalues"] = Json::array();
    for (const auto& e : r.eigenvalues) j["eigenvalues"].push_back(to_json(e));
    j["index"] = r.index;
    j["nullity"] = r.nullity;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

inline Json to_json(const PositivityCertificate& c) {
    Json j;
    j["operator"] = to_string(c.tag);
    j["k"] = c.k;
    if (c.tag == OpTag::Jpsi) {
        j["margin"] = c.quantity_a.str();
    } else {
        j["bound_a"] = c.quantity_a.str();
        j["bound_b"] = c.quantity_b.str();
    }
    j["positive"] = c.positive;
    return j;
}

inline Json to_json(const IndexNullityReport& r) {
    Json j;
    j["operator"] = to_string(r.tag);
    j["kmax"] = r.kmax;
    j["index"] = r.index;
    j["nullity"] = r.nullity;
    j["complete"] = r.complete;
    j["per_degree"] = Json::array();
    for (const auto& s : r.per_degree) j["per_degree"].push_back(to_json(s));
    j["certificates"] = Json::array();
    for (const auto& c : r.certificates) j["certificates"].push_back(to_json(c));
    j["notes"] = r.notes;
    return j;
}

inline Json to_json(const GeometryReport& r) {
    Json j;
    j["pass"] = r.all_pass();
    j["checks"] = Json::array();
    for (const auto& c : r.checks) {
        Json e{{"name", c.name}, {"pass", c.pass}};
        if (!c.detail.empty()) e["detail"] = c.detail;
        j["checks"].push_back(e);
    }
    return j;
}

inline Json to_json(const CheckReport& r) {
    Json j;
    j["pass"] = r.all_pass();
    j["checks"] = Json::array();
    for (const auto& c : r.checks) {
        Json e{{"name", c.name}, {"pass", c.pass}};
        if (!c.detail.empty()) e["detail"] = c.detail;
        j["checks"].push_back(e);
    }
    return j;
}

inline Json to_json(const BasicSubspaceReport& r) {
    Json j;
    j["kmax"] = r.kmax;
    j["invariant"] = r.invariant;
    j["index"] = r.index;
    j["nullity"] = r.nullity;
    j["per_degree"] = Json::array();
    for (const auto& d : r.per_degree) {
        Json e;
        e["degree"] = d.degree;
        e["dim"] = d.dim;
        e["positive"] = d.inertia_exact.positive;
        e["negative"] = d.inertia_exact.negative;
        e["zero"] = d.inertia_exact.zero;
        e["eigenvalues_float"] = d.eigenvalues;
        j["per_degree"].push_back(e);
    }
    j["section_checks"] = to_json(r.section_checks);
    return j;
}

inline Json matrix_to_json(const Matrix<QSqrt2>& m) {
    Json rows = Json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// CSV and pretty renderings of spectrum reports.

inline std::string spectrum_csv(const SpectrumReport& r) {
    std::string out;
    for (const auto& e : r.eigenvalues) {
        if (e.kind == EigenEntry::Kind::QuadraticPair) {
            out += to_string(r.tag) + "," + std::to_string(r.k) + "," +
                   quadratic_root_str(e.quad_trace, e.quad_det, -1) + "," +
                   std::to_string(e.multiplicity / 2) + "\n";
            out += to_string(r.tag) + "," + std::to_string(r.k) + "," +
                   quadratic_root_str(e.quad_trace, e.quad_det, +1) + "," +
                   std::to_string(e.multiplicity / 2) + "\n";
        } else {
            std::string v = e.kind == EigenEntry::Kind::Exact ? e.exact.str()
                                                              : float_str(e.approx);
            out += to_string(r.tag) + "," + std::to_string(r.k) + "," + v + "," +
                   std::to_string(e.multiplicity) + "\n";
        }
    }
    return out;
}

inline std::string spectrum_pretty(const SpectrumReport& r) {
    std::ostringstream out;
    out << to_string(r.tag) << " on degree " << r.k << " (dim " << r.dim << ", "
        << r.method << ")\n";
    for (const auto& e : r.eigenvalues)
        out << "  " << eigen_pretty(e) << "   x" << e.multiplicity << "\n";
    out << "  index " << r.index << ", nullity " << r.nullity << "\n";
    for (const auto& n : r.notes) out << "  note: " << n << "\n";
    return out.str();
}

/// Complex-chart polynomial rendering for chain dumps.
inline std::string format_cpoly(const CPoly& p) {
    if (p.is_zero()) return "0";
    static const char* names[4] = {"z", "zb", "w", "wb"};
    std::string out;
    for (const auto& [m, c] : p.terms()) {
        if (!out.empty()) out += " + ";
        out += "(" + c.str() + ")";
        for (int i = 0; i < 4; ++i) {
            if (m.e[i] == 0) continue;
            out += std::string("*") + names[i];
            if (m.e[i] > 1) out += "^" + std::to_string(m.e[i]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// End-to-end reproduction suite (`verify-paper`).

struct ReproductionCheck {
    std::string name;
    std::string anchor;    // section / matrix identifier in the source tables
    std::string expected;
    std::string computed;
    bool pass = false;
};

struct ReproductionSuiteResult {
    std::vector<ReproductionCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    void add(const std::string& name, const std::string& anchor, const std::string& expected,
             const std::string& computed) {
        checks.push_back({name, anchor, expected, computed, expected == computed});
    }
    void add_flag(const std::string& name, const std::string& anchor, bool pass) {
        checks.push_back({name, anchor, "pass", pass ? "pass" : "FAIL", pass});
    }
};

inline Json to_json(const ReproductionSuiteResult& r) {
    Json j;
    j["pass"] = r.all_pass();
    j["checks"] = Json::array();
    for (const auto& c : r.checks)
        j["checks"].push_back(Json{{"name", c.name},
                                   {"anchor", c.anchor},
                                   {"expected", c.expected},
                                   {"computed", c.computed},
                                   {"pass", c.pass}});
    return j;
}

namespace detail {

inline std::string spectrum_signature(const std::vector<RationalEigenvalue>& spec) {
    std::string s;
    for (const auto& e : spec) s += e.value.str() + "x" + std::to_string(e.multiplicity) + ";";
    return s;
}

inline std::string report_signature(const SpectrumReport& r) {
    std::string s;
    for (const auto& e : r.eigenvalues) {
        if (e.kind == EigenEntry::Kind::QuadraticPair)
            s += "pair(" + e.quad_trace.str() + "," + e.quad_det.str() + ")";
        else
            s += e.exact.str();
        s += "x" + std::to_string(e.multiplicity) + ";";
    }
    return s;
}

}  // namespace detail

/// Runs every deterministic reproduction of the published tables: geometry,
/// vertical spectra, operator matrices, spectra, certificates, kernel and
/// index results. Monte-Carlo checks live in `oracle-check` instead.
inline ReproductionSuiteResult verify_paper(OperatorCache& cache) {
    ReproductionSuiteResult suite;

    // Section 2: submersion geometry and the connection table.
    for (const auto& c : submersion_checks().checks)
        suite.add_flag("geometry: " + c.name, "sec2", c.pass);
    for (const auto& c : connection_table_report().checks)
        suite.add_flag("connection: " + c.name, "sec2.prop-connection", c.pass);

    // Section 2, eigenfunction correspondence lemma.
    for (int kk = 1; kk <= 3; ++kk) {
        auto spec = vertical_spectrum_bruteforce(2 * kk, cache);
        suite.add("X1-invariant dimension on H^" + std::to_string(2 * kk),
                  "sec2.lemma-correspondence", std::to_string(2 * kk + 1),
                  spec.front().value.is_zero() ? std::to_string(spec.front().multiplicity)
                                               : "missing zero eigenvalue");
    }

    // Section 3: sl2 relations and the vertical spectrum, both routes.
    try {
        Sl2Ops::build();
        suite.add_flag("sl2 bracket relations and h = i sqrt2 X1", "sec3", true);
    } catch (const std::exception&) {
        suite.add_flag("sl2 bracket relations and h = i sqrt2 X1", "sec3", false);
    }
    for (int k = 0; k <= 8; ++k) {
        std::string expected;
        {
            std::map<Rational, int> agg;
            for (int l = 0; l <= k; ++l)
                agg[Rational(static_cast<long>(k - 2 * l) * (k - 2 * l), 2)] += k + 1;
            std::vector<RationalEigenvalue> closed;
            for (const auto& [v, m] : agg) closed.push_back({v, m});
            expected = detail::spectrum_signature(closed);
        }
        suite.add("vertical spectrum closed form, k=" + std::to_string(k), "sec3.conclusion",
                  expected, detail::spectrum_signature(vertical_spectrum_bruteforce(k, cache)));
        suite.add("vertical spectrum via sl2, k=" + std::to_string(k), "sec3.conclusion",
                  expected, detail::spectrum_signature(vertical_spectrum_via_sl2(k)));
    }

    // Section 4: Jacobi matrices and spectra.
    {
        OperatorAssembly j0 = assemble_J_psi(0, cache);
        suite.add_flag("J matrix at k=0 is zero", "sec4.i", j0.mat.is_zero());
        SpectrumReport s1 = jpsi_spectrum_exact(1, cache);
        suite.add("J spectrum at k=1", "sec4.ii", "-1/2x4;7/2x4;",
                  detail::report_signature(s1));
        SpectrumReport s2 = jpsi_spectrum_exact(2, cache);
        suite.add("J spectrum at k=2", "sec4.iii", "0x6;4x6;8x6;",
                  detail::report_signature(s2));
        bool pos = true;
        for (int k = 3; k <= 8; ++k) pos = pos && jpsi_certificate(k).positive;
        suite.add_flag("J positive definite for k>2 (margin lambda_k - 2k)", "sec4.iv",
                       pos && jpsi_certificate_tail());
        IndexNullityReport jr = index_nullity_report(OpTag::Jpsi, 2, cache);
        suite.add("harmonic index and nullity", "sec4.thm-urakawa", "4,8",
                  std::to_string(jr.index) + "," + std::to_string(jr.nullity));
    }
    suite.add_flag("negative space = gradient sections of first eigenfunctions",
                   "sec4.1.thm-negative", negative_space_characterization(cache).all_pass());
    suite.add_flag("kernel characterization (Killing + gradient sections, basic locus)",
                   "sec4.1.thm-kernel", kernel_characterization(cache).all_pass());

    // Section 5: the bienergy Hessian of the harmonic map.
    {
        bool square = true;
        for (int k = 0; k <= 4; ++k) {
            OperatorAssembly j = assemble_J_psi(k, cache);
            OperatorAssembly i = assemble_I_psi(k, cache);
            square = square && (i.mat == j.mat * j.mat);
        }
        suite.add_flag("bienergy Hessian of psi equals J squared", "sec5", square);
        IndexNullityReport ir = index_nullity_report(OpTag::Ipsi, 2, cache);
        suite.add("biharmonic stability of psi (index, nullity)", "sec5.thm", "0,8",
                  std::to_string(ir.index) + "," + std::to_string(ir.nullity));
    }

    // Section 6: instability, matrices, spectra, bounds, totals.
    {
        InstabilityWitness w = instability_witness(cache);
        suite.add("normalized (I(eta), eta)", "sec6.thm-unstable", "-16", w.value.str());
        suite.add_flag("witness matches the k=0 matrix entry", "sec6.i", w.matches_matrix);
        SpectrumReport s0 = iphi_spectrum_exact_small(0, cache);
        suite.add("I spectrum at k=0", "sec6.i", "0x2;-16x1;", detail::report_signature(s0));
        SpectrumReport s1 = iphi_spectrum_exact_small(1, cache);
        suite.add("I spectrum at k=1", "sec6.ii", "pair(-15/2,-415/16)x8;105/4x4;",
                  detail::report_signature(s1));
        SpectrumReport s2 = iphi_spectrum_exact_small(2, cache);
        suite.add("I spectrum at k=2", "sec6.iii", "0x6;96x6;32x3;pair(48,-192)x12;",
                  detail::report_signature(s2));
        bool matrices = true;
        for (int k = 0; k <= 2; ++k) {
            OperatorAssembly a = assemble_I_phi(k, cache);
            matrices = matrices && (a.mat == assemble_I_phi_via_delta_phi(k, cache));
        }
        suite.add_flag("I^phi matrices agree with the Delta^phi route (k<=2)", "sec6.ii",
                       matrices);
        suite.add_flag("A/B bounds certify positivity exactly from k=12 (B from k=10)",
                       "sec6.iv",
                       !iphi_certificate(9).positive &&
                           iphi_certificate(9).quantity_b.sign() < 0 &&
                           iphi_certificate(10).quantity_b.sign() > 0 &&
                           !iphi_certificate(11).positive && iphi_certificate(12).positive &&
                           iphi_certificate_tail());
        IndexNullityReport br = index_nullity_report(OpTag::Iphi, 2, cache);
        suite.add("biharmonic index and nullity lower bounds", "sec6.thm-final", "11,8",
                  std::to_string(br.index) + "," + std::to_string(br.nullity));
    }

    // Section 6.1: the basic subspace.
    {
        BasicSubspaceReport br = basic_subspace_spectrum(4, cache);
        suite.add("restricted index and nullity", "sec6.1.thm", "1,6",
                  std::to_string(br.index) + "," + std::to_string(br.nullity));
        suite.add_flag("restricted subspace invariant with advertised kernel sections",
                       "sec6.1.thm", br.invariant && br.section_checks.all_pass());
    }

    return suite;
}

// ---------------------------------------------------------------------------
// Monte-Carlo oracle suite (`oracle-check`).

struct OracleCheckResult {
    struct Entry {
        std::array<int, 4> alpha;
        Rational exact;
        double mc_mean = 0;
        double mc_std_error = 0;
        bool within_3_sigma = false;
    };
    std::vector<Entry> entries;
    long samples = 0;
    uint64_t seed = 0;
    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.within_3_sigma) return false;
        return true;
    }
};

inline OracleCheckResult oracle_check(long samples, uint64_t seed) {
    OracleCheckResult res;
    res.samples = samples;
    res.seed = seed;
    std::vector<std::array<int, 4>> alphas = {
        {0, 0, 0, 0}, {1, 0, 0, 0}, {2, 0, 0, 0}, {2, 2, 0, 0}, {4, 0, 0, 0},
        {2, 2, 2, 0}, {2, 2, 2, 2}, {6, 0, 0, 0}, {4, 2, 0, 0}, {3, 1, 0, 0},
    };
    for (size_t i = 0; i < alphas.size(); ++i) {
        OracleCheckResult::Entry e;
        e.alpha = alphas[i];
        e.exact = sphere_moment(e.alpha);
        auto mc = sphere_moment_monte_carlo(e.alpha, samples, seed + i);
        e.mc_mean = mc.mean;
        e.mc_std_error = mc.std_error;
        double err = std::fabs(mc.mean - e.exact.to_double());
        e.within_3_sigma = err <= 3.0 * mc.std_error + 1e-12;
        res.entries.push_back(e);
    }
    return res;
}

inline Json to_json(const OracleCheckResult& r) {
    Json j;
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["pass"] = r.all_pass();
    j["moments"] = Json::array();
    for (const auto& e : r.entries) {
        Json entry;
        entry["alpha"] = e.alpha;
        entry["exact"] = e.exact.str();
        entry["monte_carlo"] = e.mc_mean;
        entry["std_error"] = e.mc_std_error;
        entry["within_3_sigma"] = e.within_3_sigma;
        j["moments"].push_back(entry);
    }
    return j;
}

}  // namespace hopf
