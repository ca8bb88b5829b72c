#pragma once

#include <array>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hopf/diffop.hpp"
#include "hopf/matrix.hpp"
#include "hopf/poly.hpp"

namespace hopf {

// ---------------------------------------------------------------------------
// Normalized moments of S^3(sqrt 2).
//
// With the volume-normalized measure, E[x^alpha] vanishes unless every
// exponent is even, and for alpha = 2m equals
//     prod_i (2 m_i - 1)!!  /  (M + 1)!          with M = sum m_i,
// after scaling by r^{2M} = 2^M for the radius-sqrt(2) sphere.

inline Rational sphere_moment(const std::array<int, 4>& alpha) {
    for (int e : alpha)
        if (e % 2 != 0) return Rational(0);
    static std::unordered_map<uint32_t, Rational> cache;
    static std::mutex mutex;
    uint32_t key = 0;
    for (int i = 0; i < 4; ++i) key |= static_cast<uint32_t>(alpha[i]) << (8 * i);
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    int m_total = (alpha[0] + alpha[1] + alpha[2] + alpha[3]) / 2;
    Rational num(1);
    for (int e : alpha) num *= double_factorial(e - 1);
    Rational value = num / factorial(static_cast<unsigned>(m_total + 1));
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(key, value);
    return value;
}

/// Volume-normalized L^2 pairing on S^3(sqrt 2). Equal to integrating the
/// sphere-reduced product; the moment formula already lives on the sphere,
/// so no reduction pass is needed.
inline QSqrt2 inner_product(const RealPoly& p, const RealPoly& q) {
    QSqrt2 acc;
    for (const auto& [mp, cp] : p.terms()) {
        int pclass = mp.parity_class();
        for (const auto& [mq, cq] : q.terms()) {
            if (mq.parity_class() != pclass) continue;  // odd moment, zero
            Rational mom = sphere_moment({mp.e[0] + mq.e[0], mp.e[1] + mq.e[1],
                                          mp.e[2] + mq.e[2], mp.e[3] + mq.e[3]});
            if (!mom.is_zero()) acc += cp * cq * QSqrt2(mom);
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Killing frame of S^3(sqrt 2) and the Hopf data.

struct FrameField {
    std::string name;
    std::array<RealPoly, 4> c;  // degree-1 coefficients
};

namespace detail {
inline RealPoly lin(int sign, int var) {
    // sign * x_var / sqrt(2)
    return RealPoly::variable(var) * QSqrt2(Rational(0), Rational(sign, 2));
}
}  // namespace detail

/// X1..X6, the paper-fixed basis of Killing fields (1-indexed).
inline const FrameField& frame_field(int i) {
    using detail::lin;
    static const std::array<FrameField, 6> frames = {{
        {"X1", {lin(-1, 1), lin(1, 0), lin(-1, 3), lin(1, 2)}},
        {"X2", {lin(-1, 2), lin(1, 3), lin(1, 0), lin(-1, 1)}},
        {"X3", {lin(-1, 3), lin(-1, 2), lin(1, 1), lin(1, 0)}},
        {"X4", {lin(-1, 1), lin(1, 0), lin(1, 3), lin(-1, 2)}},
        {"X5", {lin(-1, 2), lin(-1, 3), lin(1, 0), lin(1, 1)}},
        {"X6", {lin(-1, 3), lin(1, 2), lin(-1, 1), lin(1, 0)}},
    }};
    return frames.at(i - 1);
}

inline RealPoly vf_apply(const FrameField& x, const RealPoly& p) {
    RealPoly r;
    for (int i = 0; i < 4; ++i) r += x.c[i] * p.derivative(i);
    return r;
}

inline RealDiffOp frame_diffop(int i) {
    const FrameField& f = frame_field(i);
    return derivation<QSqrt2>(f.c);
}

/// Vertical Laplacian -X1 X1 applied to a function on the sphere.
inline RealPoly vertical_laplacian_apply(const RealPoly& p) {
    const FrameField& x1 = frame_field(1);
    return -vf_apply(x1, vf_apply(x1, p));
}

struct HopfMap {
    std::array<RealPoly, 3> psi;

    static const HopfMap& instance() {
        static const HopfMap h = [] {
            HopfMap m;
            QSqrt2 quarter_sqrt2(Rational(0), Rational(1, 4));  // 1/(2 sqrt2)
            m.psi[0] = (parse_poly("2*x1*x3 + 2*x2*x4")) * quarter_sqrt2;
            m.psi[1] = (parse_poly("2*x2*x3 - 2*x1*x4")) * quarter_sqrt2;
            m.psi[2] = (parse_poly("x1^2 + x2^2 - x3^2 - x4^2")) * quarter_sqrt2;
            return m;
        }();
        return h;
    }
};

/// Unit normal of S^2(1/sqrt2) inside S^3, pulled back through the Hopf map:
/// eta o psi = (psi1, psi2, psi3, -1/sqrt2).
struct NormalSection {
    std::array<RealPoly, 4> c;

    static const NormalSection& instance() {
        static const NormalSection n = [] {
            NormalSection s;
            const auto& h = HopfMap::instance();
            for (int a = 0; a < 3; ++a) s.c[a] = h.psi[a];
            s.c[3] = RealPoly(QSqrt2(Rational(0), Rational(-1, 2)));
            return s;
        }();
        return n;
    }
};

/// Pointwise Euclidean inner product of two coefficient vectors.
template <size_t N>
RealPoly pointwise_dot(const std::array<RealPoly, N>& a, const std::array<RealPoly, N>& b) {
    RealPoly r;
    for (size_t i = 0; i < N; ++i) r += a[i] * b[i];
    return r;
}

// ---------------------------------------------------------------------------
// Expressing ambient vector fields in the Killing frame.

/// Writes the 4-component polynomial field v as sum_i coeff_i X_i with
/// constant coefficients, as an identity mod the sphere ideal.
/// Returns nullopt when v is not in the constant-coefficient span.
inline std::optional<std::array<QSqrt2, 6>> express_in_frame(const std::array<RealPoly, 4>& v) {
    // Collect the monomials of the reduced components and of the frames.
    std::array<RealPoly, 4> red;
    for (int j = 0; j < 4; ++j) red[j] = reduce_mod_sphere(v[j]);
    std::vector<std::pair<int, Monomial>> rows;
    auto note = [&rows](int comp, const RealPoly& p) {
        for (const auto& [m, c] : p.terms()) {
            if (std::find(rows.begin(), rows.end(), std::make_pair(comp, m)) == rows.end())
                rows.emplace_back(comp, m);
        }
    };
    for (int j = 0; j < 4; ++j) {
        note(j, red[j]);
        for (int i = 1; i <= 6; ++i) note(j, frame_field(i).c[j]);
    }
    Matrix<QSqrt2> m(rows.size(), 7);
    for (size_t r = 0; r < rows.size(); ++r) {
        auto [comp, mono] = rows[r];
        for (int i = 1; i <= 6; ++i) m(r, i - 1) = frame_field(i).c[comp].coeff(mono);
        m(r, 6) = red[comp].coeff(mono);
    }
    std::vector<size_t> pivots = rref(m);
    if (!pivots.empty() && pivots.back() == 6) return std::nullopt;  // inconsistent
    std::array<QSqrt2, 6> coeffs{};
    for (size_t r = 0; r < pivots.size(); ++r) coeffs[pivots[r]] = m(r, 6);
    // rref certifies consistency only if every non-pivot row vanished:
    // verify the candidate exactly against the unreduced statement.
    for (int j = 0; j < 4; ++j) {
        RealPoly resid = red[j];
        for (int i = 0; i < 6; ++i) resid -= frame_field(i + 1).c[j] * coeffs[i];
        if (!reduce_mod_sphere(resid).is_zero()) return std::nullopt;
    }
    return coeffs;
}

/// Lie bracket of two ambient polynomial fields, expressed in the frame.
inline std::array<QSqrt2, 6> vf_bracket(const FrameField& x, const FrameField& y) {
    std::array<RealPoly, 4> b;
    for (int j = 0; j < 4; ++j) b[j] = vf_apply(x, y.c[j]) - vf_apply(y, x.c[j]);
    auto r = express_in_frame(b);
    if (!r) throw std::domain_error("vf_bracket: result not in the frame span");
    return *r;
}

/// Levi-Civita connection of S^3(sqrt 2): flat derivative followed by
/// tangential projection (radial part <.,x> x / 2), in the frame.
inline std::array<QSqrt2, 6> levi_civita(const FrameField& x, const FrameField& y) {
    std::array<RealPoly, 4> d;
    for (int j = 0; j < 4; ++j) d[j] = vf_apply(x, y.c[j]);
    RealPoly radial;
    for (int m = 0; m < 4; ++m) radial += d[m] * RealPoly::variable(m);
    for (int j = 0; j < 4; ++j)
        d[j] -= radial * RealPoly::variable(j) * QSqrt2(Rational(1, 2));
    auto r = express_in_frame(d);
    if (!r) throw std::domain_error("levi_civita: result not in the frame span");
    return *r;
}

// ---------------------------------------------------------------------------
// Basic horizontal fields (section 4.1 criterion).

/// X = f2 X2 + f3 X3 is basic iff Delta^V f2 = 2 f2 and f3 = -(X1 f2)/sqrt2,
/// both as identities mod the sphere ideal.
inline bool is_basic(const RealPoly& f2, const RealPoly& f3) {
    RealPoly cond1 = vertical_laplacian_apply(f2) - f2 * QSqrt2(2);
    if (!reduce_mod_sphere(cond1).is_zero()) return false;
    RealPoly cond2 = f3 + vf_apply(frame_field(1), f2) * QSqrt2(Rational(0), Rational(1, 2));
    return reduce_mod_sphere(cond2).is_zero();
}

// ---------------------------------------------------------------------------
// Geometry verification reports.

struct GeometryCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct GeometryReport {
    std::vector<GeometryCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    void add(const std::string& name, bool pass, const std::string& detail = "") {
        checks.push_back({name, pass, detail});
    }
    void add_zero(const std::string& name, const RealPoly& residual) {
        RealPoly r = reduce_mod_sphere(residual);
        add(name, r.is_zero(), r.is_zero() ? "" : "residual = " + format_poly(r));
    }
};

/// Submersion identities of the Hopf map, all mod the sphere ideal.
inline GeometryReport submersion_checks() {
    GeometryReport rep;
    const auto& psi = HopfMap::instance().psi;
    const FrameField &x1 = frame_field(1), &x2 = frame_field(2), &x3 = frame_field(3);

    RealDiffOp lap = euclidean_laplacian();
    for (int a = 0; a < 3; ++a) {
        rep.add("psi" + std::to_string(a + 1) + " harmonic", lap.apply(psi[a]).is_zero());
        rep.add_zero("X1 psi" + std::to_string(a + 1) + " = 0", vf_apply(x1, psi[a]));
    }

    RealPoly radius2;
    for (int a = 0; a < 3; ++a) radius2 += psi[a] * psi[a];
    rep.add_zero("sum psi_a^2 = 1/2", radius2 - RealPoly(QSqrt2(Rational(1, 2))));

    RealPoly n22, n33, n23;
    for (int a = 0; a < 3; ++a) {
        RealPoly d2 = vf_apply(x2, psi[a]), d3 = vf_apply(x3, psi[a]);
        n22 += d2 * d2;
        n33 += d3 * d3;
        n23 += d2 * d3;
    }
    rep.add_zero("|dpsi(X2)|^2 = 1", n22 - RealPoly(QSqrt2(1)));
    rep.add_zero("|dpsi(X3)|^2 = 1", n33 - RealPoly(QSqrt2(1)));
    rep.add_zero("<dpsi(X2), dpsi(X3)> = 0", n23);

    // e(psi) = (|dpsi X2|^2 + |dpsi X3|^2)/2
    rep.add_zero("e(psi) = 1",
                 (n22 + n33) * QSqrt2(Rational(1, 2)) - RealPoly(QSqrt2(1)));

    // psi-relatedness: X4 -> Y1, X5 -> Y2, X6 -> Y3 with
    // Y1 = sqrt2(-y2, y1, 0), Y2 = sqrt2(y3, 0, -y1), Y3 = sqrt2(0, -y3, y2).
    QSqrt2 s2 = QSqrt2::sqrt2();
    std::array<std::array<RealPoly, 3>, 3> y_pullback;
    y_pullback[0] = {-psi[1] * s2, psi[0] * s2, RealPoly()};
    y_pullback[1] = {psi[2] * s2, RealPoly(), -psi[0] * s2};
    y_pullback[2] = {RealPoly(), -psi[2] * s2, psi[1] * s2};
    for (int i = 0; i < 3; ++i) {
        const FrameField& xi = frame_field(4 + i);
        for (int a = 0; a < 3; ++a)
            rep.add_zero("X" + std::to_string(4 + i) + " psi" + std::to_string(a + 1) +
                             " = Y" + std::to_string(i + 1) + "^" + std::to_string(a + 1) +
                             " o psi",
                         vf_apply(xi, psi[a]) - y_pullback[i][a]);
    }

    // Orthonormal global frame {X1, X2, X3}.
    for (int i = 1; i <= 3; ++i)
        for (int j = i; j <= 3; ++j) {
            RealPoly dot = pointwise_dot(frame_field(i).c, frame_field(j).c);
            RealPoly expect = i == j ? RealPoly(QSqrt2(1)) : RealPoly();
            rep.add_zero("<X" + std::to_string(i) + ", X" + std::to_string(j) + "> = " +
                             (i == j ? "1" : "0"),
                         dot - expect);
        }

    // Normal section checks.
    const auto& eta = NormalSection::instance().c;
    rep.add_zero("|eta|^2 = 1", pointwise_dot(eta, eta) - RealPoly(QSqrt2(1)));
    for (int i = 2; i <= 3; ++i) {
        std::array<RealPoly, 4> dphi;
        for (int a = 0; a < 3; ++a) dphi[a] = vf_apply(frame_field(i), psi[a]);
        dphi[3] = RealPoly();
        rep.add_zero("<eta, dphi(X" + std::to_string(i) + ")> = 0", pointwise_dot(eta, dphi));
    }

    // Coarea volume identity, symbolically: vol S^3(sqrt2) = 4 sqrt2 pi^2,
    // vol S^2(1/sqrt2) = 2 pi, and the fibre factor is 2 sqrt2 pi.
    QSqrt2 vol_s3(Rational(0), Rational(4));  // coefficient of pi^2
    QSqrt2 vol_s2(Rational(2));               // coefficient of pi^1
    QSqrt2 fibre(Rational(0), Rational(2));   // coefficient of pi^1
    bool coarea = (vol_s3 == fibre * vol_s2) && (2 == 1 + 1);
    rep.add("coarea: vol S3(sqrt2) = 2 sqrt2 pi * vol S2(1/sqrt2)", coarea);

    return rep;
}

/// Levi-Civita and bracket table of Proposition "connection on S^3(sqrt2)".
inline GeometryReport connection_table_report() {
    GeometryReport rep;
    QSqrt2 inv_s2(Rational(0), Rational(1, 2));  // 1/sqrt2
    QSqrt2 s2 = QSqrt2::sqrt2();

    // expected[i][j] = (frame index, coefficient) for nabla_{X_i} X_j, 0 = zero.
    struct Entry {
        int frame;
        QSqrt2 coeff;
    };
    const Entry zero{0, QSqrt2()};
    std::array<std::array<Entry, 3>, 3> nabla{{
        {{zero, {3, -inv_s2}, {2, inv_s2}}},
        {{{3, inv_s2}, zero, {1, -inv_s2}}},
        {{{2, -inv_s2}, {1, inv_s2}, zero}},
    }};
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            auto got = levi_civita(frame_field(i), frame_field(j));
            std::array<QSqrt2, 6> expect{};
            const Entry& e = nabla[i - 1][j - 1];
            if (e.frame != 0) expect[e.frame - 1] = e.coeff;
            rep.add("nabla_X" + std::to_string(i) + " X" + std::to_string(j), got == expect);
        }

    auto bracket_check = [&](int i, int j, int target, const QSqrt2& coeff) {
        auto got = vf_bracket(frame_field(i), frame_field(j));
        std::array<QSqrt2, 6> expect{};
        expect[target - 1] = coeff;
        rep.add("[X" + std::to_string(i) + ", X" + std::to_string(j) + "]", got == expect);
    };
    bracket_check(1, 2, 3, -s2);
    bracket_check(2, 3, 1, -s2);
    bracket_check(3, 1, 2, -s2);

    // Torsion-freeness spot check: nabla_X3 X2 - nabla_X2 X3 = [X3, X2].
    auto lhs1 = levi_civita(frame_field(3), frame_field(2));
    auto lhs2 = levi_civita(frame_field(2), frame_field(3));
    auto rhs = vf_bracket(frame_field(3), frame_field(2));
    std::array<QSqrt2, 6> diff{};
    for (int i = 0; i < 6; ++i) diff[i] = lhs1[i] - lhs2[i];
    rep.add("torsion-free: nabla_X3 X2 - nabla_X2 X3 = [X3, X2]", diff == rhs);

    return rep;
}

// ---------------------------------------------------------------------------
// Monte-Carlo oracle for the moment formula (CLI `oracle-check`).

struct MonteCarloMoment {
    double mean = 0;
    double std_error = 0;
    long samples = 0;
};

/// Uniform samples on S^3(sqrt 2) via normalized Gaussians (Box-Muller on a
/// splitmix64 stream; self-contained so runs reproduce across platforms).
inline MonteCarloMoment sphere_moment_monte_carlo(const std::array<int, 4>& alpha,
                                                  long samples, uint64_t seed) {
    uint64_t state = seed ? seed : 0x9e3779b97f4a7c15ULL;
    auto next_u64 = [&state]() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    auto unit = [&]() { return ((next_u64() >> 11) + 0.5) * 0x1.0p-53; };

    double sum = 0, sum_sq = 0;
    for (long s = 0; s < samples; ++s) {
        double g[4];
        for (int i = 0; i < 4; i += 2) {
            double u1 = unit(), u2 = unit();
            double r = std::sqrt(-2.0 * std::log(u1));
            g[i] = r * std::cos(2.0 * M_PI * u2);
            g[i + 1] = r * std::sin(2.0 * M_PI * u2);
        }
        double norm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
        double scale = std::sqrt(2.0) / norm;
        double v = 1;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < alpha[i]; ++j) v *= g[i] * scale;
        sum += v;
        sum_sq += v * v;
    }
    MonteCarloMoment out;
    out.samples = samples;
    out.mean = sum / samples;
    double var = (sum_sq / samples - out.mean * out.mean) / std::max<long>(1, samples - 1);
    out.std_error = std::sqrt(std::max(0.0, var));
    return out;
}

}  // namespace hopf
