#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hopf/diffop.hpp"
#include "hopf/harmonic.hpp"

namespace hopf {

/// The sl(2, C) operators acting on C[z, zbar, w, wbar], plus the commuting
/// operators used to split H^k: every bracket relation is verified exactly
/// at construction.
struct Sl2Ops {
    CDiffOp e, f, h, lambda, delta;

    static const Sl2Ops& instance() {
        static const Sl2Ops ops = build();
        return ops;
    }

    static Sl2Ops build() {
        GaussQSqrt2 i = GaussQSqrt2::i();
        Sl2Ops o;
        // e = i (wb d_z - zb d_w), f = i (w d_zb - z d_wb)
        o.e = CDiffOp::term(CPoly::variable(3) * i, {1, 0, 0, 0}) +
              CDiffOp::term(CPoly::variable(1) * (-i), {0, 0, 1, 0});
        o.f = CDiffOp::term(CPoly::variable(2) * i, {0, 1, 0, 0}) +
              CDiffOp::term(CPoly::variable(0) * (-i), {0, 0, 0, 1});
        // h = zb d_zb - z d_z + wb d_wb - w d_w
        o.h = CDiffOp::term(CPoly::variable(1), {0, 1, 0, 0}) -
              CDiffOp::term(CPoly::variable(0), {1, 0, 0, 0}) +
              CDiffOp::term(CPoly::variable(3), {0, 0, 0, 1}) -
              CDiffOp::term(CPoly::variable(2), {0, 0, 1, 0});
        // Lambda = (z d_z - zb d_zb) - (w d_w - wb d_wb)
        o.lambda = CDiffOp::term(CPoly::variable(0), {1, 0, 0, 0}) -
                   CDiffOp::term(CPoly::variable(1), {0, 1, 0, 0}) -
                   CDiffOp::term(CPoly::variable(2), {0, 0, 1, 0}) +
                   CDiffOp::term(CPoly::variable(3), {0, 0, 0, 1});
        // Delta = -4 (d_z d_zb + d_w d_wb)
        o.delta = (CDiffOp::term(CPoly(GaussQSqrt2(1)), {1, 1, 0, 0}) +
                   CDiffOp::term(CPoly(GaussQSqrt2(1)), {0, 0, 1, 1})) *
                  GaussQSqrt2(-4);
        o.verify();
        return o;
    }

    void verify() const {
        auto expect_zero = [](const CDiffOp& d, const std::string& what) {
            if (!d.is_zero()) throw std::logic_error("Sl2Ops: relation failed: " + what);
        };
        expect_zero(commutator(e, f) - h, "[e,f] = h");
        expect_zero(commutator(h, e) - e * GaussQSqrt2(2), "[h,e] = 2e");
        expect_zero(commutator(h, f) + f * GaussQSqrt2(2), "[h,f] = -2f");
        expect_zero(commutator(delta, e), "[Delta,e] = 0");
        expect_zero(commutator(delta, f), "[Delta,f] = 0");
        expect_zero(commutator(delta, h), "[Delta,h] = 0");
        expect_zero(commutator(lambda, f), "[Lambda,f] = 0");

        // h = i sqrt2 X1 in the complex chart.
        CDiffOp x1c = diffop_to_complex(frame_diffop(1));
        GaussQSqrt2 i_sqrt2(QSqrt2(), QSqrt2::sqrt2());
        expect_zero(h - x1c * i_sqrt2, "h = i sqrt2 X1");

        // Delta^V = -X1 X1 = h^2 / 2 as an exact operator identity.
        RealDiffOp x1 = frame_diffop(1);
        CDiffOp vertical = diffop_to_complex(x1.compose(x1)) * GaussQSqrt2(-1);
        expect_zero(vertical - h.compose(h) * GaussQSqrt2(QSqrt2(Rational(1, 2))),
                    "Delta^V = h^2/2");
    }
};

/// Highest weight vectors f_n = zbar^n wbar^(k-n), n = 0..k.
inline std::vector<CPoly> highest_weight_vectors(int k) {
    std::vector<CPoly> out;
    for (int n = 0; n <= k; ++n) {
        Monomial m;
        m.e[1] = n;
        m.e[3] = k - n;
        out.push_back(CPoly::monomial(m, GaussQSqrt2(1)));
    }
    return out;
}

struct WeightChain {
    int n = 0;                   // highest weight vector index
    std::vector<CPoly> vectors;  // f^l(f_n), l = 0..k (unnormalized)
};

struct WeightDecomposition {
    int k = 0;
    std::vector<WeightChain> submodules;
    /// weight of chain slot l is k - 2l, each with multiplicity k+1
    int weight(int l) const { return k - 2 * l; }
};

/// Splits H^k into the k+1 lowering chains and certifies every structural
/// claim: annihilation by e and Delta, the h and Lambda eigenvalues along
/// chains, chain termination, and directness of the sum by exact rank.
inline WeightDecomposition decompose(int k) {
    const Sl2Ops& ops = Sl2Ops::instance();
    WeightDecomposition dec;
    dec.k = k;
    auto hwv = highest_weight_vectors(k);
    for (int n = 0; n <= k; ++n) {
        const CPoly& fn = hwv[n];
        if (!ops.delta.apply(fn).is_zero() || !ops.e.apply(fn).is_zero())
            throw std::logic_error("decompose: f_n is not a highest weight vector");
        if (ops.h.apply(fn) != fn * GaussQSqrt2(k))
            throw std::logic_error("decompose: h(f_n) != k f_n");
        WeightChain chain;
        chain.n = n;
        CPoly v = fn;
        for (int l = 0; l <= k; ++l) {
            if (v.is_zero()) throw std::logic_error("decompose: chain died early");
            if (ops.h.apply(v) != v * GaussQSqrt2(k - 2 * l))
                throw std::logic_error("decompose: wrong h-weight along chain");
            if (ops.lambda.apply(v) != v * GaussQSqrt2(k - 2 * n))
                throw std::logic_error("decompose: wrong Lambda eigenvalue along chain");
            chain.vectors.push_back(v);
            v = ops.f.apply(v);
        }
        if (!v.is_zero()) throw std::logic_error("decompose: f^(k+1)(f_n) != 0");
        dec.submodules.push_back(std::move(chain));
    }

    // Direct sum: the (k+1)^2 chain vectors must have full rank.
    std::vector<Monomial> monos = monomials_of_degree(k);
    std::map<Monomial, size_t> index;
    for (size_t i = 0; i < monos.size(); ++i) index[monos[i]] = i;
    Matrix<GaussQSqrt2> rows(static_cast<size_t>((k + 1) * (k + 1)), monos.size());
    size_t r = 0;
    for (const auto& chain : dec.submodules)
        for (const auto& v : chain.vectors) {
            for (const auto& [m, c] : v.terms()) rows(r, index.at(m)) = c;
            ++r;
        }
    if (rank(rows) != static_cast<size_t>((k + 1) * (k + 1)))
        throw std::logic_error("decompose: chain vectors are not independent");
    return dec;
}

/// Vertical Laplacian spectrum via Delta^V = h^2/2 on the weight spaces.
inline std::vector<RationalEigenvalue> vertical_spectrum_via_sl2(int k) {
    WeightDecomposition dec = decompose(k);
    std::map<Rational, int> agg;
    for (const auto& chain : dec.submodules)
        for (int l = 0; l <= k; ++l) {
            long w = k - 2 * l;
            agg[Rational(w * w, 2)] += 1;
        }
    std::vector<RationalEigenvalue> out;
    for (const auto& [value, mult] : agg) out.push_back({value, mult});
    return out;
}

/// Both routes to the vertical spectrum; throws when they disagree.
inline std::vector<RationalEigenvalue> vertical_spectrum_both(int k, OperatorCache& cache) {
    auto brute = vertical_spectrum_bruteforce(k, cache);
    auto sl2 = vertical_spectrum_via_sl2(k);
    if (brute.size() != sl2.size())
        throw std::logic_error("vertical spectrum: methods disagree on eigenvalue count");
    for (size_t i = 0; i < brute.size(); ++i)
        if (brute[i].value != sl2[i].value || brute[i].multiplicity != sl2[i].multiplicity)
            throw std::logic_error("vertical spectrum: methods disagree at k=" + std::to_string(k));
    return brute;
}

}  // namespace hopf
