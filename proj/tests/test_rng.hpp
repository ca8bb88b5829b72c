#pragma once

#include <cstdint>

#include "hopf/poly.hpp"
#include "hopf/qsqrt2.hpp"
#include "hopf/rational.hpp"

namespace hopf_test {

// Deterministic splitmix64; property tests must reproduce bit-for-bit.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // in [lo, hi]
    long uniform(long lo, long hi) {
        return lo + static_cast<long>(next() % static_cast<uint64_t>(hi - lo + 1));
    }

    hopf::Rational rational(long max_abs_num = 12, long max_den = 7) {
        return hopf::Rational(uniform(-max_abs_num, max_abs_num), uniform(1, max_den));
    }

    hopf::QSqrt2 qsqrt2(long max_abs_num = 12, long max_den = 7) {
        return hopf::QSqrt2(rational(max_abs_num, max_den), rational(max_abs_num, max_den));
    }

    hopf::GaussQSqrt2 gauss(long max_abs_num = 8, long max_den = 5) {
        return hopf::GaussQSqrt2(qsqrt2(max_abs_num, max_den), qsqrt2(max_abs_num, max_den));
    }

    double unit_double() { return (next() >> 11) * 0x1.0p-53; }

    hopf::RealPoly real_poly(int max_degree, int terms, long max_abs_num = 6, long max_den = 4) {
        hopf::RealPoly p;
        for (int t = 0; t < terms; ++t) {
            hopf::Monomial m;
            int deg = static_cast<int>(uniform(0, max_degree));
            for (int d = 0; d < deg; ++d) m.e[uniform(0, 3)] += 1;
            p.add_term(m, qsqrt2(max_abs_num, max_den));
        }
        return p;
    }

    hopf::CPoly cpoly(int max_degree, int terms, long max_abs_num = 4, long max_den = 3) {
        hopf::CPoly p;
        for (int t = 0; t < terms; ++t) {
            hopf::Monomial m;
            int deg = static_cast<int>(uniform(0, max_degree));
            for (int d = 0; d < deg; ++d) m.e[uniform(0, 3)] += 1;
            p.add_term(m, gauss(max_abs_num, max_den));
        }
        return p;
    }

private:
    uint64_t state_;
};

}  // namespace hopf_test
