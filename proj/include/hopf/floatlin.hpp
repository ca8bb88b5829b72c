#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hopf/matrix.hpp"

namespace hopf {

/// Plain double matrix for the floating-point eigenvalue path.
struct FMatrix {
    size_t n = 0;
    std::vector<double> a;

    FMatrix() = default;
    explicit FMatrix(size_t n_) : n(n_), a(n_ * n_, 0.0) {}

    double& operator()(size_t i, size_t j) { return a[i * n + j]; }
    double operator()(size_t i, size_t j) const { return a[i * n + j]; }
};

template <class T>
FMatrix to_float(const Matrix<T>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("to_float: not square");
    FMatrix f(m.rows());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) f(i, j) = m(i, j).to_double();
    return f;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
inline std::vector<double> jacobi_eigenvalues(FMatrix s, int max_sweeps = 60) {
    size_t n = s.n;
    if (n == 0) return {};
    if (n == 1) return {s(0, 0)};
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0;
        for (size_t p = 0; p < n; ++p)
            for (size_t q = p + 1; q < n; ++q) off += s(p, q) * s(p, q);
        if (off < 1e-26 * std::max<size_t>(1, n * n)) {
            std::vector<double> ev(n);
            for (size_t i = 0; i < n; ++i) ev[i] = s(i, i);
            std::sort(ev.begin(), ev.end());
            return ev;
        }
        for (size_t p = 0; p < n; ++p) {
            for (size_t q = p + 1; q < n; ++q) {
                double apq = s(p, q);
                if (apq == 0.0) continue;
                double app = s(p, p), aqq = s(q, q);
                double tau = (aqq - app) / (2.0 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t), sn = t * c;
                for (size_t k = 0; k < n; ++k) {
                    double skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (size_t k = 0; k < n; ++k) {
                    double spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
            }
        }
    }
    throw std::runtime_error("jacobi_eigenvalues: no convergence within sweep budget");
}

/// Eigenvalues of the operator with matrix M on a basis whose Gram matrix is
/// G (both exact). G is factored exactly as L D L^T first; the congruence to
/// a symmetric problem then runs in floating point.
template <class TM, class TG>
std::vector<double> generalized_float_spectrum(const Matrix<TM>& m, const Matrix<TG>& g) {
    size_t n = m.rows();
    if (m.cols() != n || g.rows() != n || g.cols() != n)
        throw std::invalid_argument("generalized_float_spectrum: shape mismatch");
    if (n == 0) return {};
    Matrix<TG> l;
    std::vector<TG> d;
    ldlt(g, l, d);

    FMatrix lf = to_float(l), mf = to_float(m);
    std::vector<double> df(n), dsqrt(n);
    for (size_t i = 0; i < n; ++i) {
        df[i] = d[i].to_double();
        dsqrt[i] = std::sqrt(df[i]);
    }

    // B = L^T M
    FMatrix b(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            double sum = 0;
            for (size_t k = i; k < n; ++k) sum += lf(k, i) * mf(k, j);
            b(i, j) = sum;
        }
    // A = B (L^T)^{-1}: back-substitute rows against the unit upper
    // triangular U = L^T (columns of U filled left to right).
    FMatrix a(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            double sum = b(i, j);
            for (size_t k = 0; k < j; ++k) sum -= a(i, k) * lf(j, k);
            a(i, j) = sum;
        }
    // S = D^{1/2} A D^{-1/2}, symmetric up to roundoff.
    FMatrix s(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) s(i, j) = dsqrt[i] * a(i, j) / dsqrt[j];
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            double v = 0.5 * (s(i, j) + s(j, i));
            s(i, j) = s(j, i) = v;
        }
    return jacobi_eigenvalues(std::move(s));
}

struct FloatCluster {
    double value = 0;
    int multiplicity = 0;
};

/// Groups sorted eigenvalues into clusters with the given absolute gap.
inline std::vector<FloatCluster> cluster_eigenvalues(const std::vector<double>& sorted,
                                                     double tol = 1e-9) {
    std::vector<FloatCluster> out;
    for (double v : sorted) {
        if (!out.empty() && std::fabs(v - (out.back().value)) <= tol) {
            auto& c = out.back();
            c.value = (c.value * c.multiplicity + v) / (c.multiplicity + 1);
            c.multiplicity += 1;
        } else {
            out.push_back({v, 1});
        }
    }
    return out;
}

}  // namespace hopf
