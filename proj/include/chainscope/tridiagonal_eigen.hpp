#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "chainscope/chain_model.hpp"
#include "chainscope/errors.hpp"

namespace chainscope {

template <class Real = double>
struct Eigenpair {
    Real value;
    std::vector<Real> vector;
};

namespace detail {

template <class Real>
Real hypot2(const Real& a, const Real& b) {
    using std::sqrt;
    return sqrt(a * a + b * b);
}

inline double hypot2(double a, double b) { return std::hypot(a, b); }

template <class Real>
Real copysign2(const Real& magnitude, const Real& sign_of) {
    using std::abs;
    return sign_of >= Real(0) ? Real(abs(magnitude)) : Real(-abs(magnitude));
}

/// Implicit-shift QL on a symmetric tridiagonal matrix (EISPACK tql2).
///
/// `d` holds the diagonal and is overwritten with unsorted eigenvalues.
/// `e[i]` couples sites i and i+1 and is destroyed. `z` is an
/// `rows x n` row-major block of the accumulated rotation matrix; pass the
/// identity for full eigenvectors or its first row only (`rows == 1`) when
/// just the first eigenvector components are needed, which keeps the cost
/// at O(n^2).
template <class Real>
void implicit_ql(std::vector<Real>& d, std::vector<Real> e, std::vector<Real>& z, std::size_t rows) {
    using std::abs;
    const std::size_t n = d.size();
    if (n <= 1) return;
    e.resize(n, Real(0));
    e[n - 1] = Real(0);

    Real norm(0);
    for (std::size_t i = 0; i < n; ++i) {
        Real row = abs(d[i]) + abs(e[i]);
        if (i > 0) row += abs(e[i - 1]);
        if (row > norm) norm = row;
    }
    const Real tol = std::numeric_limits<Real>::epsilon() * norm;
    constexpr int kMaxIterations = 60;

    for (std::size_t l = 0; l < n; ++l) {
        int iterations = 0;
        std::size_t m = l;
        for (;;) {
            for (m = l; m + 1 < n; ++m) {
                if (abs(e[m]) <= tol) break;
            }
            if (m == l) break;
            if (++iterations > kMaxIterations) {
                throw NumericalError("implicit_ql: no convergence for eigenvalue " + std::to_string(l));
            }
            // Wilkinson-type shift from the leading 2x2 block.
            Real g = (d[l + 1] - d[l]) / (Real(2) * e[l]);
            Real r = hypot2(g, Real(1));
            g = d[m] - d[l] + e[l] / (g + copysign2(r, g));
            Real s(1);
            Real c(1);
            Real p(0);
            bool underflow = false;
            for (std::size_t ii = m; ii-- > l;) {
                const std::size_t i = ii;
                Real f = s * e[i];
                const Real b = c * e[i];
                r = hypot2(f, g);
                e[i + 1] = r;
                if (r == Real(0)) {
                    d[i + 1] -= p;
                    e[m] = Real(0);
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + Real(2) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for (std::size_t k = 0; k < rows; ++k) {
                    Real& zi = z[k * n + i];
                    Real& zi1 = z[k * n + i + 1];
                    f = zi1;
                    zi1 = s * zi + c * f;
                    zi = c * zi - s * f;
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = Real(0);
        }
    }
}

inline void check_size(std::size_t n) {
    if (n == 0) throw ValidationError("eigendecompose: empty matrix");
}

}  // namespace detail

/// All eigenpairs of a symmetric tridiagonal matrix, eigenvalues ascending.
/// Eigenvectors are unit-norm with first component >= 0.
template <class Real>
std::vector<Eigenpair<Real>> eigendecompose(const TridiagonalMatrix<Real>& matrix) {
    const std::size_t n = matrix.size();
    detail::check_size(n);
    if (matrix.off_diagonal.size() + 1 != n) throw ValidationError("eigendecompose: inconsistent dimensions");

    std::vector<Real> d = matrix.diagonal;
    std::vector<Real> z(n * n, Real(0));
    for (std::size_t i = 0; i < n; ++i) z[i * n + i] = Real(1);
    detail::implicit_ql(d, matrix.off_diagonal, z, n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    std::vector<Eigenpair<Real>> pairs;
    pairs.reserve(n);
    for (std::size_t col : order) {
        Eigenpair<Real> pair{d[col], std::vector<Real>(n)};
        for (std::size_t row = 0; row < n; ++row) pair.vector[row] = z[row * n + col];
        if (pair.vector[0] < Real(0)) {
            for (auto& x : pair.vector) x = -x;
        }
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

/// Eigenvalues (ascending) together with the first component of each
/// eigenvector, |v_n[1]|. Equivalent to reading column 0 of
/// eigendecompose() but O(n^2) instead of O(n^3).
template <class Real>
struct FirstRowEigen {
    std::vector<Real> values;
    std::vector<Real> first_components;
};

template <class Real>
FirstRowEigen<Real> eigen_first_row(const TridiagonalMatrix<Real>& matrix) {
    using std::abs;
    const std::size_t n = matrix.size();
    detail::check_size(n);
    std::vector<Real> d = matrix.diagonal;
    std::vector<Real> z(n, Real(0));
    z[0] = Real(1);
    detail::implicit_ql(d, matrix.off_diagonal, z, 1);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    FirstRowEigen<Real> out;
    out.values.reserve(n);
    out.first_components.reserve(n);
    for (std::size_t col : order) {
        out.values.push_back(d[col]);
        out.first_components.push_back(abs(z[col]));
    }
    return out;
}

}  // namespace chainscope
