#pragma once

// Test-only reference computations, independent of the library's code paths.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "chainscope/chain_model.hpp"
#include "chainscope/rng.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

struct DenseEigen {
    std::vector<double> values;  // unsorted
    Dense vectors;               // column j is the eigenvector of values[j]
};

/// Cyclic Jacobi rotations on a dense symmetric matrix.
inline DenseEigen jacobi_eigen(Dense a) {
    const std::size_t n = a.size();
    Dense v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    DenseEigen out;
    for (std::size_t i = 0; i < n; ++i) out.values.push_back(a[i][i]);
    out.vectors = v;
    return out;
}

/// (H^k)_{11} by repeated dense mat-vec on e_1.
inline double end_moment(const chainscope::ChainSpec& spec, int power) {
    const std::size_t n = spec.n_sites();
    std::vector<double> x(n, 0.0);
    x[0] = 1.0;
    for (int p = 0; p < power; ++p) {
        std::vector<double> y(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] += spec.energies()[i] * x[i];
            if (i + 1 < n) {
                y[i] += spec.couplings()[i] * x[i + 1];
                y[i + 1] += spec.couplings()[i] * x[i];
            }
        }
        x = y;
    }
    return x[0];
}

/// Small generator for randomized property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(chainscope::derive_stream_key(seed, 0xC0FFEE)) {}
    double uniform(double lo, double hi) { return chainscope::uniform_in(engine_, lo, hi); }
    std::size_t size(std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(chainscope::uniform01(engine_) * static_cast<double>(hi - lo + 1));
    }
    chainscope::ChainSpec chain(std::size_t n, double j_lo, double j_hi, double eps_span) {
        std::vector<double> e(n), j(n - 1);
        for (auto& x : e) x = uniform(-eps_span, eps_span);
        for (auto& x : j) x = uniform(j_lo, j_hi);
        return chainscope::ChainSpec(e, j);
    }

private:
    chainscope::Philox4x32 engine_;
};

}  // namespace oracle
