#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "chainscope/extended_precision.hpp"
#include "chainscope/tridiagonal_eigen.hpp"
#include "oracles.hpp"

using namespace chainscope;

namespace {

double residual(const TridiagonalMatrix<double>& h, const Eigenpair<double>& p) {
    const std::size_t n = h.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double hv = h.diagonal[i] * p.vector[i];
        if (i > 0) hv += h.off_diagonal[i - 1] * p.vector[i - 1];
        if (i + 1 < n) hv += h.off_diagonal[i] * p.vector[i + 1];
        worst = std::max(worst, std::abs(hv - p.value * p.vector[i]));
    }
    return worst;
}

}  // namespace

TEST(Eigendecompose, SingleSite) {
    const auto pairs = eigendecompose(TridiagonalMatrix<double>({0.7}, {}));
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0].value, 0.7);
    EXPECT_EQ(pairs[0].vector, std::vector<double>{1.0});
}

TEST(Eigendecompose, TwoByTwo) {
    const auto pairs = eigendecompose(TridiagonalMatrix<double>({0.0, 0.0}, {1.0}));
    ASSERT_EQ(pairs.size(), 2u);
    EXPECT_NEAR(pairs[0].value, -1.0, 1e-15);
    EXPECT_NEAR(pairs[1].value, 1.0, 1e-15);
    EXPECT_NEAR(pairs[0].vector[0], 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(pairs[1].vector[0], 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Eigendecompose, HomogeneousClosedForm) {
    const std::size_t n = 100;
    const auto pairs = eigendecompose(build_hamiltonian(ChainSpec::homogeneous(n, 0.0, 1.0)));
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        // Ascending order is n = N..1.
        const double expected = 2.0 * std::cos(static_cast<double>(n - k) * std::numbers::pi / (n + 1.0));
        worst = std::max(worst, std::abs(pairs[k].value - expected));
    }
    EXPECT_LE(worst, 1e-10);
}

TEST(Eigendecompose, MatchesDenseJacobiAndContract) {
    oracle::Gen gen(21);
    for (int trial = 0; trial < 40; ++trial) {
        const auto spec = gen.chain(gen.size(2, 25), 0.2, 2.0, 1.5);
        const auto h = build_hamiltonian(spec);
        const auto pairs = eigendecompose(h);
        auto ref = oracle::jacobi_eigen(h.dense());
        std::vector<double> ref_sorted = ref.values;
        std::sort(ref_sorted.begin(), ref_sorted.end());
        const double norm = h.norm_inf();
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            EXPECT_NEAR(pairs[k].value, ref_sorted[k], 1e-12 * norm);
            if (k > 0) {
                EXPECT_LT(pairs[k - 1].value, pairs[k].value);
            }
            double nrm = 0.0;
            for (double x : pairs[k].vector) nrm += x * x;
            EXPECT_NEAR(nrm, 1.0, 1e-13);
            EXPECT_GE(pairs[k].vector[0], 0.0);
            EXPECT_LE(residual(h, pairs[k]), 1e-10 * norm);
        }
        // First components squared agree with the dense oracle.
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const auto j = static_cast<std::size_t>(
                std::min_element(ref.values.begin(), ref.values.end(),
                                 [&](double a, double b) {
                                     return std::abs(a - pairs[k].value) < std::abs(b - pairs[k].value);
                                 }) -
                ref.values.begin());
            EXPECT_NEAR(pairs[k].vector[0] * pairs[k].vector[0], ref.vectors[0][j] * ref.vectors[0][j], 1e-12);
        }
    }
}

TEST(EigenFirstRow, AgreesWithFullDecomposition) {
    oracle::Gen gen(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto h = build_hamiltonian(gen.chain(gen.size(1, 60), 0.3, 1.7, 1.0));
        const auto full = eigendecompose(h);
        const auto first = eigen_first_row(h);
        for (std::size_t k = 0; k < full.size(); ++k) {
            EXPECT_NEAR(first.values[k], full[k].value, 1e-13);
            EXPECT_NEAR(first.first_components[k], full[k].vector[0], 1e-12);
        }
    }
}

TEST(EigenFirstRow, MultiprecisionAgreesWithDouble) {
    const auto spec = oracle::Gen(4).chain(30, 0.5, 1.5, 0.5);
    const auto d = eigen_first_row(build_hamiltonian<double>(spec));
    ScopedPrecision precision(50);
    const auto m = eigen_first_row(build_hamiltonian<BigReal>(spec));
    for (std::size_t k = 0; k < d.values.size(); ++k) {
        EXPECT_NEAR(m.values[k].convert_to<double>(), d.values[k], 1e-13);
        EXPECT_NEAR(m.first_components[k].convert_to<double>(), d.first_components[k], 1e-12);
    }
}
