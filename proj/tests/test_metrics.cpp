#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "chainscope/errors.hpp"
#include "chainscope/metrics.hpp"

using namespace chainscope;

TEST(Distance, IdenticalIsFullLength) {
    const std::vector<double> j(49, 1.0);
    EXPECT_EQ(reconstruction_distance(j, j, 0.05), 49u);
}

TEST(Distance, StopsBeforeFirstDeviation) {
    std::vector<double> truth(49, 1.0), est(49, 1.0);
    est[16] = 1.2;
    EXPECT_EQ(reconstruction_distance(truth, est, 0.05), 16u);
    est[16] = 1.04;
    EXPECT_EQ(reconstruction_distance(truth, est, 0.05), 49u);
}

TEST(Distance, NaNCountsAsDeviation) {
    std::vector<double> truth(10, 2.0), est(10, 2.0);
    est[3] = NAN;
    EXPECT_EQ(reconstruction_distance(truth, est, 0.5), 3u);
}

TEST(Distance, Errors) {
    EXPECT_THROW(reconstruction_distance({1.0, 1.0}, {1.0}, 0.05), ValidationError);
    EXPECT_THROW(reconstruction_distance({1.0}, {1.0}, 0.0), ValidationError);
}

TEST(Distance, MonotoneInTolerance) {
    const std::vector<double> truth{1.0, 1.0, 1.0, 1.0, 1.0};
    const std::vector<double> est{1.01, 0.97, 1.06, 1.2, 1.0};
    std::size_t prev = 0;
    for (double tol : {0.005, 0.02, 0.04, 0.07, 0.3}) {
        const auto d = reconstruction_distance(truth, est, tol);
        EXPECT_GE(d, prev);
        prev = d;
    }
    EXPECT_EQ(prev, 5u);
}

TEST(MaxRelativeError, Basics) {
    EXPECT_NEAR(max_relative_error({2.0, 4.0}, {2.2, 4.0}), 0.1, 1e-15);
    EXPECT_TRUE(std::isinf(max_relative_error({1.0}, {})));
    EXPECT_TRUE(std::isinf(max_relative_error({1.0, 1.0}, {NAN, 1.5})));
}

TEST(PaddedEstimates, PadsAndTruncates) {
    const auto p = padded_estimates({1.0, 2.0}, 4);
    ASSERT_EQ(p.size(), 4u);
    EXPECT_EQ(p[1], 2.0);
    EXPECT_TRUE(std::isnan(p[3]));
    EXPECT_EQ(padded_estimates({1.0, 2.0, 3.0}, 2).size(), 2u);
}
