#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "chainscope/errors.hpp"
#include "chainscope/spectral.hpp"
#include "oracles.hpp"

using namespace chainscope;

TEST(EndSiteSpectrum, TwoSites) {
    const auto s = end_site_spectrum(ChainSpec({0.0, 0.0}, {1.0}));
    ASSERT_EQ(s.size(), 2u);
    EXPECT_TRUE(s.complete);
    EXPECT_NEAR(s.modes[0].lambda, -1.0, 1e-15);
    EXPECT_NEAR(s.modes[1].lambda, 1.0, 1e-15);
    EXPECT_NEAR(s.modes[0].weight, 0.5, 1e-15);
    EXPECT_NEAR(s.modes[1].weight, 0.5, 1e-15);
}

TEST(HomogeneousSpectrum, SmallCases) {
    const auto one = homogeneous_spectrum(1, 0.25, 1.0);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_NEAR(one.modes[0].lambda, 0.25, 1e-15);
    EXPECT_NEAR(one.modes[0].weight, 1.0, 1e-15);

    const auto two = homogeneous_spectrum(2, 0.0, 1.0);
    ASSERT_EQ(two.size(), 2u);
    EXPECT_NEAR(two.modes[0].lambda, -1.0, 1e-15);
    EXPECT_NEAR(two.modes[1].lambda, 1.0, 1e-15);
    EXPECT_NEAR(two.modes[0].weight, 0.5, 1e-15);
    EXPECT_NEAR(two.modes[1].weight, 0.5, 1e-15);
    EXPECT_THROW(homogeneous_spectrum(0, 0.0, 1.0), ValidationError);
    EXPECT_THROW(homogeneous_spectrum(3, 0.0, 0.0), ValidationError);
}

TEST(HomogeneousSpectrum, MatchesEigensolver) {
    for (std::size_t n : {6u, 37u, 100u}) {
        const auto closed = homogeneous_spectrum(n, 0.3, 0.8);
        const auto numeric = end_site_spectrum(ChainSpec::homogeneous(n, 0.3, 0.8));
        ASSERT_EQ(closed.size(), numeric.size());
        for (std::size_t k = 0; k < n; ++k) {
            EXPECT_NEAR(closed.modes[k].lambda, numeric.modes[k].lambda, 1e-10);
            EXPECT_NEAR(closed.modes[k].weight, numeric.modes[k].weight, 1e-10);
        }
    }
}

TEST(EndSiteSpectrum, MomentIdentitiesAgainstMatrixPowers) {
    oracle::Gen gen(31);
    for (int trial = 0; trial < 100; ++trial) {
        const auto spec = gen.chain(gen.size(1, 120), 0.2, 2.0, 1.0);
        const auto s = end_site_spectrum(spec);
        double m0 = 0.0, m1 = 0.0, m2 = 0.0;
        for (const auto& m : s.modes) {
            m0 += m.weight;
            m1 += m.lambda * m.weight;
            m2 += m.lambda * m.lambda * m.weight;
        }
        EXPECT_NEAR(m0, 1.0, 1e-10);
        EXPECT_NEAR(m1, oracle::end_moment(spec, 1), 1e-9);
        EXPECT_NEAR(m2, oracle::end_moment(spec, 2), 1e-9);
        EXPECT_NO_THROW(validate_spectrum(s));
    }
}

TEST(EndSiteSpectrum, PositiveWeightsSimpleSpectrumShiftCovariance) {
    oracle::Gen gen(32);
    for (int trial = 0; trial < 60; ++trial) {
        const auto spec = gen.chain(gen.size(2, 40), 0.5, 1.5, 0.5);
        const auto s = end_site_spectrum(spec);
        for (std::size_t k = 0; k < s.size(); ++k) {
            EXPECT_GT(s.modes[k].weight, 0.0);
            if (k > 0) {
                EXPECT_GT(s.modes[k].lambda - s.modes[k - 1].lambda, 0.0);
            }
        }
        const double c = gen.uniform(-3.0, 3.0);
        std::vector<double> shifted = spec.energies();
        for (auto& e : shifted) e += c;
        const auto t = end_site_spectrum(ChainSpec(shifted, spec.couplings()));
        for (std::size_t k = 0; k < s.size(); ++k) {
            EXPECT_NEAR(t.modes[k].lambda, s.modes[k].lambda + c, 1e-10);
            EXPECT_NEAR(t.modes[k].weight, s.modes[k].weight, 1e-10);
        }
    }
}

TEST(Synthesize, SingleModeIsConstant) {
    SpectralData<double> s{{{0.0, 1.0}}, true};
    const auto sig = synthesize_end_signal(s, 0.1, 64);
    for (const auto& x : sig.samples) {
        EXPECT_EQ(x.real(), 1.0);
        EXPECT_EQ(x.imag(), 0.0);
    }
}

TEST(Synthesize, SymmetricPairIsCosine) {
    SpectralData<double> s{{{-1.0, 0.5}, {1.0, 0.5}}, true};
    const double dt = 0.1;
    const auto sig = synthesize_end_signal(s, dt, 500);
    for (std::size_t k = 0; k < sig.samples.size(); ++k) {
        EXPECT_NEAR(sig.samples[k].real(), std::cos(static_cast<double>(k) * dt), 1e-14);
        EXPECT_NEAR(sig.samples[k].imag(), 0.0, 1e-14);
    }
}

TEST(Synthesize, StartsAtTotalWeightAndChecksNyquist) {
    const auto s = end_site_spectrum(oracle::Gen(3).chain(12, 0.5, 1.5, 0.3));
    const auto sig = synthesize_end_signal(s, 0.05, 8);
    EXPECT_NEAR(sig.samples[0].real(), 1.0, 1e-12);
    EXPECT_NEAR(sig.samples[0].imag(), 0.0, 1e-15);
    SpectralData<double> wide{{{4.0, 1.0}}, true};
    EXPECT_THROW(synthesize_end_signal(wide, 1.0, 16), ValidationError);
    EXPECT_THROW(synthesize_end_signal(wide, 0.0, 16), ValidationError);
}

TEST(Extract, IsolatedPeak) {
    SpectralData<double> s{{{0.3, 1.0}}, true};
    const double dt = 0.1;
    const auto sig = synthesize_end_signal(s, dt, 4000);  // T = 400
    const auto found = extract_spectrum(sig, 0.05);
    ASSERT_EQ(found.size(), 1u);
    EXPECT_FALSE(found.complete);
    EXPECT_LE(std::abs(found.modes[0].lambda - 0.3), 2 * std::numbers::pi / 400.0);
    EXPECT_NEAR(found.modes[0].weight, 1.0, 0.02);
}

TEST(Extract, SymmetricPair) {
    SpectralData<double> s{{{-1.0, 0.5}, {1.0, 0.5}}, true};
    const auto sig = synthesize_end_signal(s, 0.1, 4096);
    const auto found = extract_spectrum(sig, 0.05);
    ASSERT_EQ(found.size(), 2u);
    const double bin = 2 * std::numbers::pi / 409.6;
    EXPECT_LE(std::abs(found.modes[0].lambda + 1.0), bin);
    EXPECT_LE(std::abs(found.modes[1].lambda - 1.0), bin);
    EXPECT_NEAR(found.modes[0].weight, 0.5, 0.01);
    EXPECT_NEAR(found.modes[1].weight, 0.5, 0.01);
}

TEST(Extract, SixSiteHomogeneousChain) {
    const auto spec = ChainSpec::homogeneous(6, 0.0, 1.0);
    const auto exact = end_site_spectrum(spec);
    const auto grid = MeasurementGrid::for_bandwidth(build_hamiltonian(spec).norm_inf());
    const auto sig = synthesize_end_signal(exact, grid.dt, grid.n_samples);
    const auto found = extract_spectrum(sig, 0.01);
    ASSERT_EQ(found.size(), 6u);
    const double bin = 2 * std::numbers::pi / sig.duration();
    for (std::size_t k = 0; k < 6; ++k) {
        EXPECT_LE(std::abs(found.modes[k].lambda - exact.modes[k].lambda), bin);
        EXPECT_NEAR(found.modes[k].weight / exact.modes[k].weight, 1.0, 0.02);
    }
}

TEST(Extract, SubBinPairNeverReportedAsTwoPeaks) {
    const double dt = 0.1;
    const std::size_t n = 1024;
    const double bin = 2 * std::numbers::pi / (dt * n);
    SpectralData<double> s{{{0.0, 0.5}, {0.6 * bin, 0.5}}, true};
    const auto sig = synthesize_end_signal(s, dt, n);
    // Floor above the Hann sidelobes (about 3% of the merged line).
    try {
        EXPECT_EQ(extract_spectrum(sig, 0.1).size(), 1u);
    } catch (const NumericalError&) {
    }
    EXPECT_THROW(extract_spectrum(TimeSignal{0.1, {{1.0, 0.0}}}, 0.0), ValidationError);
}

TEST(Extract, RoundTripProperty) {
    oracle::Gen gen(77);
    const double dt = 0.05;
    const std::size_t n = 1 << 14;
    const double bin = 2 * std::numbers::pi / (dt * static_cast<double>(n));
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = gen.size(1, 8);
        SpectralData<double> s;
        s.complete = true;
        double lambda = gen.uniform(-25.0, -15.0);
        for (std::size_t k = 0; k < m; ++k) {
            s.modes.push_back({lambda, gen.uniform(0.5, 1.0)});
            lambda += gen.uniform(4.5 * bin, 600 * bin);
        }
        double min_weight = 1.0;
        for (const auto& mode : s.modes) min_weight = std::min(min_weight, mode.weight);
        const auto found = extract_spectrum(synthesize_end_signal(s, dt, n), 0.5 * min_weight);
        ASSERT_EQ(found.size(), m) << "trial " << trial;
        for (std::size_t k = 0; k < m; ++k) {
            EXPECT_LE(std::abs(found.modes[k].lambda - s.modes[k].lambda), bin) << "trial " << trial;
            EXPECT_NEAR(found.modes[k].weight / s.modes[k].weight, 1.0, 0.02) << "trial " << trial;
        }
    }
}
