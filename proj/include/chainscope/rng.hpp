#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

namespace chainscope {

/// Identifies the generator, key derivation and variate transforms below.
/// Bump whenever any of them changes output for a given seed.
inline constexpr std::string_view kRngVersion = "philox4x32-10+splitmix64-key+polar-normal/v1";

/// SplitMix64 finalizer, used as a stable 64-bit hash.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Key for stream `stream` under `seed`.
constexpr std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

/// Counter-based Philox4x32 with 10 rounds (Salmon et al., SC'11).
///
/// Output i of a stream depends only on (key, i), so streams can be
/// generated in any order or in parallel with bit-identical results.
class Philox4x32 {
public:
    using result_type = std::uint32_t;
    using counter_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    explicit Philox4x32(std::uint64_t key = 0) noexcept
        : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (index_ == 4) {
            block_ = bijection(counter_, key_);
            increment();
            index_ = 0;
        }
        return block_[index_++];
    }

    /// The raw keyed bijection on a 128-bit counter.
    static constexpr counter_type bijection(counter_type ctr, key_type key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    void increment() noexcept {
        for (auto& word : counter_) {
            if (++word != 0) break;
        }
    }

    key_type key_;
    counter_type counter_{};
    counter_type block_{};
    int index_ = 4;
};

/// Uniform double on [0, 1) with 53 random bits.
template <class Engine>
double uniform01(Engine& engine) {
    const std::uint64_t hi = engine() >> 5;
    const std::uint64_t lo = engine() >> 6;
    return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
}

/// Uniform double on [low, high]; exactly `low` when the interval is degenerate.
template <class Engine>
double uniform_in(Engine& engine, double low, double high) {
    const double u = uniform01(engine);
    if (low == high) return low;
    return low + (high - low) * u;
}

/// Standard normal variates by the Marsaglia polar method.
///
/// Both variates of each accepted pair are used, first `u*f` then `v*f`.
/// Unlike std::normal_distribution the sequence is fixed across standard
/// libraries (up to last-ulp differences in std::log).
class NormalSampler {
public:
    template <class Engine>
    double operator()(Engine& engine) {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        double v = 0.0;
        double s = 0.0;
        do {
            u = 2.0 * uniform01(engine) - 1.0;
            v = 2.0 * uniform01(engine) - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

private:
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace chainscope
