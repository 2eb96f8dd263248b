#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace rispart {

/// Independent sub-streams used by one Monte-Carlo trial. Keeping channel
/// draws on their own stream lets sorted and unsorted runs see identical
/// channels for the same (seed, point, trial).
enum class StreamPurpose : std::uint64_t {
    channel = 0,
    partition = 1,
    symbols = 2,
    pattern = 3,
    order_statistics = 4,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-style key -> engine seed. A pure function of its arguments.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point, std::uint64_t trial,
                          StreamPurpose purpose) noexcept;

/// Random source owned by exactly one worker at a time.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    RandomStream(std::uint64_t master, std::uint64_t point, std::uint64_t trial,
                 StreamPurpose purpose)
        : engine_(derive_seed(master, point, trial, purpose)) {}

    double normal() { return normal_(engine_); }

    /// Circularly symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance);

    double uniform() { return uniform_(engine_); }

    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(engine_);
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace rispart
