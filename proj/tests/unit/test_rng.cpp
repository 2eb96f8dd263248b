#include <gtest/gtest.h>

#include <set>

#include "rispart/rng.hpp"

using namespace rispart;

TEST(Rng, DerivedSeedsArePureAndDistinct) {
    EXPECT_EQ(derive_seed(1, 2, 3, StreamPurpose::channel), derive_seed(1, 2, 3, StreamPurpose::channel));
    std::set<std::uint64_t> seen;
    for (std::uint64_t point = 0; point < 20; ++point) {
        for (std::uint64_t trial = 0; trial < 50; ++trial) {
            for (auto p : {StreamPurpose::channel, StreamPurpose::partition, StreamPurpose::symbols}) {
                seen.insert(derive_seed(1, point, trial, p));
            }
        }
    }
    EXPECT_EQ(seen.size(), 20u * 50u * 3u);
    EXPECT_NE(derive_seed(1, 0, 0, StreamPurpose::channel), derive_seed(2, 0, 0, StreamPurpose::channel));
}

TEST(Rng, StreamsReplay) {
    RandomStream a(5, 1, 9, StreamPurpose::symbols);
    RandomStream b(5, 1, 9, StreamPurpose::symbols);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.normal(), b.normal());
}

TEST(Rng, ComplexNormalVariance) {
    RandomStream s(42);
    const int n = 200000;
    double power = 0.0, re2 = 0.0;
    std::complex<double> mean = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto z = s.complex_normal(2.0);
        power += std::norm(z);
        re2 += z.real() * z.real();
        mean += z;
    }
    EXPECT_NEAR(power / n, 2.0, 0.02);
    EXPECT_NEAR(re2 / n, 1.0, 0.015);
    EXPECT_LT(std::abs(mean / static_cast<double>(n)), 0.01);
}

TEST(Rng, UniformIntStaysInRange) {
    RandomStream s(3);
    for (int i = 0; i < 1000; ++i) {
        const int k = s.uniform_int(-2, 4);
        EXPECT_GE(k, -2);
        EXPECT_LE(k, 4);
    }
}
