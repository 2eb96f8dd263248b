#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "rispart/error.hpp"
#include "rispart/partition.hpp"

using namespace rispart;

TEST(Gains, Examples) {
    const std::vector<Complex> zero(3);
    for (double g : element_gains(zero, zero)) EXPECT_EQ(g, 0.0);
    const std::vector<Complex> v{{3.0, 4.0}};
    const std::vector<Complex> g{{1.0, 0.0}};
    EXPECT_DOUBLE_EQ(element_gains(v, g)[0], 5.0);
    EXPECT_THROW(element_gains(v, zero), InvalidArgument);
}

TEST(PartitionSorted, ManualExample) {
    const std::vector<double> gains{3, 1, 2};
    const auto p = partition_sorted(gains, 1);
    EXPECT_EQ(p.bf_set, (std::vector<int>{0, 2}));
    EXPECT_EQ(p.id_set, (std::vector<int>{1}));
}

TEST(PartitionSorted, TiesGoToLowerIndex) {
    const std::vector<double> gains(4, 1.0);
    const auto p = partition_sorted(gains, 2);
    EXPECT_EQ(p.bf_set, (std::vector<int>{0, 1}));
    EXPECT_EQ(p.id_set, (std::vector<int>{2, 3}));
}

TEST(PartitionSorted, DegenerateSplits) {
    const std::vector<double> gains{0.5, 0.1, 0.9};
    const auto all_id = partition_sorted(gains, 3);
    EXPECT_TRUE(all_id.bf_set.empty());
    EXPECT_EQ(all_id.id_set, (std::vector<int>{0, 1, 2}));
    const auto all_bf = partition_sorted(gains, 0);
    EXPECT_TRUE(all_bf.id_set.empty());
    EXPECT_THROW(partition_sorted(gains, 4), InvalidArgument);
    EXPECT_THROW(partition_sorted(gains, -1), InvalidArgument);
}

TEST(PartitionSorted, PropertiesOnRandomInputs) {
    for (std::uint64_t t = 0; t < 10000; ++t) {
        RandomStream s(17, 0, t, StreamPurpose::partition);
        const int n = s.uniform_int(1, 80);
        const int n_id = s.uniform_int(0, n);
        std::vector<double> gains(static_cast<std::size_t>(n));
        const bool ties = (t % 3) == 0;
        for (auto& g : gains) g = ties ? std::floor(s.uniform() * 4.0) : s.uniform();
        const auto p = partition_sorted(gains, n_id);
        ASSERT_NO_THROW(p.validate());
        ASSERT_EQ(p.n_id(), n_id);
        ASSERT_EQ(p.n_bf(), n - n_id);
        double min_bf = std::numeric_limits<double>::infinity();
        double max_id = -std::numeric_limits<double>::infinity();
        for (int i : p.bf_set) min_bf = std::min(min_bf, gains[static_cast<std::size_t>(i)]);
        for (int i : p.id_set) max_id = std::max(max_id, gains[static_cast<std::size_t>(i)]);
        ASSERT_GE(min_bf, max_id);
        for (int i : p.bf_set) {
            for (int j : p.id_set) {
                if (gains[static_cast<std::size_t>(i)] == gains[static_cast<std::size_t>(j)]) ASSERT_LT(i, j);
            }
        }
    }
}

TEST(PartitionSorted, PermutationEquivariant) {
    RandomStream s(23);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 30;
        std::vector<double> gains(n);
        for (auto& g : gains) g = s.uniform();  // distinct almost surely
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), s.engine());
        std::vector<double> permuted(n);
        for (int i = 0; i < n; ++i) permuted[static_cast<std::size_t>(perm[i])] = gains[static_cast<std::size_t>(i)];
        const auto p = partition_sorted(gains, 12);
        const auto q = partition_sorted(permuted, 12);
        std::vector<int> mapped;
        for (int i : p.bf_set) mapped.push_back(perm[static_cast<std::size_t>(i)]);
        std::sort(mapped.begin(), mapped.end());
        EXPECT_EQ(mapped, q.bf_set);
    }
}

TEST(PartitionRandom, Cardinality) {
    RandomStream s(5);
    const auto empty = partition_random(10, 0, s);
    EXPECT_TRUE(empty.id_set.empty());
    const auto half = partition_random(64, 32, s);
    EXPECT_EQ(half.n_id(), 32);
    EXPECT_NO_THROW(half.validate());
    EXPECT_THROW(partition_random(4, 5, s), InvalidArgument);
}

TEST(PartitionRandom, SubsetsAreUniform) {
    // 4 choose 2 = 6 subsets, each with probability 1/6
    std::map<std::vector<int>, int> counts;
    const int draws = 60000;
    for (int t = 0; t < draws; ++t) {
        RandomStream s(31, 0, static_cast<std::uint64_t>(t), StreamPurpose::partition);
        counts[partition_random(4, 2, s).id_set]++;
    }
    ASSERT_EQ(counts.size(), 6u);
    const double se = std::sqrt((1.0 / 6.0) * (5.0 / 6.0) / draws);
    for (const auto& [subset, c] : counts) {
        EXPECT_NEAR(static_cast<double>(c) / draws, 1.0 / 6.0, 5.0 * se);
    }
}

TEST(PartitionValidate, DetectsBrokenSets) {
    Partition p{{0, 1}, {1, 2}, 3};
    EXPECT_THROW(p.validate(), InvalidArgument);
    Partition q{{0}, {2}, 3};
    EXPECT_THROW(q.validate(), InvalidArgument);
    Partition r{{2, 0}, {1}, 3};
    EXPECT_THROW(r.validate(), InvalidArgument);
}
