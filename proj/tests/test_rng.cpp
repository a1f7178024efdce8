#include "gglink/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace gglink;

TEST(Rng, SameSeedSameSequence) {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, UniformIntStaysInRange) {
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) EXPECT_LT(rng.uniform_int(7), 7u);
    EXPECT_EQ(rng.uniform_int(1), 0u);
}

TEST(Rng, UniformIntRoughlyUniform) {
    Rng rng(2);
    std::vector<int> counts(10, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++counts[rng.uniform_int(10)];
    for (int c : counts) {
        EXPECT_GT(c, draws / 10 - 600);
        EXPECT_LT(c, draws / 10 + 600);
    }
}

TEST(Rng, Uniform01InHalfOpenInterval) {
    Rng rng(3);
    for (int i = 0; i < 10000; ++i) {
        const double x = rng.uniform01();
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
    }
}

TEST(Rng, NormalMomentsApproximatelyStandard) {
    Rng rng(4);
    const int n = 50000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    EXPECT_NEAR(mean, 0.0, 0.02);
    EXPECT_NEAR(var, 1.0, 0.03);
}

TEST(Rng, ShuffleIsDeterministicPermutation) {
    std::vector<int> v1{0, 1, 2, 3, 4, 5, 6, 7};
    std::vector<int> v2 = v1;
    Rng a(9), b(9);
    a.shuffle(v1);
    b.shuffle(v2);
    EXPECT_EQ(v1, v2);
    std::sort(v2.begin(), v2.end());
    EXPECT_EQ(v2, (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7}));
}

TEST(Rng, DerivedSeedsDifferByStreamAndIndex) {
    const auto s1 = derive_seed(5, rng_stream::kEpochNegatives, 1);
    const auto s2 = derive_seed(5, rng_stream::kEpochNegatives, 2);
    const auto s3 = derive_seed(5, rng_stream::kEpochShuffle, 1);
    EXPECT_NE(s1, s2);
    EXPECT_NE(s1, s3);
    EXPECT_EQ(s1, derive_seed(5, rng_stream::kEpochNegatives, 1));
}
