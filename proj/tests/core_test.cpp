#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "hsgd/core/errors.hpp"
#include "hsgd/core/param_vector.hpp"
#include "hsgd/core/rng.hpp"

using namespace hsgd;

TEST(ParamVector, ArithmeticPreservesDimension) {
    ParamVector a{1.0, 2.0, 3.0};
    ParamVector b{0.5, -1.0, 2.0};
    EXPECT_EQ((a + b), (ParamVector{1.5, 1.0, 5.0}));
    EXPECT_EQ((a - b), (ParamVector{0.5, 3.0, 1.0}));
    EXPECT_EQ((2.0 * a), (ParamVector{2.0, 4.0, 6.0}));
    a.axpy(-2.0, b);
    EXPECT_EQ(a, (ParamVector{0.0, 4.0, -1.0}));
    EXPECT_DOUBLE_EQ(b.dot(b), 5.25);
    EXPECT_DOUBLE_EQ(b.squared_norm(), 5.25);
    EXPECT_DOUBLE_EQ(ParamVector({3.0, 4.0}).norm(), 5.0);
}

TEST(ParamVector, DimensionMismatchIsConfigError) {
    ParamVector a(3), b(2);
    EXPECT_THROW(a.axpy(1.0, b), ConfigError);
    EXPECT_THROW(a += b, ConfigError);
}

TEST(ParamVector, FiniteCheck) {
    EXPECT_TRUE(ParamVector({1.0, -2.0}).all_finite());
    EXPECT_FALSE(ParamVector({1.0, NAN}).all_finite());
    EXPECT_FALSE(ParamVector({INFINITY}).all_finite());
}

TEST(Rng, SameSeedSameStream) {
    Rng a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        differs |= x != c.next_u64();
    }
    EXPECT_TRUE(differs);
}

TEST(Rng, ReferenceXoshiroOutput) {
    // Independent reimplementation of splitmix64 seeding + xoshiro256**.
    std::uint64_t sm = 7, s[4];
    for (auto& w : s) {
        std::uint64_t z = (sm += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        w = z ^ (z >> 31);
    }
    auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t expect = rotl(s[1] * 5, 7) * 9;
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        ASSERT_EQ(rng.next_u64(), expect);
    }
}

TEST(Rng, UniformDoubleInUnitInterval) {
    Rng rng(1);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.next_double();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Rng, UniformIndexCoversRangeEvenly) {
    Rng rng(3);
    std::vector<int> counts(7, 0);
    const int draws = 70000;
    for (int i = 0; i < draws; ++i) {
        const auto k = rng.uniform_index(7);
        ASSERT_LT(k, 7u);
        ++counts[k];
    }
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - draws / 7.0) * (c - draws / 7.0) / (draws / 7.0);
    EXPECT_LT(chi2, 22.5);  // 6 dof, p ~ 0.001
}

TEST(Rng, GaussianMoments) {
    Rng rng(5);
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.gaussian();
        s1 += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    EXPECT_NEAR(s1 / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.015);
    EXPECT_NEAR(s4 / n, 3.0, 0.08);
}

TEST(Rng, RepeatSeedsDistinct) {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t r = 0; r < 1000; ++r) seeds.insert(repeat_stream_seed(99, r));
    EXPECT_EQ(seeds.size(), 1000u);
    EXPECT_NE(derive_seed(99, stream_tag::source_noise), derive_seed(99, stream_tag::model_init));
}

TEST(MinibatchSampler, DistinctIndicesInRange) {
    Rng rng(11);
    MinibatchSampler sampler(10);
    for (int t = 0; t < 1000; ++t) {
        auto batch = sampler.draw(rng, 4);
        ASSERT_EQ(batch.size(), 4u);
        std::set<std::size_t> seen(batch.begin(), batch.end());
        ASSERT_EQ(seen.size(), 4u);
        for (auto j : batch) ASSERT_LT(j, 10u);
    }
}

TEST(MinibatchSampler, InclusionFrequencyUniform) {
    Rng rng(12);
    const std::size_t n = 8, m = 3;
    MinibatchSampler sampler(n);
    std::vector<int> counts(n, 0);
    const int draws = 80000;
    for (int t = 0; t < draws; ++t)
        for (auto j : sampler.draw(rng, m)) ++counts[j];
    const double expect = draws * static_cast<double>(m) / n;
    for (int c : counts) EXPECT_NEAR(c, expect, 5 * std::sqrt(expect));
}

TEST(MinibatchSampler, FullBatchIsPermutation) {
    Rng rng(13);
    MinibatchSampler sampler(6);
    auto batch = sampler.draw(rng, 6);
    std::vector<std::size_t> v(batch.begin(), batch.end());
    std::sort(v.begin(), v.end());
    EXPECT_EQ(v, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5}));
}

TEST(Errors, NonFiniteAnnotation) {
    NonFiniteError inner(17, "gradient");
    EXPECT_EQ(inner.step(), 17u);
    EXPECT_FALSE(inner.has_homotopy_context());
    NonFiniteError outer(inner, 3, 0.5);
    EXPECT_TRUE(outer.has_homotopy_context());
    EXPECT_EQ(outer.homotopy_iteration(), 3u);
    EXPECT_DOUBLE_EQ(outer.lambda(), 0.5);
    EXPECT_NE(std::string(outer.what()).find("step 17"), std::string::npos);
    EXPECT_NE(std::string(outer.what()).find("homotopy iteration 3"), std::string::npos);
}
