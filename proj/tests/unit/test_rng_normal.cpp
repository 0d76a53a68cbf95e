#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "schaake/normal.hpp"
#include "schaake/rng.hpp"

namespace schaake {
namespace {

struct QuantileCase {
    double p;
    double z;
};

// Frozen from scipy.stats.norm.ppf (tests/oracles/generate_oracles.py).
const QuantileCase kQuantiles[] = {
    {1e-300, -37.0470962993612},        {1e-20, -9.262340089798409},
    {1e-10, -6.361340902404056},        {1e-05, -4.264890793922825},
    {0.001, -3.090232306167813},        {0.025, -1.9599639845400545},
    {0.1, -1.2815515655446004},         {0.3, -0.5244005127080409},
    {0.5, 0.0},                         {0.7, 0.5244005127080407},
    {0.975, 1.959963984540054},         {0.999, 3.090232306167813},
    {0.999999999999, 7.0344869100478356},
};

TEST(Normal, QuantileMatchesReference) {
    for (const auto& c : kQuantiles) {
        EXPECT_NEAR(normal_quantile(c.p), c.z, 1e-12 * std::max(1.0, std::abs(c.z))) << "p=" << c.p;
    }
}

TEST(Normal, CdfMatchesReference) {
    // scipy.stats.norm.cdf
    // scipy underflows to 0 here; the true value is a subnormal near 2.9e-316.
    EXPECT_LT(normal_cdf(-38.0), 1e-300);
    EXPECT_NEAR(normal_cdf(-8.0), 6.22096057427174e-16, 1e-28);
    EXPECT_NEAR(normal_cdf(-3.0), 0.0013498980316300933, 1e-17);
    EXPECT_NEAR(normal_cdf(-1.0), 0.15865525393145707, 1e-16);
    EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
    EXPECT_NEAR(normal_cdf(0.5), 0.6914624612740131, 1e-16);
    EXPECT_NEAR(normal_cdf(2.0), 0.9772498680518208, 1e-16);
    EXPECT_NEAR(normal_cdf(6.0), 0.9999999990134123, 1e-16);
}

TEST(Normal, QuantileInvertsCdf) {
    for (double p = 0.0005; p < 1.0; p += 0.0173) {
        EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-14);
    }
}

TEST(Normal, QuantileEdges) {
    EXPECT_EQ(normal_quantile(0.0), -INFINITY);
    EXPECT_EQ(normal_quantile(1.0), INFINITY);
    EXPECT_THROW(normal_quantile(-0.1), std::invalid_argument);
    EXPECT_THROW(normal_quantile(1.5), std::invalid_argument);
    EXPECT_THROW(normal_quantile(NAN), std::invalid_argument);
}

TEST(Normal, QuantileIsAntisymmetric) {
    for (double p : {0.01, 0.2, 0.37, 0.49}) EXPECT_NEAR(normal_quantile(p), -normal_quantile(1.0 - p), 1e-14);
}

TEST(Rng, SameSeedSameStream) {
    SplitMix64 a(42);
    SplitMix64 b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, ReferenceSequence) {
    // SplitMix64 reference output for seed 1234567 (Vigna's splitmix64.c).
    SplitMix64 r(1234567);
    EXPECT_EQ(r.next_u64(), 6457827717110365317ULL);
    EXPECT_EQ(r.next_u64(), 3203168211198807973ULL);
    EXPECT_EQ(r.next_u64(), 9817491932198370423ULL);
}

TEST(Rng, UniformIsOpenInterval) {
    SplitMix64 r(7);
    double lo = 1.0;
    double hi = 0.0;
    double sum = 0.0;
    constexpr int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.005);
}

TEST(Rng, NormalMoments) {
    SplitMix64 r(11);
    constexpr int n = 200000;
    double s1 = 0.0;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        ASSERT_TRUE(std::isfinite(z));
        s1 += z;
        s2 += z * z;
    }
    EXPECT_NEAR(s1 / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.015);
}

TEST(Rng, BoundedCoversRangeUniformly) {
    SplitMix64 r(3);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) {
        const auto k = r.bounded(7);
        ASSERT_LT(k, 7u);
        ++counts[k];
    }
    for (int c : counts) EXPECT_NEAR(c, 10000, 400);
}

TEST(Rng, ShuffleIsAPermutation) {
    SplitMix64 r(5);
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    r.shuffle(std::span<int>(v));
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
    EXPECT_FALSE(std::is_sorted(v.begin(), v.end()));
}

TEST(Rng, DerivedSeedsSeparatePurposes) {
    std::set<std::uint64_t> seeds;
    for (const char* date : {"2020-01-01", "2020-01-02"}) {
        for (const char* setting : {"Schaake-NP", "I-NP"}) {
            for (const char* purpose : {"copula", "independence", "average-rank"}) {
                seeds.insert(derive_seed(1, date, setting, purpose));
            }
        }
    }
    EXPECT_EQ(seeds.size(), 12u);
    EXPECT_EQ(derive_seed(9, "2020-01-01", "I-P", "copula"), derive_seed(9, "2020-01-01", "I-P", "copula"));
    EXPECT_NE(derive_seed(9, "2020-01-01", "I-P", "copula"), derive_seed(10, "2020-01-01", "I-P", "copula"));
    // Field boundaries matter: ("ab", "c") differs from ("a", "bc").
    EXPECT_NE(derive_seed(9, "ab", "c", "x"), derive_seed(9, "a", "bc", "x"));
}

}  // namespace
}  // namespace schaake
