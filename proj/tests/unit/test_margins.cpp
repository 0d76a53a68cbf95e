#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "schaake/margins.hpp"
#include "schaake/rng.hpp"

namespace schaake {
namespace {

TEST(Margins, GaussianBasics) {
    const auto g = MarginModel::gaussian();
    EXPECT_EQ(g.kind(), MarginKind::Gaussian);
    EXPECT_DOUBLE_EQ(g.pit(0.0), 0.5);
    EXPECT_DOUBLE_EQ(g.quantile(0.5), 0.0);
    EXPECT_NEAR(g.quantile(0.975), 1.959964, 1e-5);
}

TEST(Margins, GaussianPitStaysInsideUnitInterval) {
    const auto g = MarginModel::gaussian();
    EXPECT_GT(g.pit(-50.0), 0.0);
    EXPECT_LT(g.pit(50.0), 1.0);
}

TEST(Margins, EmpiricalPitCountsStrictlySmaller) {
    const std::vector<double> s{1.0, -1.0, 0.0};
    const auto e = MarginModel::empirical(s);
    EXPECT_EQ(e.sample(), (std::vector<double>{-1.0, 0.0, 1.0}));
    EXPECT_DOUBLE_EQ(e.pit(0.5), 0.75);
    EXPECT_DOUBLE_EQ(e.pit(-5.0), 0.25);
    EXPECT_DOUBLE_EQ(e.pit(0.0), 0.5);
}

TEST(Margins, EmpiricalPitNeverReachesOne) {
    const std::vector<double> s{-1.0, 0.0, 1.0};
    const auto e = MarginModel::empirical(s);
    EXPECT_DOUBLE_EQ(e.pit(7.0), 0.75);
}

TEST(Margins, TiedValuesShareTheLowerRank) {
    const std::vector<double> s{2.0, 1.0, 2.0, 3.0};
    const auto e = MarginModel::empirical(s);
    EXPECT_DOUBLE_EQ(e.pit(2.0), 2.0 / 5.0);
}

TEST(Margins, EmpiricalQuantileAtPlottingPositionsIsOrderStatistic) {
    SplitMix64 rng(1);
    std::vector<double> s(90);
    for (auto& v : s) v = rng.normal();
    const auto e = MarginModel::empirical(s);
    std::sort(s.begin(), s.end());
    for (std::size_t i = 1; i <= 90; ++i) EXPECT_EQ(e.quantile(static_cast<double>(i) / 91.0), s[i - 1]) << i;
}

TEST(Margins, EmpiricalQuantileIsGeneralizedInverse) {
    const std::vector<double> s{10.0, 20.0, 30.0, 40.0};
    const auto e = MarginModel::empirical(s);
    EXPECT_EQ(e.quantile(0.01), 10.0);
    EXPECT_EQ(e.quantile(0.25), 10.0);
    EXPECT_EQ(e.quantile(0.2501), 20.0);
    EXPECT_EQ(e.quantile(0.75), 30.0);
    EXPECT_EQ(e.quantile(0.99), 40.0);
}

TEST(Margins, RoundTripOnTheSupport) {
    SplitMix64 rng(2);
    for (std::size_t n : {1u, 2u, 7u, 90u, 251u}) {
        std::vector<double> s(n);
        for (auto& v : s) v = rng.normal();
        const auto e = MarginModel::empirical(s);
        for (double v : s) EXPECT_EQ(e.quantile(e.pit(v)), v);
    }
}

TEST(Margins, Monotone) {
    SplitMix64 rng(3);
    std::vector<double> s(40);
    for (auto& v : s) v = std::round(rng.normal() * 4.0) / 4.0;  // with ties
    for (const auto& m : {MarginModel::empirical(s), MarginModel::gaussian()}) {
        double prev_pit = 0.0;
        double prev_q = -1e300;
        for (double z = -4.0; z <= 4.0; z += 0.01) {
            const double u = m.pit(z);
            EXPECT_GE(u, prev_pit);
            prev_pit = u;
        }
        for (double p = 0.001; p < 1.0; p += 0.001) {
            const double q = m.quantile(p);
            EXPECT_GE(q, prev_q);
            prev_q = q;
        }
    }
}

TEST(Margins, EmpiricalPitValuesAreInteriorPlottingPositions) {
    SplitMix64 rng(4);
    std::vector<double> s(30);
    for (auto& v : s) v = rng.normal();
    const auto e = MarginModel::empirical(s);
    for (int i = 0; i < 1000; ++i) {
        const double u = e.pit(3.0 * rng.normal());
        const double k = u * 31.0;
        EXPECT_NEAR(k, std::round(k), 1e-9);
        EXPECT_GE(std::round(k), 1.0);
        EXPECT_LE(std::round(k), 30.0);
    }
}

TEST(Margins, RejectsInvalidInput) {
    EXPECT_THROW(MarginModel::empirical(std::vector<double>{}), std::invalid_argument);
    EXPECT_THROW(MarginModel::empirical(std::vector<double>{1.0, NAN}), std::invalid_argument);
    const auto g = MarginModel::gaussian();
    EXPECT_THROW(g.pit(INFINITY), std::invalid_argument);
    EXPECT_THROW(g.quantile(0.0), std::invalid_argument);
    EXPECT_THROW(g.quantile(1.0), std::invalid_argument);
}

}  // namespace
}  // namespace schaake
