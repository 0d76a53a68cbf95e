#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "schaake/copula.hpp"
#include "schaake/driver.hpp"
#include "schaake/errors.hpp"
#include "schaake/forecast.hpp"
#include "schaake/rng.hpp"

namespace schaake {
namespace {

std::vector<UnivariateEnsemble> random_ensembles(std::size_t m, std::size_t d, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<UnivariateEnsemble> out(d);
    for (std::size_t h = 0; h < d; ++h) {
        out[h].hour = h;
        out[h].members.resize(m);
        for (auto& v : out[h].members) v = 40.0 + 10.0 * rng.normal();
        std::sort(out[h].members.begin(), out[h].members.end());
    }
    return out;
}

TEST(Ensemble, EmpiricalMarginMembers) {
    const auto margin = MarginModel::empirical(std::vector<double>{-1.0, 0.0, 1.0});
    const auto e = make_univariate_ensemble(10.0, OneStep{0.0, 1.0}, margin, 3);
    EXPECT_EQ(e.members, (std::vector<double>{9.0, 10.0, 11.0}));
}

TEST(Ensemble, GaussianSingleMemberIsTheCenter) {
    const auto e = make_univariate_ensemble(0.0, OneStep{0.0, 1.0}, MarginModel::gaussian(), 1);
    ASSERT_EQ(e.members.size(), 1u);
    EXPECT_EQ(e.members[0], 0.0);
}

TEST(Ensemble, RawVariantIsPointForecastPlusErrorQuantiles) {
    SplitMix64 rng(1);
    std::vector<double> errors(90);
    for (auto& v : errors) v = 5.0 * rng.normal();
    const auto margin = MarginModel::empirical(errors);
    const auto e = make_univariate_ensemble(42.5, OneStep{0.0, 1.0}, margin, 90);
    std::sort(errors.begin(), errors.end());
    for (std::size_t i = 0; i < 90; ++i) EXPECT_EQ(e.members[i], 42.5 + errors[i]);
}

TEST(Ensemble, SortedAndAffineEquivariant) {
    const auto margin = MarginModel::gaussian();
    const auto a = make_univariate_ensemble(20.0, OneStep{1.0, 2.0}, margin, 50);
    const auto b = make_univariate_ensemble(60.0, OneStep{3.0, 6.0}, margin, 50);
    EXPECT_TRUE(std::is_sorted(a.members.begin(), a.members.end()));
    for (std::size_t i = 0; i < 50; ++i) EXPECT_NEAR(b.members[i], 3.0 * a.members[i], 1e-12);
}

TEST(Ensemble, RejectsBadInputs) {
    EXPECT_THROW(make_univariate_ensemble(1.0, OneStep{0.0, 0.0}, MarginModel::gaussian(), 3), std::invalid_argument);
    EXPECT_THROW(make_univariate_ensemble(NAN, OneStep{0.0, 1.0}, MarginModel::gaussian(), 3), std::invalid_argument);
    EXPECT_THROW(make_univariate_ensemble(1.0, OneStep{0.0, 1.0}, MarginModel::gaussian(), 0), std::invalid_argument);
}

TEST(Shuffle, ToyExampleReproducesTheWorkedTable) {
    const auto toy = run_toy_example();
    const double expected[7][4] = {{6.1, 31.6, 27.2, 36.5},  {30.3, 39.0, 44.4, 57.0}, {37.0, 45.7, 74.6, 74.2},
                                   {16.1, 21.7, 37.0, 26.7}, {23.6, 52.3, 57.5, 64.4}, {54.5, 69.6, 64.8, 50.5},
                                   {44.5, 59.7, 50.9, 43.9}};
    ASSERT_EQ(toy.forecast.members(), 7u);
    ASSERT_EQ(toy.forecast.dims(), 4u);
    for (std::size_t t = 0; t < 7; ++t) {
        for (std::size_t h = 0; h < 4; ++h) EXPECT_EQ(toy.forecast(t, h), expected[t][h]);
    }
    EXPECT_EQ(toy.forecast.sorted_column(0), (std::vector<double>{6.1, 16.1, 23.6, 30.3, 37.0, 44.5, 54.5}));
}

TEST(Shuffle, ToyOutputReRanksToTheRankMatrix) {
    const auto toy = run_toy_example();
    for (std::size_t h = 0; h < 4; ++h) {
        const auto ranks = stable_ranks(toy.forecast.column(h));
        for (std::size_t t = 0; t < 7; ++t) EXPECT_EQ(ranks[t], toy.ranks(t, h));
    }
}

TEST(Shuffle, IdentityRanksZipSortedEnsembles) {
    const auto ens = random_ensembles(10, 5, 2);
    const auto fc = shuffle(ens, RankMatrix::identity(10, 5));
    for (std::size_t t = 0; t < 10; ++t) {
        for (std::size_t h = 0; h < 5; ++h) EXPECT_EQ(fc(t, h), ens[h].members[t]);
    }
}

TEST(Shuffle, PreservesMarginsAndRanks) {
    for (std::uint64_t s = 0; s < 25; ++s) {
        const auto ens = random_ensembles(90, kHours, s);
        const auto r = random_rank_matrix(90, kHours, 1000 + s);
        const auto fc = shuffle(ens, r);
        for (std::size_t h = 0; h < kHours; ++h) {
            EXPECT_EQ(fc.sorted_column(h), ens[h].members);
            const auto ranks = stable_ranks(fc.column(h));
            for (std::size_t t = 0; t < 90; ++t) ASSERT_EQ(ranks[t], r(t, h));
        }
    }
}

TEST(Shuffle, DimensionMismatch) {
    const auto ens = random_ensembles(5, 3, 3);
    EXPECT_THROW(shuffle(ens, RankMatrix::identity(5, 4)), std::invalid_argument);
    EXPECT_THROW(shuffle(ens, RankMatrix::identity(6, 3)), std::invalid_argument);
}

TEST(Independence, SingleMemberAndDeterminism) {
    const auto one = random_ensembles(1, kHours, 4);
    EXPECT_EQ(independence_forecast(one, 9), shuffle(one, RankMatrix::identity(1, kHours)));
    const auto ens = random_ensembles(30, kHours, 5);
    EXPECT_EQ(independence_forecast(ens, 17), independence_forecast(ens, 17));
}

TEST(Independence, ColumnsAreUnrelated) {
    const auto ens = random_ensembles(90, 2, 6);
    double total = 0.0;
    constexpr int draws = 2000;
    for (int s = 0; s < draws; ++s) {
        const auto fc = independence_forecast(ens, static_cast<std::uint64_t>(s));
        const auto a = stable_ranks(fc.column(0));
        const auto b = stable_ranks(fc.column(1));
        double d2 = 0.0;
        for (std::size_t t = 0; t < 90; ++t) d2 += std::pow(a[t] - b[t], 2);
        total += std::abs(1.0 - 6.0 * d2 / (90.0 * (90.0 * 90.0 - 1.0)));
    }
    EXPECT_LT(total / draws, 0.12);
}

TEST(EnsembleCsv, RoundTrip) {
    const auto ens = random_ensembles(4, 3, 7);
    const auto a = shuffle(ens, random_rank_matrix(4, 3, 1), "2020-01-01");
    const auto b = shuffle(ens, random_rank_matrix(4, 3, 2), "2020-01-02");
    std::stringstream ss;
    write_ensemble_csv_header(ss, 3);
    write_ensemble_csv_rows(ss, a);
    write_ensemble_csv_rows(ss, b);
    const auto back = read_ensemble_csv(ss, "fc.csv");
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0], a);
    EXPECT_EQ(back[1], b);
    EXPECT_EQ(to_univariate(back[1])[2].members, ens[2].members);
}

TEST(EnsembleCsv, Errors) {
    std::istringstream bad_header("day,member,h1\n");
    EXPECT_THROW(read_ensemble_csv(bad_header, "x.csv"), DataError);
    std::istringstream gap("date,member,h1\n2020-01-01,1,3\n2020-01-01,3,4\n");
    EXPECT_THROW(read_ensemble_csv(gap, "x.csv"), DataError);
}

}  // namespace
}  // namespace schaake
