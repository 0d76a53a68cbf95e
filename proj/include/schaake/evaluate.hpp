#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schaake/forecast.hpp"

namespace schaake {

class SplitMix64;

/// Ensemble CRPS: (1/m) sum |x_k - y| - (1/(2 m^2)) sum_l sum_k |x_l - x_k|.
double crps_ensemble(std::span<const double> members, double y);

/// Ensemble energy score with Euclidean norm. `members` is m x d row-major.
double energy_score(std::span<const double> members, std::size_t dims, std::span<const double> y);
double energy_score(const EnsembleForecast& fc, std::span<const double> y);

struct DmResult {
    double statistic = 0.0;
    /// Two-sided, from the standard normal.
    double p_value = 1.0;
    std::size_t n = 0;
};

/**
 * Diebold-Mariano test on score series: mean(d) / (sd(d) / sqrt(T)) with
 * d = s1 - s2 and the sample sd (denominator T - 1). Throws NumericalError
 * when the differences have zero variance; the test is undefined then.
 */
DmResult dm_test(std::span<const double> s1, std::span<const double> s2);

/// 1 + number of members strictly below y.
int verification_rank(std::span<const double> members, double y);

double average_rank(std::span<const int> ranks);

/**
 * Rank of the observation among the m + 1 average-rank pre-ranks of the
 * pooled set {y, members}. Each vector's pre-rank is the mean of its
 * univariate ranks within the pool; ties between the observation's pre-rank
 * and members' pre-ranks are resolved uniformly at random. Result in 1..m+1.
 */
int multivariate_average_rank(const EnsembleForecast& fc, std::span<const double> y, SplitMix64& rng);

struct RankHistogram {
    /// Largest rank value (m + 1).
    int max_rank = 0;
    /// Bin b covers ranks [lower_b, upper_b]; contiguous over 1..max_rank.
    std::vector<int> bin_lower;
    std::vector<int> bin_upper;
    std::vector<std::size_t> counts;
    std::size_t total = 0;

    /// One bin per rank value.
    static RankHistogram per_rank(int max_rank);
    /// `bins` equal-width bins over [1, max_rank]; the top edge belongs to the last bin.
    static RankHistogram binned(int max_rank, std::size_t bins);

    std::size_t bin_of(int rank) const;
    void add(int rank);
    /// Probability of each bin under a discrete uniform rank on 1..max_rank.
    std::vector<double> uniform_probabilities() const;
};

struct ChiSquareCheck {
    double statistic = 0.0;
    double critical_value = 0.0;
    std::size_t dof = 0;
    bool pass = false;
};

/// Pearson chi-square of the histogram against discrete uniform ranks,
/// compared with the (1 - alpha) quantile of chi-square(bins - 1).
ChiSquareCheck chi_square_uniformity(const RankHistogram& hist, double alpha = 0.01);

struct CentralInterval {
    double lower = 0.0;
    double upper = 0.0;
};

/// k = round(m (1 - nominal) / 2), clamped to [1, m/2]. 1-based order statistic.
std::size_t interval_order_statistic(std::size_t m, double nominal);

/// [k-th, (m + 1 - k)-th] order statistics of the sample.
CentralInterval central_interval(std::span<const double> sample, double nominal);

/// Fraction of days whose realization lies in its central interval (inclusive).
double interval_coverage(std::span<const std::vector<double>> daily_samples,
                         std::span<const double> realized, double nominal);

/// Per-day scores and ranks of one setting.
struct DayScore {
    Date date;
    double es = 0.0;
    std::vector<double> crps;  // per hour
    std::vector<int> ranks;    // verification rank per hour
    int avg_rank = 0;          // multivariate average rank, 1..m+1

    double crps_mean() const;
};

/**
 * Score one day. CRPS is computed on sorted columns, so two forecasts with
 * the same margins get bit-identical CRPS regardless of member pairing.
 */
DayScore score_day(const EnsembleForecast& fc, std::span<const double> y, SplitMix64& rng);

struct ScorePanel {
    std::vector<DayScore> days;

    double mean_es() const;
    double mean_crps() const;
    std::vector<double> es_series() const;
    std::vector<double> crps_series() const;
};

}  // namespace schaake
