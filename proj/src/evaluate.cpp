#include "schaake/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "schaake/errors.hpp"
#include "schaake/kernels.hpp"
#include "schaake/normal.hpp"
#include "schaake/rng.hpp"

namespace schaake {

double crps_ensemble(std::span<const double> members, double y) {
    if (members.empty()) throw std::invalid_argument("crps_ensemble: empty ensemble");
    const auto& k = kernels::active();
    const auto m = static_cast<double>(members.size());
    const double spread = k.sum_pairwise_abs_diff(members.data(), members.size());
    return k.sum_abs_dev(members.data(), members.size(), y) / m - spread / (2.0 * m * m);
}

double energy_score(std::span<const double> members, std::size_t dims, std::span<const double> y) {
    if (dims == 0 || y.size() != dims) throw std::invalid_argument("energy_score: dimension mismatch");
    if (members.empty() || members.size() % dims != 0) {
        throw std::invalid_argument("energy_score: members are not an m x d matrix");
    }
    const std::size_t count = members.size() / dims;
    const auto& k = kernels::active();
    const auto m = static_cast<double>(count);
    const double to_obs = k.sum_distance_to(members.data(), count, dims, y.data());
    const double spread = k.sum_pairwise_distance(members.data(), count, dims);
    return to_obs / m - spread / (2.0 * m * m);
}

double energy_score(const EnsembleForecast& fc, std::span<const double> y) {
    return energy_score(fc.values(), fc.dims(), y);
}

DmResult dm_test(std::span<const double> s1, std::span<const double> s2) {
    if (s1.size() != s2.size()) throw std::invalid_argument("dm_test: series lengths differ");
    const std::size_t n = s1.size();
    if (n < 2) throw std::invalid_argument("dm_test: need at least 2 paired scores");
    std::vector<double> d(n);
    for (std::size_t t = 0; t < n; ++t) d[t] = s1[t] - s2[t];
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw NumericalError("dm_test: score differences have zero variance");
    DmResult r;
    r.n = n;
    r.statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
    r.p_value = std::min(1.0, 2.0 * normal_sf(std::abs(r.statistic)));
    return r;
}

int verification_rank(std::span<const double> members, double y) {
    if (members.empty()) throw std::invalid_argument("verification_rank: empty ensemble");
    if (!std::isfinite(y)) throw std::invalid_argument("verification_rank: non-finite realization");
    int below = 0;
    for (double v : members) {
        if (!std::isfinite(v)) throw std::invalid_argument("verification_rank: non-finite member");
        below += v < y ? 1 : 0;
    }
    return 1 + below;
}

double average_rank(std::span<const int> ranks) {
    if (ranks.empty()) throw std::invalid_argument("average_rank: no ranks");
    const long long sum = std::accumulate(ranks.begin(), ranks.end(), 0LL);
    return static_cast<double>(sum) / static_cast<double>(ranks.size());
}

int multivariate_average_rank(const EnsembleForecast& fc, std::span<const double> y, SplitMix64& rng) {
    const std::size_t m = fc.members();
    const std::size_t d = fc.dims();
    if (y.size() != d) throw std::invalid_argument("multivariate_average_rank: dimension mismatch");

    // Pool index 0 is the observation. Pre-ranks are compared through their
    // integer rank sums, which order the same way as the averages.
    std::vector<long long> rank_sum(m + 1, 0);
    std::vector<double> col(m + 1);
    std::vector<std::size_t> idx(m + 1);
    for (std::size_t h = 0; h < d; ++h) {
        col[0] = y[h];
        for (std::size_t k = 0; k < m; ++k) col[k + 1] = fc(k, h);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return col[a] < col[b]; });
        // rank = 1 + number of pool values strictly below
        std::size_t i = 0;
        while (i <= m) {
            std::size_t j = i;
            while (j + 1 <= m && col[idx[j + 1]] == col[idx[i]]) ++j;
            for (std::size_t q = i; q <= j; ++q) rank_sum[idx[q]] += static_cast<long long>(i + 1);
            i = j + 1;
        }
    }
    std::size_t below = 0;
    std::size_t ties = 0;
    for (std::size_t k = 1; k <= m; ++k) {
        below += rank_sum[k] < rank_sum[0] ? 1 : 0;
        ties += rank_sum[k] == rank_sum[0] ? 1 : 0;
    }
    const auto tie_offset = ties > 0 ? static_cast<std::size_t>(rng.bounded(ties + 1)) : 0;
    return static_cast<int>(1 + below + tie_offset);
}

RankHistogram RankHistogram::per_rank(int max_rank) {
    if (max_rank < 1) throw std::invalid_argument("rank histogram needs max_rank >= 1");
    RankHistogram hist;
    hist.max_rank = max_rank;
    for (int r = 1; r <= max_rank; ++r) {
        hist.bin_lower.push_back(r);
        hist.bin_upper.push_back(r);
    }
    hist.counts.assign(static_cast<std::size_t>(max_rank), 0);
    return hist;
}

RankHistogram RankHistogram::binned(int max_rank, std::size_t bins) {
    if (max_rank < 1 || bins < 1) throw std::invalid_argument("binned rank histogram needs max_rank, bins >= 1");
    RankHistogram hist;
    hist.max_rank = max_rank;
    const double width = static_cast<double>(max_rank - 1) / static_cast<double>(bins);
    // Rank r goes to bin floor((r - 1) / width), the top edge into the last bin.
    std::vector<int> lower(bins, 0);
    std::vector<int> upper(bins, 0);
    for (int r = max_rank; r >= 1; --r) {
        std::size_t b = width > 0.0 ? static_cast<std::size_t>(static_cast<double>(r - 1) / width) : 0;
        b = std::min(b, bins - 1);
        lower[b] = r;
        if (upper[b] == 0) upper[b] = r;
    }
    for (std::size_t b = 0; b < bins; ++b) {
        if (lower[b] == 0) continue;  // empty bins only when bins > max_rank - 1
        hist.bin_lower.push_back(lower[b]);
        hist.bin_upper.push_back(upper[b]);
    }
    hist.counts.assign(hist.bin_lower.size(), 0);
    return hist;
}

std::size_t RankHistogram::bin_of(int rank) const {
    if (rank < 1 || rank > max_rank) throw std::out_of_range("rank outside histogram range");
    const auto it = std::upper_bound(bin_lower.begin(), bin_lower.end(), rank);
    return static_cast<std::size_t>(it - bin_lower.begin()) - 1;
}

void RankHistogram::add(int rank) {
    ++counts[bin_of(rank)];
    ++total;
}

std::vector<double> RankHistogram::uniform_probabilities() const {
    std::vector<double> p(counts.size());
    for (std::size_t b = 0; b < p.size(); ++b) {
        p[b] = static_cast<double>(bin_upper[b] - bin_lower[b] + 1) / static_cast<double>(max_rank);
    }
    return p;
}

ChiSquareCheck chi_square_uniformity(const RankHistogram& hist, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("chi_square_uniformity: alpha outside (0, 1)");
    if (hist.counts.size() < 2) throw std::invalid_argument("chi_square_uniformity: need at least 2 bins");
    if (hist.total == 0) throw std::invalid_argument("chi_square_uniformity: empty histogram");
    const auto p = hist.uniform_probabilities();
    const auto total = static_cast<double>(hist.total);
    ChiSquareCheck check;
    for (std::size_t b = 0; b < p.size(); ++b) {
        const double expected = total * p[b];
        const double diff = static_cast<double>(hist.counts[b]) - expected;
        check.statistic += diff * diff / expected;
    }
    check.dof = p.size() - 1;
    const boost::math::chi_squared dist(static_cast<double>(check.dof));
    check.critical_value = boost::math::quantile(dist, 1.0 - alpha);
    check.pass = check.statistic <= check.critical_value;
    return check;
}

std::size_t interval_order_statistic(std::size_t m, double nominal) {
    if (!(nominal > 0.0 && nominal < 1.0)) throw std::invalid_argument("nominal level must lie in (0, 1)");
    if (m == 0) throw std::invalid_argument("interval needs a non-empty sample");
    const auto k = static_cast<std::size_t>(std::llround(static_cast<double>(m) * (1.0 - nominal) / 2.0));
    return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(1, m / 2));
}

CentralInterval central_interval(std::span<const double> sample, double nominal) {
    const std::size_t m = sample.size();
    const std::size_t k = interval_order_statistic(m, nominal);
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    return CentralInterval{sorted[k - 1], sorted[m - k]};
}

double interval_coverage(std::span<const std::vector<double>> daily_samples, std::span<const double> realized,
                         double nominal) {
    if (daily_samples.size() != realized.size()) throw std::invalid_argument("interval_coverage: length mismatch");
    if (!(nominal > 0.0 && nominal < 1.0)) throw std::invalid_argument("nominal level must lie in (0, 1)");
    if (realized.empty()) throw std::invalid_argument("interval_coverage: no days");
    std::size_t inside = 0;
    for (std::size_t t = 0; t < realized.size(); ++t) {
        const auto iv = central_interval(daily_samples[t], nominal);
        inside += (realized[t] >= iv.lower && realized[t] <= iv.upper) ? 1 : 0;
    }
    return static_cast<double>(inside) / static_cast<double>(realized.size());
}

double DayScore::crps_mean() const {
    if (crps.empty()) return 0.0;
    return std::accumulate(crps.begin(), crps.end(), 0.0) / static_cast<double>(crps.size());
}

DayScore score_day(const EnsembleForecast& fc, std::span<const double> y, SplitMix64& rng) {
    if (y.size() != fc.dims()) throw std::invalid_argument("score_day: dimension mismatch");
    DayScore s;
    s.date = fc.date();
    s.es = energy_score(fc, y);
    s.crps.resize(fc.dims());
    s.ranks.resize(fc.dims());
    for (std::size_t h = 0; h < fc.dims(); ++h) {
        const auto col = fc.sorted_column(h);
        s.crps[h] = crps_ensemble(col, y[h]);
        s.ranks[h] = verification_rank(col, y[h]);
    }
    s.avg_rank = multivariate_average_rank(fc, y, rng);
    return s;
}

double ScorePanel::mean_es() const {
    if (days.empty()) return 0.0;
    double s = 0.0;
    for (const auto& d : days) s += d.es;
    return s / static_cast<double>(days.size());
}

double ScorePanel::mean_crps() const {
    if (days.empty()) return 0.0;
    double s = 0.0;
    for (const auto& d : days) s += d.crps_mean();
    return s / static_cast<double>(days.size());
}

std::vector<double> ScorePanel::es_series() const {
    std::vector<double> out;
    out.reserve(days.size());
    for (const auto& d : days) out.push_back(d.es);
    return out;
}

std::vector<double> ScorePanel::crps_series() const {
    std::vector<double> out;
    out.reserve(days.size());
    for (const auto& d : days) out.push_back(d.crps_mean());
    return out;
}

}  // namespace schaake
