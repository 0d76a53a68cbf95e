#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "schaake/copula.hpp"
#include "schaake/errorlearn.hpp"
#include "schaake/margins.hpp"
#include "schaake/panel.hpp"

namespace schaake {

/// m sorted members for one hour.
struct UnivariateEnsemble {
    std::size_t hour = 0;
    std::vector<double> members;
};

/**
 * Joint ensemble for one target day: row = scenario, column = hour.
 * Values are stored row-major.
 */
class EnsembleForecast {
public:
    EnsembleForecast() = default;
    EnsembleForecast(Date date, std::size_t members, std::size_t dims, std::vector<double> values);

    const Date& date() const noexcept { return date_; }
    std::size_t members() const noexcept { return members_; }
    std::size_t dims() const noexcept { return dims_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> row(std::size_t k) const noexcept {
        return std::span<const double>(values_.data() + k * dims_, dims_);
    }
    double operator()(std::size_t k, std::size_t h) const noexcept { return values_[k * dims_ + h]; }

    /// Copy of column h.
    std::vector<double> column(std::size_t h) const;
    /// Column h sorted ascending.
    std::vector<double> sorted_column(std::size_t h) const;

    friend bool operator==(const EnsembleForecast&, const EnsembleForecast&) = default;

private:
    Date date_;
    std::size_t members_ = 0;
    std::size_t dims_ = 0;
    std::vector<double> values_;
};

/// member i = (point + mu) + F^{-1}(i / (m + 1)) * sigma, i = 1..m.
UnivariateEnsemble make_univariate_ensemble(double point_forecast, const OneStep& one_step,
                                            const MarginModel& margin, std::size_t m,
                                            std::size_t hour = 0);

/// Scenario t, hour h takes the R(t, h)-th smallest member of hour h.
EnsembleForecast shuffle(std::span<const UnivariateEnsemble> ensembles, const RankMatrix& ranks,
                         const Date& date = {});

/// Pair members by independent uniform random permutations per hour.
EnsembleForecast independence_forecast(std::span<const UnivariateEnsemble> ensembles,
                                       std::uint64_t seed, const Date& date = {});

/// `date,member,h1..hd`, one row per scenario; members numbered from 1.
void write_ensemble_csv_header(std::ostream& out, std::size_t dims);
void write_ensemble_csv_rows(std::ostream& out, const EnsembleForecast& fc);

/// Read a multi-day ensemble CSV; days keep file order grouped by date.
std::vector<EnsembleForecast> read_ensemble_csv(std::istream& in, const std::string& source);

/// Split a one-day ensemble into per-hour sorted univariate ensembles.
std::vector<UnivariateEnsemble> to_univariate(const EnsembleForecast& fc);

}  // namespace schaake
