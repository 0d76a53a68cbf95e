#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "schaake/forecast.hpp"

namespace schaake {

/// Hourly consumption weights of a standard load profile.
class LoadProfile {
public:
    /// Throws std::invalid_argument on negative/non-finite weights or an all-zero profile.
    explicit LoadProfile(std::vector<double> weights);

    std::size_t size() const noexcept { return weights_.size(); }
    const std::vector<double>& weights() const noexcept { return weights_; }

private:
    std::vector<double> weights_;
};

/// Built-in 24-hour commercial-type profile. Synthetic and illustrative only,
/// not the published BDEW values.
LoadProfile default_synthetic_profile();

/// `hour,weight` CSV with 24 rows.
LoadProfile read_profile_csv(std::istream& in, const std::string& source);
LoadProfile load_profile(const std::filesystem::path& path);

/// sum_h weight_h * price_h.
double daily_price(std::span<const double> prices, const LoadProfile& profile);

/// daily_price of every scenario row, in row order.
std::vector<double> scenario_daily_prices(const EnsembleForecast& fc, const LoadProfile& profile);

}  // namespace schaake
