#include "schaake/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>

#include "schaake/csv_io.hpp"
#include "schaake/errors.hpp"
#include "schaake/kernels.hpp"
#include "schaake/panel.hpp"

namespace schaake {

LoadProfile::LoadProfile(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw std::invalid_argument("load profile is empty");
    bool any_positive = false;
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("load profile weights must be finite and >= 0");
        any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) throw std::invalid_argument("load profile needs at least one positive weight");
}

LoadProfile default_synthetic_profile() {
    // Illustrative weekday-commercial shape in kW for ~1000 kWh/year.
    return LoadProfile({0.066, 0.063, 0.061, 0.060, 0.061, 0.068, 0.085, 0.118, 0.155, 0.172, 0.178, 0.180,
                        0.176, 0.173, 0.170, 0.164, 0.152, 0.135, 0.118, 0.104, 0.092, 0.083, 0.076, 0.070});
}

LoadProfile read_profile_csv(std::istream& in, const std::string& source) {
    std::vector<double> weights(kHours, 0.0);
    std::vector<bool> seen(kHours, false);
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = csv::trim(line);
        if (text.empty()) continue;
        const auto fields = csv::split(text);
        const auto where = source + ":" + std::to_string(line_no) + ": ";
        if (!header) {
            if (fields.size() != 2 || fields[0] != "hour" || fields[1] != "weight") {
                throw DataError(where + "expected header 'hour,weight'");
            }
            header = true;
            continue;
        }
        long long hour = 0;
        double w = 0.0;
        if (fields.size() != 2 || !csv::parse_int(fields[0], hour) || !csv::parse_double(fields[1], w)) {
            throw DataError(where + "malformed row");
        }
        if (hour < 1 || hour > static_cast<long long>(kHours)) throw DataError(where + "hour outside 1..24");
        const auto h = static_cast<std::size_t>(hour - 1);
        if (seen[h]) throw DataError(where + "duplicate hour " + std::to_string(hour));
        seen[h] = true;
        weights[h] = w;
    }
    if (std::count(seen.begin(), seen.end(), true) != static_cast<long>(kHours)) {
        throw DataError(source + ": profile must list all 24 hours");
    }
    try {
        return LoadProfile(std::move(weights));
    } catch (const std::invalid_argument& e) {
        throw DataError(source + ": " + e.what());
    }
}

LoadProfile load_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open profile file " + path.string());
    return read_profile_csv(in, path.string());
}

double daily_price(std::span<const double> prices, const LoadProfile& profile) {
    if (prices.size() != profile.size()) throw std::invalid_argument("daily_price: dimension mismatch");
    double out = 0.0;
    kernels::active().weighted_row_sums(prices.data(), 1, prices.size(), profile.weights().data(), &out);
    return out;
}

std::vector<double> scenario_daily_prices(const EnsembleForecast& fc, const LoadProfile& profile) {
    if (fc.dims() != profile.size()) throw std::invalid_argument("scenario_daily_prices: dimension mismatch");
    std::vector<double> out(fc.members());
    kernels::active().weighted_row_sums(fc.values().data(), fc.members(), fc.dims(), profile.weights().data(),
                                        out.data());
    return out;
}

}  // namespace schaake
