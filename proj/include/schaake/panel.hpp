#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace schaake {

inline constexpr std::size_t kHours = 24;

/// Calendar day label, ISO-8601 (YYYY-MM-DD). Ordered lexicographically.
using Date = std::string;

bool is_iso_date(const std::string& text) noexcept;

/**
 * Day x hour matrix of realizations, point forecasts or errors.
 *
 * Dates are strictly increasing and each row holds exactly 24 finite values.
 * The panel is immutable once constructed.
 */
class HourlyPanel {
public:
    HourlyPanel() = default;
    /// values is row-major, dates.size() * 24 entries. Throws DataError on
    /// invariant violations.
    HourlyPanel(std::vector<Date> dates, std::vector<double> values);

    std::size_t days() const noexcept { return dates_.size(); }
    bool empty() const noexcept { return dates_.empty(); }
    const std::vector<Date>& dates() const noexcept { return dates_; }
    const Date& date(std::size_t t) const { return dates_.at(t); }

    std::span<const double, kHours> row(std::size_t t) const noexcept {
        return std::span<const double, kHours>(values_.data() + t * kHours, kHours);
    }
    double operator()(std::size_t t, std::size_t h) const noexcept { return values_[t * kHours + h]; }
    std::span<const double> values() const noexcept { return values_; }

    /// Index of a date, or days() when absent.
    std::size_t find(const Date& d) const noexcept;

    /// Rows [first, last) as a new panel.
    HourlyPanel slice(std::size_t first, std::size_t last) const;

    /// Copy of one hour's series.
    std::vector<double> column(std::size_t h, std::size_t first, std::size_t last) const;

    friend bool operator==(const HourlyPanel&, const HourlyPanel&) = default;

private:
    std::vector<Date> dates_;
    std::vector<double> values_;
};

/// Forecast errors real - forecast; same shape as its sources.
using ErrorPanel = HourlyPanel;

enum class PanelRole { Realization, Forecast };

struct LoadOptions {
    /// Drop days with fewer than 24 hours (with a warning) instead of failing.
    bool drop_incomplete_days = true;
};

struct LoadResult {
    HourlyPanel panel;
    std::vector<std::string> warnings;
};

/// Parse `date,hour,value` CSV text. `source` names the input in messages.
LoadResult parse_panel_csv(std::istream& in, const std::string& source,
                           const LoadOptions& options = {});

LoadResult load_panel(const std::filesystem::path& path, PanelRole role,
                      const LoadOptions& options = {});

void write_panel_csv(std::ostream& out, const HourlyPanel& panel);

/// Cell-wise real - fc. Throws DataError when dates or shapes differ.
ErrorPanel compute_errors(const HourlyPanel& real, const HourlyPanel& fc);

/// Restrict two panels to the dates they share.
std::pair<HourlyPanel, HourlyPanel> intersect_dates(const HourlyPanel& a, const HourlyPanel& b);

}  // namespace schaake
