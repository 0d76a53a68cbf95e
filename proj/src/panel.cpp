#include "schaake/panel.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "schaake/csv_io.hpp"
#include "schaake/errors.hpp"

namespace schaake {

bool is_iso_date(const std::string& text) noexcept {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (text[i] < '0' || text[i] > '9') return false;
    }
    const auto digits = [&](std::size_t at, std::size_t n) {
        int v = 0;
        for (std::size_t i = at; i < at + n; ++i) v = v * 10 + (text[i] - '0');
        return v;
    };
    const std::chrono::year_month_day ymd{std::chrono::year{digits(0, 4)},
                                          std::chrono::month{static_cast<unsigned>(digits(5, 2))},
                                          std::chrono::day{static_cast<unsigned>(digits(8, 2))}};
    return ymd.ok();
}

HourlyPanel::HourlyPanel(std::vector<Date> dates, std::vector<double> values)
    : dates_(std::move(dates)), values_(std::move(values)) {
    if (dates_.empty()) throw DataError("panel must contain at least one day");
    if (values_.size() != dates_.size() * kHours) {
        throw DataError("panel values do not match 24 hours per day");
    }
    for (std::size_t t = 1; t < dates_.size(); ++t) {
        if (!(dates_[t - 1] < dates_[t])) {
            throw DataError("panel dates must be strictly increasing (at " + dates_[t] + ")");
        }
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DataError("non-finite panel value on " + dates_[i / kHours] + " hour " +
                            std::to_string(i % kHours + 1));
        }
    }
}

std::size_t HourlyPanel::find(const Date& d) const noexcept {
    const auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
    if (it == dates_.end() || *it != d) return dates_.size();
    return static_cast<std::size_t>(it - dates_.begin());
}

HourlyPanel HourlyPanel::slice(std::size_t first, std::size_t last) const {
    if (first >= last || last > days()) throw std::out_of_range("HourlyPanel::slice");
    std::vector<Date> d(dates_.begin() + static_cast<std::ptrdiff_t>(first),
                        dates_.begin() + static_cast<std::ptrdiff_t>(last));
    std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(first * kHours),
                          values_.begin() + static_cast<std::ptrdiff_t>(last * kHours));
    return HourlyPanel(std::move(d), std::move(v));
}

std::vector<double> HourlyPanel::column(std::size_t h, std::size_t first, std::size_t last) const {
    std::vector<double> out;
    out.reserve(last - first);
    for (std::size_t t = first; t < last; ++t) out.push_back((*this)(t, h));
    return out;
}

LoadResult parse_panel_csv(std::istream& in, const std::string& source, const LoadOptions& options) {
    auto fail = [&](std::size_t line_no, const std::string& msg) {
        throw DataError(source + ":" + std::to_string(line_no) + ": " + msg);
    };

    std::map<Date, std::array<double, kHours>> cells;
    std::map<Date, std::array<bool, kHours>> seen;
    std::string line;
    std::size_t line_no = 0;
    bool header_done = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = csv::trim(line);
        if (text.empty()) continue;
        if (!header_done) {
            header_done = true;
            const auto fields = csv::split(text);
            if (fields.size() != 3 || fields[0] != "date" || fields[1] != "hour" || fields[2] != "value") {
                fail(line_no, "expected header 'date,hour,value'");
            }
            continue;
        }
        const auto fields = csv::split(text);
        if (fields.size() != 3) fail(line_no, "expected 3 fields, got " + std::to_string(fields.size()));
        Date date(fields[0]);
        if (!is_iso_date(date)) fail(line_no, "invalid date '" + date + "'");
        long long hour = 0;
        if (!csv::parse_int(fields[1], hour)) fail(line_no, "invalid hour '" + std::string(fields[1]) + "'");
        if (hour < 1 || hour > static_cast<long long>(kHours)) {
            fail(line_no, "hour " + std::to_string(hour) + " outside 1..24");
        }
        double value = 0.0;
        if (!csv::parse_double(fields[2], value)) fail(line_no, "invalid value '" + std::string(fields[2]) + "'");
        if (!std::isfinite(value)) fail(line_no, "non-finite value");

        auto& flags = seen[date];
        const auto h = static_cast<std::size_t>(hour - 1);
        if (flags[h]) fail(line_no, "duplicate cell (" + date + ", " + std::to_string(hour) + ")");
        flags[h] = true;
        cells[date][h] = value;
    }
    if (!header_done) throw DataError(source + ": empty file");

    LoadResult result;
    std::vector<Date> dates;
    std::vector<double> values;
    for (const auto& [date, flags] : seen) {
        const auto present = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
        if (present != kHours) {
            const std::string msg = source + ": day " + date + " has " + std::to_string(present) + " of 24 hours";
            if (!options.drop_incomplete_days) throw DataError(msg);
            result.warnings.push_back(msg + "; dropped");
            continue;
        }
        dates.push_back(date);
        const auto& row = cells.at(date);
        values.insert(values.end(), row.begin(), row.end());
    }
    if (dates.empty()) throw DataError(source + ": no complete days");
    result.panel = HourlyPanel(std::move(dates), std::move(values));
    return result;
}

LoadResult load_panel(const std::filesystem::path& path, PanelRole role, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + std::string(role == PanelRole::Realization ? "realization" : "forecast") +
                        " file " + path.string());
    }
    return parse_panel_csv(in, path.string(), options);
}

void write_panel_csv(std::ostream& out, const HourlyPanel& panel) {
    out << "date,hour,value\n";
    for (std::size_t t = 0; t < panel.days(); ++t) {
        for (std::size_t h = 0; h < kHours; ++h) {
            out << panel.date(t) << ',' << (h + 1) << ',' << csv::format_double(panel(t, h)) << '\n';
        }
    }
}

ErrorPanel compute_errors(const HourlyPanel& real, const HourlyPanel& fc) {
    if (real.days() != fc.days()) throw DataError("compute_errors: panels differ in number of days");
    if (real.dates() != fc.dates()) throw DataError("compute_errors: panels differ in dates");
    const auto a = real.values();
    const auto b = fc.values();
    std::vector<double> diff(a.size());
    std::transform(a.begin(), a.end(), b.begin(), diff.begin(), std::minus<>{});
    return ErrorPanel(real.dates(), std::move(diff));
}

std::pair<HourlyPanel, HourlyPanel> intersect_dates(const HourlyPanel& a, const HourlyPanel& b) {
    std::vector<Date> dates;
    std::vector<double> va;
    std::vector<double> vb;
    for (std::size_t t = 0; t < a.days(); ++t) {
        const auto u = b.find(a.date(t));
        if (u == b.days()) continue;
        dates.push_back(a.date(t));
        va.insert(va.end(), a.row(t).begin(), a.row(t).end());
        vb.insert(vb.end(), b.row(u).begin(), b.row(u).end());
    }
    if (dates.empty()) throw DataError("panels share no dates");
    return {HourlyPanel(dates, std::move(va)), HourlyPanel(dates, std::move(vb))};
}

}  // namespace schaake
