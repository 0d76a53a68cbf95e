#include "schaake/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "schaake/csv_io.hpp"
#include "schaake/errors.hpp"

namespace schaake {

EnsembleForecast::EnsembleForecast(Date date, std::size_t members, std::size_t dims, std::vector<double> values)
    : date_(std::move(date)), members_(members), dims_(dims), values_(std::move(values)) {
    if (members_ == 0 || dims_ == 0) throw std::invalid_argument("ensemble forecast must be non-empty");
    if (values_.size() != members_ * dims_) throw std::invalid_argument("ensemble forecast shape mismatch");
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("ensemble forecast values must be finite");
    }
}

std::vector<double> EnsembleForecast::column(std::size_t h) const {
    std::vector<double> out(members_);
    for (std::size_t k = 0; k < members_; ++k) out[k] = values_[k * dims_ + h];
    return out;
}

std::vector<double> EnsembleForecast::sorted_column(std::size_t h) const {
    auto out = column(h);
    std::sort(out.begin(), out.end());
    return out;
}

UnivariateEnsemble make_univariate_ensemble(double point_forecast, const OneStep& one_step,
                                            const MarginModel& margin, std::size_t m, std::size_t hour) {
    if (!(one_step.sigma > 0.0)) throw std::invalid_argument("make_univariate_ensemble: sigma must be positive");
    if (!std::isfinite(point_forecast) || !std::isfinite(one_step.mu)) {
        throw std::invalid_argument("make_univariate_ensemble: non-finite point forecast");
    }
    if (m < 1) throw std::invalid_argument("make_univariate_ensemble: m must be positive");

    UnivariateEnsemble ens;
    ens.hour = hour;
    ens.members.resize(m);
    const double center = point_forecast + one_step.mu;
    const double denom = static_cast<double>(m + 1);
    for (std::size_t i = 1; i <= m; ++i) {
        ens.members[i - 1] = center + margin.quantile(static_cast<double>(i) / denom) * one_step.sigma;
    }
    return ens;
}

EnsembleForecast shuffle(std::span<const UnivariateEnsemble> ensembles, const RankMatrix& ranks, const Date& date) {
    const std::size_t d = ensembles.size();
    if (d == 0) throw std::invalid_argument("shuffle: no ensembles");
    if (ranks.cols() != d) {
        throw std::invalid_argument("shuffle: rank matrix has " + std::to_string(ranks.cols()) + " columns for " +
                                    std::to_string(d) + " ensembles");
    }
    const std::size_t m = ranks.rows();
    for (const auto& e : ensembles) {
        if (e.members.size() != m) throw std::invalid_argument("shuffle: ensemble size differs from rank matrix rows");
        if (!std::is_sorted(e.members.begin(), e.members.end())) {
            throw std::invalid_argument("shuffle: ensemble members must be sorted");
        }
    }
    std::vector<double> values(m * d);
    for (std::size_t t = 0; t < m; ++t) {
        for (std::size_t h = 0; h < d; ++h) {
            values[t * d + h] = ensembles[h].members[static_cast<std::size_t>(ranks(t, h) - 1)];
        }
    }
    return EnsembleForecast(date, m, d, std::move(values));
}

EnsembleForecast independence_forecast(std::span<const UnivariateEnsemble> ensembles, std::uint64_t seed,
                                       const Date& date) {
    if (ensembles.empty()) throw std::invalid_argument("independence_forecast: no ensembles");
    const std::size_t m = ensembles.front().members.size();
    if (m == 0) throw std::invalid_argument("independence_forecast: empty ensemble");
    return shuffle(ensembles, random_rank_matrix(m, ensembles.size(), seed), date);
}

void write_ensemble_csv_header(std::ostream& out, std::size_t dims) {
    out << "date,member";
    for (std::size_t h = 0; h < dims; ++h) out << ",h" << (h + 1);
    out << '\n';
}

void write_ensemble_csv_rows(std::ostream& out, const EnsembleForecast& fc) {
    for (std::size_t k = 0; k < fc.members(); ++k) {
        out << fc.date() << ',' << (k + 1);
        for (std::size_t h = 0; h < fc.dims(); ++h) out << ',' << csv::format_double(fc(k, h));
        out << '\n';
    }
}

std::vector<EnsembleForecast> read_ensemble_csv(std::istream& in, const std::string& source) {
    auto fail = [&](std::size_t line_no, const std::string& msg) {
        throw DataError(source + ":" + std::to_string(line_no) + ": " + msg);
    };
    std::vector<EnsembleForecast> out;
    std::string line;
    std::size_t line_no = 0;
    std::size_t dims = 0;
    Date current;
    std::vector<double> values;
    std::size_t members = 0;
    auto flush = [&](std::size_t at) {
        if (members == 0) return;
        for (const auto& f : out) {
            if (f.date() == current) fail(at, "date " + current + " appears in separate blocks");
        }
        out.emplace_back(current, members, dims, std::move(values));
        values.clear();
        members = 0;
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = csv::trim(line);
        if (text.empty()) continue;
        const auto fields = csv::split(text);
        if (dims == 0) {
            if (fields.size() < 3 || fields[0] != "date" || fields[1] != "member") {
                fail(line_no, "expected header 'date,member,h1,...'");
            }
            dims = fields.size() - 2;
            continue;
        }
        if (fields.size() != dims + 2) fail(line_no, "expected " + std::to_string(dims + 2) + " fields");
        const Date date(fields[0]);
        if (date != current) {
            flush(line_no);
            current = date;
        }
        long long member = 0;
        if (!csv::parse_int(fields[1], member) || member != static_cast<long long>(members + 1)) {
            fail(line_no, "member index must count up from 1 within a date");
        }
        for (std::size_t h = 0; h < dims; ++h) {
            double v = 0.0;
            if (!csv::parse_double(fields[h + 2], v) || !std::isfinite(v)) {
                fail(line_no, "invalid value '" + std::string(fields[h + 2]) + "'");
            }
            values.push_back(v);
        }
        ++members;
    }
    flush(line_no);
    if (dims == 0) throw DataError(source + ": empty ensemble file");
    return out;
}

std::vector<UnivariateEnsemble> to_univariate(const EnsembleForecast& fc) {
    std::vector<UnivariateEnsemble> out(fc.dims());
    for (std::size_t h = 0; h < fc.dims(); ++h) {
        out[h].hour = h;
        out[h].members = fc.sorted_column(h);
    }
    return out;
}

}  // namespace schaake
