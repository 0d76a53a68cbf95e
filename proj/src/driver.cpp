#include "schaake/driver.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "schaake/copula.hpp"
#include "schaake/csv_io.hpp"
#include "schaake/errors.hpp"
#include "schaake/rng.hpp"

namespace schaake {

ScorePanel SettingResult::scores() const {
    ScorePanel panel;
    for (const auto& d : days) {
        if (!d.skipped) panel.days.push_back(d.score);
    }
    return panel;
}

RankHistogram SettingResult::hour_histogram(std::size_t h, std::size_t m) const {
    auto hist = RankHistogram::per_rank(static_cast<int>(m + 1));
    for (const auto& d : days) {
        if (!d.skipped) hist.add(d.score.ranks.at(h));
    }
    return hist;
}

RankHistogram SettingResult::average_rank_histogram(std::size_t m, std::size_t bins) const {
    auto hist = RankHistogram::binned(static_cast<int>(m + 1), bins);
    for (const auto& d : days) {
        if (!d.skipped) hist.add(d.score.avg_rank);
    }
    return hist;
}

double SettingResult::slp_coverage(double nominal) const {
    std::vector<std::vector<double>> samples;
    std::vector<double> realized;
    for (const auto& d : days) {
        if (d.skipped || d.slp_scenarios.empty()) continue;
        samples.push_back(d.slp_scenarios);
        realized.push_back(d.slp_realized);
    }
    if (realized.empty()) return 0.0;
    return interval_coverage(samples, realized, nominal);
}

const SettingResult& BacktestResult::get(Setting s) const {
    for (const auto& r : settings) {
        if (r.setting == s) return r;
    }
    throw std::out_of_range("setting " + to_string(s) + " not in backtest result");
}

std::vector<DmEntry> BacktestResult::dm_tests() const {
    std::vector<DmEntry> out;
    for (std::size_t i = 0; i < settings.size(); ++i) {
        for (std::size_t j = i + 1; j < settings.size(); ++j) {
            const auto& a = settings[i];
            const auto& b = settings[j];
            for (const std::string metric : {"es", "crps"}) {
                std::vector<double> sa;
                std::vector<double> sb;
                for (std::size_t t = 0; t < a.days.size(); ++t) {
                    if (a.days[t].skipped || b.days[t].skipped) continue;
                    sa.push_back(metric == "es" ? a.days[t].score.es : a.days[t].score.crps_mean());
                    sb.push_back(metric == "es" ? b.days[t].score.es : b.days[t].score.crps_mean());
                }
                DmEntry e{a.setting, b.setting, metric, std::nullopt};
                if (sa.size() >= 2) {
                    try {
                        e.result = dm_test(sa, sb);
                    } catch (const NumericalError&) {
                    }
                }
                out.push_back(std::move(e));
            }
        }
    }
    return out;
}

WindowPlan plan_window(std::size_t target, std::size_t first_eval, const BacktestConfig& cfg) {
    if (target < cfg.error_window || target < first_eval) throw std::invalid_argument("plan_window: target too early");
    WindowPlan w;
    w.target = target;
    w.error_begin = target - cfg.error_window;
    w.error_end = target;
    w.margin_begin = target - cfg.margin_window;
    w.dependence_begin = target - cfg.dependence_window;
    w.fit_day = first_eval + ((target - first_eval) / cfg.refit_every) * cfg.refit_every;
    return w;
}

std::pair<std::size_t, std::size_t> evaluation_range(const HourlyPanel& real, const BacktestConfig& cfg) {
    const auto& dates = real.dates();
    std::size_t first = cfg.error_window;
    if (cfg.eval_start) {
        const auto idx = static_cast<std::size_t>(std::lower_bound(dates.begin(), dates.end(), *cfg.eval_start) -
                                                  dates.begin());
        if (idx < cfg.error_window) {
            throw DataError("insufficient history: evaluation start " + *cfg.eval_start + " leaves " +
                            std::to_string(idx) + " prior days, need " + std::to_string(cfg.error_window));
        }
        first = idx;
    }
    std::size_t last = dates.size();
    if (cfg.eval_end) {
        last = static_cast<std::size_t>(std::upper_bound(dates.begin(), dates.end(), *cfg.eval_end) - dates.begin());
    }
    if (first >= last) {
        throw DataError("insufficient history: no evaluation days after a " + std::to_string(cfg.error_window) +
                        "-day learning window (" + std::to_string(dates.size()) + " days available)");
    }
    return {first, last};
}

namespace {

struct FilterGroup {
    FilterSpec spec;
    std::vector<std::size_t> setting_slots;  // indices into cfg.settings
};

std::vector<FilterGroup> group_settings(const BacktestConfig& cfg) {
    std::vector<FilterGroup> groups;
    for (std::size_t i = 0; i < cfg.settings.size(); ++i) {
        const auto spec = cfg.filter_for(cfg.settings[i]);
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.spec == spec; });
        if (it == groups.end()) {
            groups.push_back(FilterGroup{spec, {}});
            it = groups.end() - 1;
        }
        it->setting_slots.push_back(i);
    }
    return groups;
}

class BacktestRunner {
public:
    BacktestRunner(const HourlyPanel& real, const HourlyPanel& fc, const BacktestConfig& cfg)
        : real_(real), fc_(fc), errors_(compute_errors(real, fc)), cfg_(cfg), groups_(group_settings(cfg)),
          profile_(cfg.profile_path ? load_profile(*cfg.profile_path) : default_synthetic_profile()) {
        std::tie(first_, last_) = evaluation_range(real_, cfg_);
    }

    BacktestResult run(std::size_t jobs) {
        BacktestResult result;
        result.config = cfg_;
        for (std::size_t t = first_; t < last_; ++t) result.eval_dates.push_back(real_.date(t));
        result.settings.resize(cfg_.settings.size());
        for (std::size_t i = 0; i < cfg_.settings.size(); ++i) {
            result.settings[i].setting = cfg_.settings[i];
            result.settings[i].days.resize(last_ - first_);
        }

        const std::size_t blocks = (last_ - first_ + cfg_.refit_every - 1) / cfg_.refit_every;
        std::vector<std::vector<FitRecord>> fit_log(blocks);
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;

        auto worker = [&] {
            while (true) {
                const std::size_t b = next.fetch_add(1);
                if (b >= blocks) return;
                try {
                    run_block(b, result, fit_log[b]);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(blocks);
                    return;
                }
            }
        };

        jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, blocks));
        if (jobs == 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(jobs);
            for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        }
        if (failure) std::rethrow_exception(failure);

        for (auto& log : fit_log) {
            for (auto& rec : log) result.fits.push_back(std::move(rec));
        }
        return result;
    }

private:
    // Filters fitted at the first day of the block; later days re-apply them.
    void run_block(std::size_t block, BacktestResult& result, std::vector<FitRecord>& fit_log) const {
        const std::size_t begin = first_ + block * cfg_.refit_every;
        const std::size_t end = std::min(last_, begin + cfg_.refit_every);
        for (const auto& group : groups_) {
            std::vector<FilterParams> params(kHours);
            std::string failure;
            const auto fit_plan = plan_window(begin, first_, cfg_);
            for (std::size_t h = 0; h < kHours && failure.empty(); ++h) {
                const auto window = errors_.column(h, fit_plan.error_begin, fit_plan.error_end);
                const auto seed = derive_seed(cfg_.seed, real_.date(begin), to_string(group.spec.kind),
                                              "filter-h" + std::to_string(h + 1));
                try {
                    params[h] = fit_filter(window, group.spec, seed).params;
                } catch (const NumericalError& e) {
                    failure = "hour " + std::to_string(h + 1) + ": " + e.what();
                }
                if (cfg_.audit_params && failure.empty()) {
                    fit_log.push_back(FitRecord{real_.date(begin), h + 1, group.spec, params[h]});
                }
            }
            for (std::size_t t = begin; t < end; ++t) {
                run_day(t, group, params, failure, result);
            }
        }
    }

    void run_day(std::size_t t, const FilterGroup& group, const std::vector<FilterParams>& params,
                 const std::string& fit_failure, BacktestResult& result) const {
        const std::size_t slot = t - first_;
        const Date& date = real_.date(t);
        auto skip_all = [&](const std::string& why) {
            for (auto i : group.setting_slots) {
                auto& out = result.settings[i].days[slot];
                out.date = date;
                out.skipped = true;
                out.diagnostic = why;
            }
        };
        if (!fit_failure.empty()) {
            skip_all("filter failure, " + fit_failure);
            return;
        }

        const auto plan = plan_window(t, first_, cfg_);
        const std::size_t window = cfg_.error_window;
        const std::size_t m = cfg_.dependence_window;

        std::vector<FilterOutput> filtered(kHours);
        try {
            for (std::size_t h = 0; h < kHours; ++h) {
                filtered[h] = apply_filter(params[h], errors_.column(h, plan.error_begin, plan.error_end));
            }
        } catch (const NumericalError& e) {
            skip_all(std::string("filter failure, ") + e.what());
            return;
        }

        const auto realized = real_.row(t);
        const double realized_slp = daily_price(realized, profile_);

        for (const MarginKind mk : {MarginKind::Empirical, MarginKind::Gaussian}) {
            std::vector<std::size_t> slots;
            for (auto i : group.setting_slots) {
                if (margin_kind(cfg_.settings[i]) == mk) slots.push_back(i);
            }
            if (slots.empty()) continue;

            std::vector<MarginModel> margins;
            std::vector<UnivariateEnsemble> ensembles;
            margins.reserve(kHours);
            ensembles.reserve(kHours);
            for (std::size_t h = 0; h < kHours; ++h) {
                const auto& z = filtered[h].z;
                margins.push_back(mk == MarginKind::Gaussian
                                      ? MarginModel::gaussian()
                                      : MarginModel::empirical(std::span<const double>(z).subspan(window - cfg_.margin_window)));
                ensembles.push_back(make_univariate_ensemble(fc_(t, h), filtered[h].one_step, margins[h], m, h));
            }

            // PIT of the last m standardized errors through each hour's margin.
            Eigen::MatrixXd pits(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(kHours));
            for (std::size_t h = 0; h < kHours; ++h) {
                for (std::size_t i = 0; i < m; ++i) {
                    pits(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(h)) =
                        margins[h].pit(filtered[h].z[window - m + i]);
                }
            }

            for (auto i : slots) {
                const Setting setting = cfg_.settings[i];
                const auto name = to_string(setting);
                auto& out = result.settings[i].days[slot];
                out.date = date;
                try {
                    EnsembleForecast forecast;
                    switch (copula_kind(setting)) {
                        case CopulaKind::Empirical:
                            forecast = shuffle(ensembles, empirical_rank_matrix(PitHistory(pits)), date);
                            break;
                        case CopulaKind::Gaussian: {
                            const auto sigma = fit_gaussian_copula(PitHistory(pits));
                            const auto ranks =
                                sample_gaussian_rank_matrix(sigma, m, derive_seed(cfg_.seed, date, name, "copula"));
                            forecast = shuffle(ensembles, ranks, date);
                            break;
                        }
                        case CopulaKind::Independence:
                            forecast = independence_forecast(ensembles, derive_seed(cfg_.seed, date, name, "independence"),
                                                             date);
                            break;
                    }
                    SplitMix64 rng(derive_seed(cfg_.seed, date, name, "average-rank"));
                    out.score = score_day(forecast, realized, rng);
                    out.slp_scenarios = scenario_daily_prices(forecast, profile_);
                    out.slp_realized = realized_slp;
                    if (cfg_.keep_forecasts) out.forecast = std::move(forecast);
                } catch (const NumericalError& e) {
                    out.skipped = true;
                    out.diagnostic = e.what();
                }
            }
        }
    }

    const HourlyPanel& real_;
    const HourlyPanel& fc_;
    ErrorPanel errors_;
    BacktestConfig cfg_;
    std::vector<FilterGroup> groups_;
    LoadProfile profile_;
    std::size_t first_ = 0;
    std::size_t last_ = 0;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

}  // namespace

BacktestResult run_backtest(const HourlyPanel& real, const HourlyPanel& fc, const BacktestConfig& cfg,
                            std::size_t jobs) {
    cfg.validate();
    if (real.dates() != fc.dates()) throw DataError("realization and forecast panels are not aligned");
    BacktestRunner runner(real, fc, cfg);
    return runner.run(jobs);
}

void write_backtest_outputs(const BacktestResult& result, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto& cfg = result.config;
    const std::size_t m = cfg.dependence_window;
    using csv::format_double;

    write_text(out_dir / "config.json", to_json(cfg).dump(2) + "\n");

    if (cfg.keep_forecasts) {
        fs::create_directories(out_dir / "forecasts");
        for (const auto& s : result.settings) {
            std::ostringstream os;
            write_ensemble_csv_header(os, kHours);
            for (const auto& d : s.days) {
                if (!d.skipped && d.forecast) write_ensemble_csv_rows(os, *d.forecast);
            }
            write_text(out_dir / "forecasts" / (to_string(s.setting) + ".csv"), os.str());
        }
    }

    {
        std::ostringstream os;
        os << "date,setting,es,crps_mean\n";
        for (const auto& s : result.settings) {
            for (const auto& d : s.days) {
                if (d.skipped) continue;
                os << d.date << ',' << to_string(s.setting) << ',' << format_double(d.score.es) << ','
                   << format_double(d.score.crps_mean()) << '\n';
            }
        }
        write_text(out_dir / "scores.csv", os.str());
    }

    {
        std::ostringstream os;
        os << "date,setting,diagnostic\n";
        for (const auto& s : result.settings) {
            for (const auto& d : s.days) {
                if (d.skipped) os << d.date << ',' << to_string(s.setting) << ",\"" << d.diagnostic << "\"\n";
            }
        }
        write_text(out_dir / "skipped.csv", os.str());
    }

    for (const auto& s : result.settings) {
        std::ostringstream os;
        os << "hour,bin,count\n";
        for (std::size_t h = 0; h < kHours; ++h) {
            const auto hist = s.hour_histogram(h, m);
            for (std::size_t b = 0; b < hist.counts.size(); ++b) os << (h + 1) << ',' << (b + 1) << ',' << hist.counts[b] << '\n';
        }
        const auto avg = s.average_rank_histogram(m);
        for (std::size_t b = 0; b < avg.counts.size(); ++b) os << "avg," << (b + 1) << ',' << avg.counts[b] << '\n';
        write_text(out_dir / ("histogram_" + to_string(s.setting) + ".csv"), os.str());
    }

    {
        std::ostringstream os;
        os << "setting_a,setting_b,metric,statistic,p_value\n";
        for (const auto& e : result.dm_tests()) {
            os << to_string(e.a) << ',' << to_string(e.b) << ',' << e.metric << ',';
            if (e.result) {
                os << format_double(e.result->statistic) << ',' << format_double(e.result->p_value) << '\n';
            } else {
                os << "NA,NA\n";
            }
        }
        write_text(out_dir / "dm.csv", os.str());
    }

    {
        std::ostringstream cov;
        std::ostringstream iv;
        cov << "setting,nominal,k,days,coverage\n";
        iv << "date,setting,realized,lower,upper,inside\n";
        const std::size_t k = interval_order_statistic(m, cfg.nominal);
        for (const auto& s : result.settings) {
            std::size_t days = 0;
            for (const auto& d : s.days) {
                if (d.skipped || d.slp_scenarios.empty()) continue;
                ++days;
                const auto interval = central_interval(d.slp_scenarios, cfg.nominal);
                const bool inside = d.slp_realized >= interval.lower && d.slp_realized <= interval.upper;
                iv << d.date << ',' << to_string(s.setting) << ',' << format_double(d.slp_realized) << ','
                   << format_double(interval.lower) << ',' << format_double(interval.upper) << ',' << (inside ? 1 : 0)
                   << '\n';
            }
            cov << to_string(s.setting) << ',' << format_double(cfg.nominal) << ',' << k << ',' << days << ','
                << (days ? format_double(s.slp_coverage(cfg.nominal)) : "NA") << '\n';
        }
        write_text(out_dir / "coverage.csv", cov.str());
        write_text(out_dir / "slp_intervals.csv", iv.str());
    }

    if (cfg.audit_params) {
        nlohmann::json fits = nlohmann::json::array();
        for (const auto& f : result.fits) {
            fits.push_back({{"date", f.date}, {"hour", f.hour}, {"params", to_json(f.params)}});
        }
        write_text(out_dir / "filter_params.json", fits.dump(1) + "\n");
    }
}

ToyExample run_toy_example() {
    // Quantiles at levels 1/8..7/8 for four hours (00:00, 06:00, 12:00, 18:00).
    const std::vector<std::vector<double>> quantiles{{6.1, 16.1, 23.6, 30.3, 37.0, 44.5, 54.5},
                                                     {21.7, 31.6, 39.0, 45.7, 52.3, 59.7, 69.6},
                                                     {27.2, 37.0, 44.4, 50.9, 57.5, 64.8, 74.6},
                                                     {26.7, 36.5, 43.9, 50.5, 57.0, 64.4, 74.2}};
    RankMatrix::Storage ranks(7, 4);
    ranks << 1, 2, 1, 2,
             4, 3, 3, 5,
             5, 4, 7, 7,
             2, 1, 2, 1,
             3, 5, 5, 6,
             7, 7, 6, 4,
             6, 6, 4, 3;

    std::vector<UnivariateEnsemble> ensembles;
    for (std::size_t h = 0; h < quantiles.size(); ++h) ensembles.push_back(UnivariateEnsemble{h, quantiles[h]});
    RankMatrix r(std::move(ranks));
    auto forecast = shuffle(ensembles, r, "toy");
    return ToyExample{std::move(ensembles), std::move(r), std::move(forecast)};
}

}  // namespace schaake
