#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "schaake/aggregate.hpp"
#include "schaake/errorlearn.hpp"
#include "schaake/evaluate.hpp"
#include "schaake/forecast.hpp"
#include "schaake/panel.hpp"

namespace schaake {

enum class Setting { SchaakeNP, SchaakeP, SchaakeRaw, IndepNP, IndepP, IndepRaw };

enum class CopulaKind { Empirical, Gaussian, Independence };

inline constexpr Setting kAllSettings[] = {Setting::SchaakeNP, Setting::SchaakeP, Setting::SchaakeRaw,
                                           Setting::IndepNP,   Setting::IndepP,   Setting::IndepRaw};

std::string to_string(Setting s);
/// "Schaake-NP", "I-Raw", ... Throws std::invalid_argument.
Setting parse_setting(const std::string& name);

MarginKind margin_kind(Setting s) noexcept;
CopulaKind copula_kind(Setting s) noexcept;
bool uses_filter(Setting s) noexcept;
/// Setting with the same margins and the opposite dependence model.
Setting counterpart(Setting s) noexcept;

struct BacktestConfig {
    std::size_t error_window = 364;
    std::size_t margin_window = 90;
    /// Also the ensemble size m.
    std::size_t dependence_window = 90;
    std::vector<Setting> settings{std::begin(kAllSettings), std::end(kAllSettings)};
    /// Filter used by the filtered settings (NP and P variants).
    FilterSpec filter{FilterKind::ArGarch, 7};
    /// Per-setting overrides of `filter`.
    std::map<Setting, FilterSpec> filter_overrides;
    std::uint64_t seed = 20240101;
    std::optional<Date> eval_start;
    std::optional<Date> eval_end;
    /// Re-estimate filters every k days; in between, fitted parameters are
    /// re-applied to the rolled window.
    std::size_t refit_every = 1;
    /// Nominal central interval level for the load-profile coverage report.
    double nominal = 0.9333;
    std::optional<std::filesystem::path> profile_path;
    bool keep_forecasts = true;
    /// Record every fitted filter's parameters (filter_params.json).
    bool audit_params = false;

    FilterSpec filter_for(Setting s) const;
    void validate() const;
};

BacktestConfig config_from_json(const nlohmann::json& j);
BacktestConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const BacktestConfig& cfg);

/// One setting's outcome on one evaluation day.
struct DayOutcome {
    Date date;
    bool skipped = false;
    std::string diagnostic;
    std::optional<EnsembleForecast> forecast;
    DayScore score;
    std::vector<double> slp_scenarios;
    double slp_realized = 0.0;
};

struct SettingResult {
    Setting setting{};
    std::vector<DayOutcome> days;

    ScorePanel scores() const;  // non-skipped days only
    RankHistogram hour_histogram(std::size_t h, std::size_t m) const;
    RankHistogram average_rank_histogram(std::size_t m, std::size_t bins = 10) const;
    double slp_coverage(double nominal) const;
};

struct DmEntry {
    Setting a{};
    Setting b{};
    std::string metric;  // "es" or "crps"
    std::optional<DmResult> result;  // empty when undefined (zero variance)
};

/// Parameters of one hourly filter estimated on `date` (the first day it forecasts).
struct FitRecord {
    Date date;
    std::size_t hour = 0;
    FilterSpec spec;
    FilterParams params;
};

struct BacktestResult {
    BacktestConfig config;
    std::vector<Date> eval_dates;
    std::vector<SettingResult> settings;
    std::vector<FitRecord> fits;  // filled when config.audit_params is set

    const SettingResult& get(Setting s) const;
    /// DM tests for every pair of settings on both metrics, days skipped by
    /// either side excluded.
    std::vector<DmEntry> dm_tests() const;
};

/// Window boundaries (row indices, half-open) used to forecast day index t.
struct WindowPlan {
    std::size_t target = 0;
    std::size_t error_begin = 0;
    std::size_t error_end = 0;
    std::size_t margin_begin = 0;
    std::size_t dependence_begin = 0;
    std::size_t fit_day = 0;  // day index at which the filter was estimated
};

WindowPlan plan_window(std::size_t target, std::size_t first_eval, const BacktestConfig& cfg);

/// Evaluation day indices implied by the config and the panel dates.
std::pair<std::size_t, std::size_t> evaluation_range(const HourlyPanel& real, const BacktestConfig& cfg);

/**
 * Rolling-window backtest. For each evaluation day and setting: fit the error
 * filter on the trailing error window, build margins and the rank matrix from
 * the trailing standardized errors, form the ensemble and score it against
 * the realization. Days are processed by `jobs` workers; results do not depend
 * on the worker count. Throws DataError on misaligned panels or insufficient
 * history.
 */
BacktestResult run_backtest(const HourlyPanel& real, const HourlyPanel& fc, const BacktestConfig& cfg,
                            std::size_t jobs = 1);

/// Write forecasts, scores, histograms, DM tests and the coverage report.
void write_backtest_outputs(const BacktestResult& result, const std::filesystem::path& out_dir);

/// Four-hour, seven-member worked example of the reordering.
struct ToyExample {
    std::vector<UnivariateEnsemble> ensembles;
    RankMatrix ranks;
    EnsembleForecast forecast;
};

ToyExample run_toy_example();

}  // namespace schaake
