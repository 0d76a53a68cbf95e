// Command line front end: backtest, toy-example, evaluate, shuffle, slp.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "schaake/aggregate.hpp"
#include "schaake/copula.hpp"
#include "schaake/csv_io.hpp"
#include "schaake/driver.hpp"
#include "schaake/errors.hpp"
#include "schaake/evaluate.hpp"
#include "schaake/forecast.hpp"
#include "schaake/panel.hpp"
#include "schaake/rng.hpp"

namespace fs = std::filesystem;
using namespace schaake;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

HourlyPanel load_or_warn(const fs::path& path, PanelRole role) {
    auto loaded = load_panel(path, role);
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
    return std::move(loaded.panel);
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return in;
}

std::vector<EnsembleForecast> load_ensembles(const fs::path& path) {
    auto in = open_input(path);
    return read_ensemble_csv(in, path.string());
}

std::ostream& output_stream(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw DataError("cannot write " + path);
    return file;
}

struct BacktestArgs {
    std::string real;
    std::string forecast;
    std::string config;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> settings;
    std::size_t jobs = 1;
};

int cmd_backtest(const BacktestArgs& a) {
    BacktestConfig cfg = a.config.empty() ? BacktestConfig{} : load_config(a.config);
    if (a.seed) cfg.seed = *a.seed;
    if (!a.settings.empty()) {
        cfg.settings.clear();
        for (const auto& s : a.settings) cfg.settings.push_back(parse_setting(s));
    }
    auto real = load_or_warn(a.real, PanelRole::Realization);
    auto fc = load_or_warn(a.forecast, PanelRole::Forecast);
    if (real.dates() != fc.dates()) {
        std::cerr << "warning: realization and forecast dates differ; using the " << "common dates\n";
        std::tie(real, fc) = intersect_dates(real, fc);
    }
    const auto result = run_backtest(real, fc, cfg, a.jobs);
    write_backtest_outputs(result, a.out_dir);

    std::cout << "evaluation days: " << result.eval_dates.size() << " (" << result.eval_dates.front() << " .. "
              << result.eval_dates.back() << ")\n";
    std::cout << "setting        mean_es      mean_crps    skipped\n";
    for (const auto& s : result.settings) {
        const auto sc = s.scores();
        std::size_t skipped = 0;
        for (const auto& d : s.days) skipped += d.skipped ? 1 : 0;
        std::printf("%-14s %-12.5f %-12.5f %zu\n", to_string(s.setting).c_str(),
                    sc.days.empty() ? 0.0 : sc.mean_es(), sc.days.empty() ? 0.0 : sc.mean_crps(), skipped);
    }
    std::cout << "outputs written to " << a.out_dir << '\n';
    return 0;
}

int cmd_toy(const std::string& out) {
    const auto toy = run_toy_example();
    std::ofstream file;
    auto& os = output_stream(out, file);
    write_ensemble_csv_header(os, toy.forecast.dims());
    write_ensemble_csv_rows(os, toy.forecast);
    return 0;
}

// Score ensemble files (one per setting, named by file stem) against realizations.
int cmd_evaluate(const std::string& real_path, const std::vector<std::string>& files, const std::string& out,
                 std::uint64_t seed, std::size_t bins) {
    const auto real = load_or_warn(real_path, PanelRole::Realization);
    std::vector<std::pair<std::string, std::map<Date, DayScore>>> scored;
    std::size_t m = 0;
    for (const auto& f : files) {
        const auto name = fs::path(f).stem().string();
        std::map<Date, DayScore> days;
        for (const auto& fc : load_ensembles(f)) {
            const auto t = real.find(fc.date());
            if (t == real.days()) throw DataError(f + ": no realization for " + fc.date());
            if (m == 0) m = fc.members();
            if (fc.members() != m) throw DataError(f + ": ensemble size differs between files or days");
            SplitMix64 rng(derive_seed(seed, fc.date(), name, "average-rank"));
            days.emplace(fc.date(), score_day(fc, real.row(t), rng));
        }
        scored.emplace_back(name, std::move(days));
    }

    std::ofstream file;
    auto& os = output_stream(out, file);
    os << "setting,days,mean_es,mean_crps,avg_rank_chi2,avg_rank_pass\n";
    for (const auto& [name, days] : scored) {
        ScorePanel panel;
        auto hist = RankHistogram::binned(static_cast<int>(m + 1), bins);
        for (const auto& [d, s] : days) {
            panel.days.push_back(s);
            hist.add(s.avg_rank);
        }
        if (panel.days.empty()) continue;
        const auto chi = chi_square_uniformity(hist);
        os << name << ',' << panel.days.size() << ',' << csv::format_double(panel.mean_es()) << ','
           << csv::format_double(panel.mean_crps()) << ',' << csv::format_double(chi.statistic) << ','
           << (chi.pass ? 1 : 0) << '\n';
    }
    for (std::size_t i = 0; i < scored.size(); ++i) {
        for (std::size_t j = i + 1; j < scored.size(); ++j) {
            std::vector<double> a;
            std::vector<double> b;
            for (const auto& [d, s] : scored[i].second) {
                const auto it = scored[j].second.find(d);
                if (it == scored[j].second.end()) continue;
                a.push_back(s.es);
                b.push_back(it->second.es);
            }
            std::cerr << "DM(es) " << scored[i].first << " vs " << scored[j].first << ": ";
            try {
                const auto dm = dm_test(a, b);
                std::cerr << "stat " << dm.statistic << ", p " << dm.p_value << ", n " << dm.n << '\n';
            } catch (const NumericalError& e) {
                std::cerr << "undefined (" << e.what() << ")\n";
            }
        }
    }
    return 0;
}

int cmd_shuffle(const std::string& ens_path, const std::string& ranks_path, const std::string& out) {
    const auto input = load_ensembles(ens_path);
    if (input.size() != 1) throw DataError(ens_path + ": expected exactly one forecast day, found " +
                                           std::to_string(input.size()));
    auto rin = open_input(ranks_path);
    const auto ranks = read_rank_matrix_csv(rin, ranks_path);
    const auto fc = shuffle(to_univariate(input.front()), ranks, input.front().date());
    std::ofstream file;
    auto& os = output_stream(out, file);
    write_ensemble_csv_header(os, fc.dims());
    write_ensemble_csv_rows(os, fc);
    return 0;
}

int cmd_slp(const std::string& real_path, const std::vector<std::string>& files, const std::string& profile_path,
            double nominal, const std::string& out) {
    const auto real = load_or_warn(real_path, PanelRole::Realization);
    const auto profile = profile_path.empty() ? default_synthetic_profile() : load_profile(profile_path);
    std::ofstream file;
    auto& os = output_stream(out, file);
    os << "setting,nominal,k,days,coverage\n";
    for (const auto& f : files) {
        std::vector<std::vector<double>> samples;
        std::vector<double> realized;
        std::size_t m = 0;
        for (const auto& fc : load_ensembles(f)) {
            const auto t = real.find(fc.date());
            if (t == real.days()) throw DataError(f + ": no realization for " + fc.date());
            m = fc.members();
            samples.push_back(scenario_daily_prices(fc, profile));
            realized.push_back(daily_price(real.row(t), profile));
        }
        if (samples.empty()) continue;
        os << fs::path(f).stem().string() << ',' << csv::format_double(nominal) << ','
           << interval_order_statistic(m, nominal) << ',' << samples.size() << ','
           << csv::format_double(interval_coverage(samples, realized, nominal)) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multivariate day-ahead ensemble forecasts by error learning and copula reordering"};
    app.require_subcommand(1);

    BacktestArgs bt;
    auto* backtest = app.add_subcommand("backtest", "Rolling-window backtest of all configured settings");
    backtest->add_option("--real", bt.real, "Realized prices, date,hour,value CSV")->required()->check(CLI::ExistingFile);
    backtest->add_option("--forecast", bt.forecast, "Point forecasts, date,hour,value CSV")
        ->required()
        ->check(CLI::ExistingFile);
    backtest->add_option("--config", bt.config, "JSON config")->check(CLI::ExistingFile);
    backtest->add_option("--out-dir", bt.out_dir, "Output directory")->capture_default_str();
    backtest->add_option("--seed", bt.seed, "Master seed (overrides config)");
    backtest->add_option("--settings", bt.settings, "Subset of settings, e.g. Schaake-NP,I-NP")->delimiter(',');
    backtest->add_option("--jobs", bt.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

    std::string toy_out;
    auto* toy = app.add_subcommand("toy-example", "Print the four-hour, seven-member reordering example");
    toy->add_option("--out", toy_out, "Output CSV (default stdout)");

    std::string eval_real;
    std::vector<std::string> eval_files;
    std::string eval_out;
    std::uint64_t eval_seed = 20240101;
    std::size_t eval_bins = 10;
    auto* evaluate = app.add_subcommand("evaluate", "Rescore ensemble CSVs against realizations");
    evaluate->add_option("--real", eval_real, "Realized prices CSV")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--forecasts", eval_files, "Ensemble CSVs, one per setting")
        ->required()
        ->check(CLI::ExistingFile);
    evaluate->add_option("--out", eval_out, "Summary CSV (default stdout)");
    evaluate->add_option("--seed", eval_seed, "Seed for average-rank tie breaking")->capture_default_str();
    evaluate->add_option("--bins", eval_bins, "Average rank histogram bins")->capture_default_str();

    std::string sh_ens;
    std::string sh_ranks;
    std::string sh_out;
    auto* shuf = app.add_subcommand("shuffle", "Reorder one day's ensembles by a rank matrix");
    shuf->add_option("--ensembles", sh_ens, "Ensemble CSV (date,member,h1..hd), one day")
        ->required()
        ->check(CLI::ExistingFile);
    shuf->add_option("--ranks", sh_ranks, "Rank matrix CSV (h1..hd)")->required()->check(CLI::ExistingFile);
    shuf->add_option("--out", sh_out, "Output CSV (default stdout)");

    std::string slp_real;
    std::vector<std::string> slp_files;
    std::string slp_profile;
    double slp_nominal = 0.9333;
    std::string slp_out;
    auto* slp = app.add_subcommand("slp", "Daily load-profile price intervals and coverage");
    slp->add_option("--real", slp_real, "Realized prices CSV")->required()->check(CLI::ExistingFile);
    slp->add_option("--forecasts", slp_files, "Ensemble CSVs")->required()->check(CLI::ExistingFile);
    slp->add_option("--profile", slp_profile, "hour,weight CSV (default: built-in synthetic profile)")
        ->check(CLI::ExistingFile);
    slp->add_option("--nominal", slp_nominal, "Nominal interval level")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    slp->add_option("--out", slp_out, "Output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*backtest) return cmd_backtest(bt);
        if (*toy) return cmd_toy(toy_out);
        if (*evaluate) return cmd_evaluate(eval_real, eval_files, eval_out, eval_seed, eval_bins);
        if (*shuf) return cmd_shuffle(sh_ens, sh_ranks, sh_out);
        if (*slp) return cmd_slp(slp_real, slp_files, slp_profile, slp_nominal, slp_out);
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
