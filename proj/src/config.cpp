#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include "schaake/driver.hpp"
#include "schaake/errors.hpp"

namespace schaake {

std::string to_string(Setting s) {
    switch (s) {
        case Setting::SchaakeNP: return "Schaake-NP";
        case Setting::SchaakeP: return "Schaake-P";
        case Setting::SchaakeRaw: return "Schaake-Raw";
        case Setting::IndepNP: return "I-NP";
        case Setting::IndepP: return "I-P";
        case Setting::IndepRaw: return "I-Raw";
    }
    return "unknown";
}

Setting parse_setting(const std::string& name) {
    for (Setting s : kAllSettings) {
        if (to_string(s) == name) return s;
    }
    throw std::invalid_argument("unknown setting '" + name + "'");
}

MarginKind margin_kind(Setting s) noexcept {
    return (s == Setting::SchaakeP || s == Setting::IndepP) ? MarginKind::Gaussian : MarginKind::Empirical;
}

CopulaKind copula_kind(Setting s) noexcept {
    switch (s) {
        case Setting::SchaakeNP:
        case Setting::SchaakeRaw: return CopulaKind::Empirical;
        case Setting::SchaakeP: return CopulaKind::Gaussian;
        default: return CopulaKind::Independence;
    }
}

bool uses_filter(Setting s) noexcept { return s != Setting::SchaakeRaw && s != Setting::IndepRaw; }

Setting counterpart(Setting s) noexcept {
    switch (s) {
        case Setting::SchaakeNP: return Setting::IndepNP;
        case Setting::SchaakeP: return Setting::IndepP;
        case Setting::SchaakeRaw: return Setting::IndepRaw;
        case Setting::IndepNP: return Setting::SchaakeNP;
        case Setting::IndepP: return Setting::SchaakeP;
        case Setting::IndepRaw: return Setting::SchaakeRaw;
    }
    return s;
}

FilterSpec BacktestConfig::filter_for(Setting s) const {
    if (const auto it = filter_overrides.find(s); it != filter_overrides.end()) return it->second;
    if (!uses_filter(s)) return FilterSpec{FilterKind::Raw, filter.seasonal_period};
    return filter;
}

void BacktestConfig::validate() const {
    auto bad = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
    if (settings.empty()) bad("no settings selected");
    if (std::set<Setting>(settings.begin(), settings.end()).size() != settings.size()) bad("duplicate settings");
    if (dependence_window < 2) bad("dependence_window must be at least 2");
    if (margin_window < 1) bad("margin_window must be at least 1");
    if (refit_every < 1) bad("refit_every must be at least 1");
    if (!(nominal > 0.0 && nominal < 1.0)) bad("nominal must lie in (0, 1)");
    if (error_window < margin_window) bad("error_window must be >= margin_window");
    if (error_window < dependence_window) bad("error_window must be >= dependence_window");
    for (Setting s : settings) {
        const auto spec = filter_for(s);
        spec.validate();
        if (error_window < spec.min_window()) {
            bad("error_window " + std::to_string(error_window) + " is shorter than the " + to_string(spec.kind) +
                " minimum of " + std::to_string(spec.min_window()));
        }
    }
    if (eval_start && !is_iso_date(*eval_start)) bad("eval_start is not YYYY-MM-DD");
    if (eval_end && !is_iso_date(*eval_end)) bad("eval_end is not YYYY-MM-DD");
    if (eval_start && eval_end && *eval_end < *eval_start) bad("eval_end precedes eval_start");
}

namespace {

FilterSpec filter_from_json(const nlohmann::json& j) {
    FilterSpec spec;
    if (j.is_string()) {
        spec.kind = parse_filter_kind(j.get<std::string>());
        return spec;
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "kind") {
            spec.kind = parse_filter_kind(value.get<std::string>());
        } else if (key == "seasonal_period") {
            spec.seasonal_period = value.get<std::size_t>();
        } else {
            throw std::invalid_argument("config: unknown filter key '" + key + "'");
        }
    }
    return spec;
}

nlohmann::json filter_to_json(const FilterSpec& spec) {
    return {{"kind", to_string(spec.kind)}, {"seasonal_period", spec.seasonal_period}};
}

}  // namespace

BacktestConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
    BacktestConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "error_window") {
                cfg.error_window = value.get<std::size_t>();
            } else if (key == "margin_window") {
                cfg.margin_window = value.get<std::size_t>();
            } else if (key == "dependence_window") {
                cfg.dependence_window = value.get<std::size_t>();
            } else if (key == "settings") {
                cfg.settings.clear();
                for (const auto& s : value) cfg.settings.push_back(parse_setting(s.get<std::string>()));
            } else if (key == "filter") {
                cfg.filter = filter_from_json(value);
            } else if (key == "filter_overrides") {
                for (const auto& [name, spec] : value.items()) cfg.filter_overrides[parse_setting(name)] = filter_from_json(spec);
            } else if (key == "seed") {
                cfg.seed = value.get<std::uint64_t>();
            } else if (key == "eval_start") {
                cfg.eval_start = value.get<std::string>();
            } else if (key == "eval_end") {
                cfg.eval_end = value.get<std::string>();
            } else if (key == "refit_every") {
                cfg.refit_every = value.get<std::size_t>();
            } else if (key == "nominal") {
                cfg.nominal = value.get<double>();
            } else if (key == "profile") {
                cfg.profile_path = value.get<std::string>();
            } else if (key == "keep_forecasts") {
                cfg.keep_forecasts = value.get<bool>();
            } else if (key == "audit_params") {
                cfg.audit_params = value.get<bool>();
            } else {
                throw std::invalid_argument("config: unknown key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

BacktestConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("config " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

nlohmann::json to_json(const BacktestConfig& cfg) {
    nlohmann::json j;
    j["error_window"] = cfg.error_window;
    j["margin_window"] = cfg.margin_window;
    j["dependence_window"] = cfg.dependence_window;
    j["settings"] = nlohmann::json::array();
    for (Setting s : cfg.settings) j["settings"].push_back(to_string(s));
    j["filter"] = filter_to_json(cfg.filter);
    j["filter_overrides"] = nlohmann::json::object();
    for (const auto& [s, spec] : cfg.filter_overrides) j["filter_overrides"][to_string(s)] = filter_to_json(spec);
    j["seed"] = cfg.seed;
    if (cfg.eval_start) j["eval_start"] = *cfg.eval_start;
    if (cfg.eval_end) j["eval_end"] = *cfg.eval_end;
    j["refit_every"] = cfg.refit_every;
    j["nominal"] = cfg.nominal;
    if (cfg.profile_path) j["profile"] = cfg.profile_path->string();
    j["keep_forecasts"] = cfg.keep_forecasts;
    j["audit_params"] = cfg.audit_params;
    return j;
}

}  // namespace schaake
