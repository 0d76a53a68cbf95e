#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace schaake {

enum class FilterKind { Raw, ArGarch, Sarima };

std::string to_string(FilterKind kind);
/// Accepts "raw", "ar_garch" / "argarch", "sarima". Throws std::invalid_argument.
FilterKind parse_filter_kind(const std::string& text);

struct FilterSpec {
    FilterKind kind = FilterKind::Raw;
    /// Seasonal lag for Sarima.
    std::size_t seasonal_period = 7;

    void validate() const;
    std::size_t min_window() const noexcept;

    friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

/// AR(1) mean with GARCH(1,1) conditional variance.
///   e_t = c + phi * e_{t-1} + a_t,  a_t = sigma_t * eta_t
///   sigma_t^2 = omega + alpha * a_{t-1}^2 + beta * sigma_{t-1}^2
struct ArGarchParams {
    double c = 0.0;
    double phi = 0.0;
    double omega = 1.0;
    double alpha = 0.0;
    double beta = 0.0;

    bool valid() const noexcept;
    double unconditional_variance() const noexcept { return omega / (1.0 - alpha - beta); }
};

/// SARIMA(1,0,0)(1,0,0)_s with intercept and constant residual sd:
///   (1 - phi B)(1 - Phi B^s) e_t = c + a_t
struct SarimaParams {
    double c = 0.0;
    double phi = 0.0;
    double seasonal_phi = 0.0;
    double sigma = 1.0;
    std::size_t period = 7;

    bool valid() const noexcept;
};

using FilterParams = std::variant<std::monostate, ArGarchParams, SarimaParams>;

struct OneStep {
    double mu = 0.0;
    double sigma = 1.0;
};

struct FilterOutput {
    std::vector<double> mu_hat;
    std::vector<double> sigma_hat;
    std::vector<double> z;
    OneStep one_step;
};

struct FitDiagnostics {
    double log_likelihood = 0.0;
    std::size_t iterations = 0;
    std::size_t restarts = 0;
};

struct FilterFit {
    FilterSpec spec;
    FilterParams params;
    FilterOutput output;
    FitDiagnostics diagnostics;
};

/**
 * Fit the error model of one hour over its learning window and return the
 * filtered paths plus the one-step-ahead forecast.
 *
 * Raw: mu = 0, sigma = 1, z = errors. ArGarch: Gaussian QMLE by Nelder-Mead
 * in a transformed space, up to 5 jittered restarts. Sarima: conditional
 * least squares. Throws std::invalid_argument when the window is too short
 * and NumericalError on constant input or non-convergence.
 */
FilterFit fit_filter(std::span<const double> errors, const FilterSpec& spec,
                     std::uint64_t seed = 0);

/// Run a fitted model over a (possibly different) window without re-estimating.
FilterOutput apply_filter(const FilterParams& params, std::span<const double> errors);

/// (eps - mu) / sigma. Throws std::invalid_argument when sigma <= 0.
double standardize_next(double eps, const OneStep& one_step);
double destandardize(double z, const OneStep& one_step);

/// Gaussian QMLE log-likelihood (without the 2*pi constant).
double argarch_log_likelihood(const ArGarchParams& params, std::span<const double> errors);

ArGarchParams estimate_argarch(std::span<const double> errors, std::uint64_t seed,
                               FitDiagnostics* diagnostics = nullptr);
SarimaParams estimate_sarima(std::span<const double> errors, std::size_t period,
                             FitDiagnostics* diagnostics = nullptr);

nlohmann::json to_json(const FilterParams& params);

}  // namespace schaake
