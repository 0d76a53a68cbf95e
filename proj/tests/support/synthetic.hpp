#pragma once

// Seeded generators of synthetic price panels and error processes used by the
// unit and acceptance tests.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "schaake/errorlearn.hpp"
#include "schaake/panel.hpp"

namespace schaake::testing {

/// `n` consecutive calendar days starting at `start` (YYYY-MM-DD).
std::vector<Date> consecutive_dates(const std::string& start, std::size_t n);

/// Deterministic daily-shaped point forecast level for hour h on day t.
double baseline_forecast(std::size_t t, std::size_t h);

/// days x 24 row-major standard normals, equicorrelated with `rho` across hours.
std::vector<double> equicorrelated_normals(std::size_t days, double rho, std::uint64_t seed);

/// AR(1)-GARCH(1,1) path driven by the given innovations; the first `burn_in`
/// steps are discarded. `innovations` must hold n + burn_in values.
std::vector<double> argarch_path(const ArGarchParams& p, const std::vector<double>& innovations,
                                 std::size_t burn_in);

std::vector<double> simulate_argarch(const ArGarchParams& p, std::size_t n, std::uint64_t seed,
                                     std::size_t burn_in = 500);

/// y_t = c + phi y_{t-1} + Phi y_{t-s} - phi Phi y_{t-s-1} + sigma e_t.
std::vector<double> simulate_sarima(const SarimaParams& p, std::size_t n, std::uint64_t seed,
                                    std::size_t burn_in = 500);

struct PanelPair {
    HourlyPanel real;
    HourlyPanel forecast;
};

/// Errors sigma * Gaussian with equicorrelation rho across hours; iid over days.
PanelPair gaussian_copula_panels(std::size_t days, double rho, double sigma, std::uint64_t seed);

/// Errors follow one AR(1)-GARCH(1,1) process per hour, with innovations
/// equicorrelated across hours.
PanelPair argarch_copula_panels(std::size_t days, const ArGarchParams& p, double rho, std::uint64_t seed);

}  // namespace schaake::testing
