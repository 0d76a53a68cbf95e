#include "schaake/errorlearn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "schaake/errors.hpp"
#include "schaake/optim.hpp"
#include "schaake/rng.hpp"

namespace schaake {

namespace {

constexpr std::size_t kArGarchMinWindow = 100;
constexpr std::size_t kMaxRestarts = 5;

double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Sample variance, denominator n - 1 (n when n == 1).
double variance_of(std::span<const double> x) {
    const double m = mean_of(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    const auto n = x.size();
    return ss / static_cast<double>(n > 1 ? n - 1 : 1);
}

double lag1_autocorrelation(std::span<const double> x) {
    const double m = mean_of(x);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        den += (x[t] - m) * (x[t] - m);
        if (t > 0) num += (x[t] - m) * (x[t - 1] - m);
    }
    return den > 0.0 ? num / den : 0.0;
}

bool is_constant(std::span<const double> x) {
    const double v = variance_of(x);
    const double m = mean_of(x);
    return !(v > 1e-24 * std::max(1.0, m * m));
}

// Negative Gaussian log-likelihood without constants; the variance recursion
// starts at `var0`, the mean recursion at the unconditional mean.
double argarch_nll(std::span<const double> x, const ArGarchParams& p, double var0) {
    const std::size_t n = x.size();
    double a = x[0] - p.c / (1.0 - p.phi);
    double s2 = var0;
    double sum = std::log(s2) + a * a / s2;
    for (std::size_t t = 1; t < n; ++t) {
        s2 = p.omega + p.alpha * a * a + p.beta * s2;
        a = x[t] - (p.c + p.phi * x[t - 1]);
        sum += std::log(s2) + a * a / s2;
    }
    return 0.5 * sum;
}

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// theta = (c, atanh phi, log omega, logit(alpha + beta), logit(alpha / (alpha + beta)))
ArGarchParams from_unconstrained(const std::vector<double>& theta) {
    ArGarchParams p;
    p.c = theta[0];
    p.phi = std::tanh(theta[1]);
    p.omega = std::exp(theta[2]);
    const double persistence = logistic(theta[3]);
    const double share = logistic(theta[4]);
    p.alpha = persistence * share;
    p.beta = persistence * (1.0 - share);
    return p;
}

}  // namespace

std::string to_string(FilterKind kind) {
    switch (kind) {
        case FilterKind::Raw: return "raw";
        case FilterKind::ArGarch: return "ar_garch";
        case FilterKind::Sarima: return "sarima";
    }
    return "unknown";
}

FilterKind parse_filter_kind(const std::string& text) {
    if (text == "raw") return FilterKind::Raw;
    if (text == "ar_garch" || text == "argarch" || text == "ar-garch") return FilterKind::ArGarch;
    if (text == "sarima") return FilterKind::Sarima;
    throw std::invalid_argument("unknown filter kind '" + text + "'");
}

void FilterSpec::validate() const {
    if (kind == FilterKind::Sarima && seasonal_period < 2) {
        throw std::invalid_argument("seasonal period must be at least 2");
    }
}

std::size_t FilterSpec::min_window() const noexcept {
    switch (kind) {
        case FilterKind::Raw: return 1;
        case FilterKind::ArGarch: return kArGarchMinWindow;
        case FilterKind::Sarima: return 3 * seasonal_period;
    }
    return 1;
}

bool ArGarchParams::valid() const noexcept {
    return std::isfinite(c) && std::abs(phi) < 1.0 && omega > 0.0 && alpha >= 0.0 && beta >= 0.0 &&
           alpha + beta < 1.0;
}

bool SarimaParams::valid() const noexcept {
    return std::isfinite(c) && std::abs(phi) < 1.0 && std::abs(seasonal_phi) < 1.0 && sigma > 0.0 &&
           period >= 2;
}

double standardize_next(double eps, const OneStep& one_step) {
    if (!(one_step.sigma > 0.0)) throw std::invalid_argument("standardize_next: sigma must be positive");
    return (eps - one_step.mu) / one_step.sigma;
}

double destandardize(double z, const OneStep& one_step) {
    if (!(one_step.sigma > 0.0)) throw std::invalid_argument("destandardize: sigma must be positive");
    return one_step.mu + z * one_step.sigma;
}

double argarch_log_likelihood(const ArGarchParams& params, std::span<const double> errors) {
    if (errors.empty()) throw std::invalid_argument("argarch_log_likelihood: empty series");
    return -argarch_nll(errors, params, variance_of(errors));
}

ArGarchParams estimate_argarch(std::span<const double> errors, std::uint64_t seed, FitDiagnostics* diagnostics) {
    if (errors.size() < kArGarchMinWindow) {
        throw std::invalid_argument("AR-GARCH needs at least " + std::to_string(kArGarchMinWindow) +
                                    " observations, got " + std::to_string(errors.size()));
    }
    if (is_constant(errors)) throw NumericalError("AR-GARCH: constant error series");

    // Fit on unit-variance data so starting values and tolerances are scale free.
    const double scale = std::sqrt(variance_of(errors));
    std::vector<double> x(errors.begin(), errors.end());
    for (auto& v : x) v /= scale;
    const double var0 = variance_of(x);

    const double phi0 = std::clamp(lag1_autocorrelation(x), -0.9, 0.9);
    const double c0 = mean_of(x) * (1.0 - phi0);
    const double omega0 = 0.1 * var0;
    const double alpha0 = 0.05;
    const double beta0 = 0.9;
    std::vector<double> theta0{c0, std::atanh(phi0), std::log(omega0), logit(alpha0 + beta0),
                               logit(alpha0 / (alpha0 + beta0))};

    const auto objective = [&](const std::vector<double>& theta) {
        const ArGarchParams p = from_unconstrained(theta);
        if (!(std::abs(p.phi) < 1.0 - 1e-12) || !(p.alpha + p.beta < 1.0 - 1e-12) || !(p.omega > 0.0)) {
            return std::numeric_limits<double>::infinity();
        }
        return argarch_nll(x, p, var0);
    };

    NelderMeadOptions options;
    options.rel_tolerance = 1e-8;
    options.max_iterations = 500;
    options.initial_step = 0.5;

    SplitMix64 rng(mix64(seed ^ 0x6a09e667f3bcc909ULL));
    NelderMeadResult best = nelder_mead(objective, theta0, options);
    std::size_t iterations = best.iterations;
    std::size_t restarts = 0;
    while (!best.converged && restarts < kMaxRestarts) {
        ++restarts;
        std::vector<double> start = best.x;
        for (auto& v : start) v += 0.05 * rng.normal();
        options.initial_step = 0.1;
        NelderMeadResult next = nelder_mead(objective, start, options);
        iterations += next.iterations;
        const bool improved = next.value <= best.value;
        if (improved || next.converged) {
            const bool settled = next.converged &&
                                 std::abs(next.value - best.value) <= 1e-6 * std::max(1.0, std::abs(best.value));
            best = improved ? std::move(next) : best;
            // A converged restart that lands on the same optimum confirms it.
            if (settled) best.converged = true;
        }
    }
    if (!best.converged || !std::isfinite(best.value)) {
        throw NumericalError("AR-GARCH QMLE did not converge after " + std::to_string(kMaxRestarts) + " restarts");
    }

    ArGarchParams p = from_unconstrained(best.x);
    p.c *= scale;
    p.omega *= scale * scale;
    if (!p.valid()) throw NumericalError("AR-GARCH estimate violates parameter constraints");
    if (diagnostics) {
        diagnostics->iterations = iterations;
        diagnostics->restarts = restarts;
        diagnostics->log_likelihood = argarch_log_likelihood(p, errors);
    }
    return p;
}

namespace {

struct Ols2 {
    double intercept = 0.0;
    double slope = 0.0;
};

// Least squares of y on [1, x].
Ols2 ols2(const std::vector<double>& y, const std::vector<double>& x) {
    const auto n = static_cast<double>(y.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    Ols2 r;
    r.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    r.intercept = my - r.slope * mx;
    return r;
}

double sarima_mean(const SarimaParams& p, std::span<const double> x, std::size_t t, double uncond) {
    const std::size_t s = p.period;
    auto lag = [&](std::size_t k) { return t >= k ? x[t - k] : uncond; };
    return p.c + p.phi * lag(1) + p.seasonal_phi * lag(s) - p.phi * p.seasonal_phi * lag(s + 1);
}

double sarima_unconditional_mean(const SarimaParams& p) {
    return p.c / ((1.0 - p.phi) * (1.0 - p.seasonal_phi));
}

}  // namespace

SarimaParams estimate_sarima(std::span<const double> errors, std::size_t period, FitDiagnostics* diagnostics) {
    FilterSpec spec{FilterKind::Sarima, period};
    spec.validate();
    if (errors.size() < spec.min_window()) {
        throw std::invalid_argument("SARIMA needs at least " + std::to_string(spec.min_window()) +
                                    " observations, got " + std::to_string(errors.size()));
    }
    if (is_constant(errors)) throw NumericalError("SARIMA: constant error series");

    const std::size_t s = period;
    const std::size_t n = errors.size();
    const std::size_t first = s + 1;

    // Conditional least squares on x_t = c + phi x_{t-1} + Phi x_{t-s} - phi Phi x_{t-s-1} + a_t,
    // by alternating two-parameter regressions (each exact given the other factor).
    double phi = std::clamp(lag1_autocorrelation(errors), -0.95, 0.95);
    double sphi = 0.0;
    double c = 0.0;
    std::vector<double> y;
    std::vector<double> xr;
    y.reserve(n);
    xr.reserve(n);
    std::size_t iter = 0;
    constexpr std::size_t kMaxIter = 1000;
    for (; iter < kMaxIter; ++iter) {
        // Given Phi: (x_t - Phi x_{t-s}) = c + phi (x_{t-1} - Phi x_{t-1-s})
        y.clear();
        xr.clear();
        for (std::size_t t = first; t < n; ++t) {
            y.push_back(errors[t] - sphi * errors[t - s]);
            xr.push_back(errors[t - 1] - sphi * errors[t - 1 - s]);
        }
        const Ols2 a = ols2(y, xr);
        // Given phi: (x_t - phi x_{t-1}) = c + Phi (x_{t-s} - phi x_{t-s-1})
        y.clear();
        xr.clear();
        for (std::size_t t = first; t < n; ++t) {
            y.push_back(errors[t] - a.slope * errors[t - 1]);
            xr.push_back(errors[t - s] - a.slope * errors[t - s - 1]);
        }
        const Ols2 b = ols2(y, xr);
        const double change = std::abs(a.slope - phi) + std::abs(b.slope - sphi);
        phi = a.slope;
        sphi = b.slope;
        c = b.intercept;
        if (change < 1e-12) break;
    }
    if (iter == kMaxIter) throw NumericalError("SARIMA conditional least squares did not converge");

    SarimaParams p;
    p.c = c;
    p.phi = phi;
    p.seasonal_phi = sphi;
    p.period = s;
    if (!(std::abs(phi) < 1.0) || !(std::abs(sphi) < 1.0)) {
        throw NumericalError("SARIMA estimate is non-stationary");
    }

    double ss = 0.0;
    for (std::size_t t = first; t < n; ++t) {
        const double a = errors[t] - sarima_mean(p, errors, t, 0.0);
        ss += a * a;
    }
    p.sigma = std::sqrt(ss / static_cast<double>(n - first));
    if (!(p.sigma > 0.0)) throw NumericalError("SARIMA residual variance is zero");
    if (diagnostics) {
        diagnostics->iterations = iter + 1;
        diagnostics->restarts = 0;
        const double m = static_cast<double>(n - first);
        diagnostics->log_likelihood = -0.5 * (m * std::log(p.sigma * p.sigma) + m);
    }
    return p;
}

FilterOutput apply_filter(const FilterParams& params, std::span<const double> errors) {
    if (errors.empty()) throw std::invalid_argument("apply_filter: empty series");
    const std::size_t n = errors.size();
    FilterOutput out;
    out.mu_hat.resize(n);
    out.sigma_hat.resize(n);
    out.z.resize(n);

    if (std::holds_alternative<std::monostate>(params)) {
        std::fill(out.mu_hat.begin(), out.mu_hat.end(), 0.0);
        std::fill(out.sigma_hat.begin(), out.sigma_hat.end(), 1.0);
        std::copy(errors.begin(), errors.end(), out.z.begin());
        out.one_step = OneStep{0.0, 1.0};
        return out;
    }

    if (const auto* p = std::get_if<ArGarchParams>(&params)) {
        if (!p->valid()) throw std::invalid_argument("apply_filter: invalid AR-GARCH parameters");
        double mu = p->c / (1.0 - p->phi);
        double s2 = variance_of(errors);
        if (!(s2 > 0.0)) throw NumericalError("AR-GARCH filter: constant error series");
        double a = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            if (t > 0) {
                s2 = p->omega + p->alpha * a * a + p->beta * s2;
                mu = p->c + p->phi * errors[t - 1];
            }
            a = errors[t] - mu;
            out.mu_hat[t] = mu;
            out.sigma_hat[t] = std::sqrt(s2);
            out.z[t] = a / out.sigma_hat[t];
        }
        const double s2_next = p->omega + p->alpha * a * a + p->beta * s2;
        out.one_step = OneStep{p->c + p->phi * errors[n - 1], std::sqrt(s2_next)};
        return out;
    }

    const auto& p = std::get<SarimaParams>(params);
    if (!p.valid()) throw std::invalid_argument("apply_filter: invalid SARIMA parameters");
    const double uncond = sarima_unconditional_mean(p);
    for (std::size_t t = 0; t < n; ++t) {
        out.mu_hat[t] = sarima_mean(p, errors, t, uncond);
        out.sigma_hat[t] = p.sigma;
        out.z[t] = (errors[t] - out.mu_hat[t]) / p.sigma;
    }
    std::vector<double> extended(errors.begin(), errors.end());
    extended.push_back(0.0);
    out.one_step = OneStep{sarima_mean(p, extended, n, uncond), p.sigma};
    return out;
}

FilterFit fit_filter(std::span<const double> errors, const FilterSpec& spec, std::uint64_t seed) {
    spec.validate();
    if (errors.size() < spec.min_window()) {
        throw std::invalid_argument("filter window too short: need " + std::to_string(spec.min_window()) +
                                    ", got " + std::to_string(errors.size()));
    }
    for (double v : errors) {
        if (!std::isfinite(v)) throw std::invalid_argument("fit_filter: non-finite error");
    }

    FilterFit fit;
    fit.spec = spec;
    switch (spec.kind) {
        case FilterKind::Raw: fit.params = std::monostate{}; break;
        case FilterKind::ArGarch: fit.params = estimate_argarch(errors, seed, &fit.diagnostics); break;
        case FilterKind::Sarima:
            fit.params = estimate_sarima(errors, spec.seasonal_period, &fit.diagnostics);
            break;
    }
    fit.output = apply_filter(fit.params, errors);
    return fit;
}

nlohmann::json to_json(const FilterParams& params) {
    if (const auto* p = std::get_if<ArGarchParams>(&params)) {
        return {{"kind", "ar_garch"}, {"c", p->c},         {"phi", p->phi},
                {"omega", p->omega},  {"alpha", p->alpha}, {"beta", p->beta}};
    }
    if (const auto* p = std::get_if<SarimaParams>(&params)) {
        return {{"kind", "sarima"}, {"c", p->c}, {"phi", p->phi}, {"seasonal_phi", p->seasonal_phi},
                {"sigma", p->sigma}, {"period", p->period}};
    }
    return {{"kind", "raw"}};
}

}  // namespace schaake
