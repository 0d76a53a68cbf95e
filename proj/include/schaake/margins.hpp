#pragma once

#include <span>
#include <vector>

namespace schaake {

enum class MarginKind { Empirical, Gaussian };

/**
 * Distribution of standardized residuals for one hour.
 *
 * Empirical margins keep the sorted sample of the last n residuals. PIT
 * values are rank / (n + 1), where the rank is one plus the number of sample
 * points strictly below z, so tied values share the lower rank and PITs never
 * reach 0 or 1. The quantile function is the generalized inverse of the
 * empirical CDF; at p = i / (n + 1) it returns the i-th order statistic.
 */
class MarginModel {
public:
    static MarginModel gaussian() noexcept { return MarginModel{}; }
    /// Throws std::invalid_argument on an empty or non-finite sample.
    static MarginModel empirical(std::span<const double> sample);

    MarginKind kind() const noexcept { return kind_; }
    const std::vector<double>& sample() const noexcept { return sample_; }

    double pit(double z) const;
    double quantile(double p) const;

private:
    MarginModel() = default;

    MarginKind kind_ = MarginKind::Gaussian;
    std::vector<double> sample_;
};

}  // namespace schaake
