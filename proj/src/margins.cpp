#include "schaake/margins.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "schaake/normal.hpp"

namespace schaake {

MarginModel MarginModel::empirical(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("empirical margin needs at least one residual");
    MarginModel m;
    m.kind_ = MarginKind::Empirical;
    m.sample_.assign(sample.begin(), sample.end());
    for (double v : m.sample_) {
        if (!std::isfinite(v)) throw std::invalid_argument("empirical margin sample must be finite");
    }
    std::sort(m.sample_.begin(), m.sample_.end());
    return m;
}

double MarginModel::pit(double z) const {
    if (!std::isfinite(z)) throw std::invalid_argument("pit: non-finite argument");
    if (kind_ == MarginKind::Gaussian) {
        // Far tails round to 0 or 1 in double; keep levels strictly inside (0, 1).
        return std::clamp(normal_cdf(z), std::numeric_limits<double>::denorm_min(), std::nextafter(1.0, 0.0));
    }
    const auto n = sample_.size();
    // A value above the whole sample shares the top rank n.
    const auto below = std::min<std::size_t>(
        static_cast<std::size_t>(std::lower_bound(sample_.begin(), sample_.end(), z) - sample_.begin()), n - 1);
    return (static_cast<double>(below) + 1.0) / (static_cast<double>(n) + 1.0);
}

double MarginModel::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: level outside (0, 1)");
    if (kind_ == MarginKind::Gaussian) return normal_quantile(p);

    // Smallest j with j / n >= p, evaluated the same way the CDF would be.
    const std::size_t n = sample_.size();
    const double dn = static_cast<double>(n);
    auto j = static_cast<std::size_t>(std::ceil(p * dn));
    j = std::clamp<std::size_t>(j, 1, n);
    while (j > 1 && static_cast<double>(j - 1) / dn >= p) --j;
    while (j < n && static_cast<double>(j) / dn < p) ++j;
    return sample_[j - 1];
}

}  // namespace schaake
