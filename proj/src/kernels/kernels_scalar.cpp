#include <cmath>

#include "kernels_impl.hpp"

namespace schaake::kernels::scalar {

double sum_abs_dev(const double* x, std::size_t n, double y) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(x[i] - y);
    return s;
}

double sum_pairwise_abs_diff(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t k = l + 1; k < n; ++k) s += std::abs(x[k] - x[l]);
    }
    return 2.0 * s;
}

double sum_distance_to(const double* rows, std::size_t m, std::size_t d, const double* y) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double* r = rows + k * d;
        double sq = 0.0;
        for (std::size_t h = 0; h < d; ++h) {
            const double diff = r[h] - y[h];
            sq += diff * diff;
        }
        s += std::sqrt(sq);
    }
    return s;
}

double sum_pairwise_distance(const double* rows, std::size_t m, std::size_t d) {
    double s = 0.0;
    for (std::size_t l = 0; l < m; ++l) {
        const double* a = rows + l * d;
        for (std::size_t k = l + 1; k < m; ++k) {
            const double* b = rows + k * d;
            double sq = 0.0;
            for (std::size_t h = 0; h < d; ++h) {
                const double diff = a[h] - b[h];
                sq += diff * diff;
            }
            s += std::sqrt(sq);
        }
    }
    return 2.0 * s;
}

void weighted_row_sums(const double* rows, std::size_t m, std::size_t d, const double* w, double* out) {
    for (std::size_t k = 0; k < m; ++k) {
        const double* r = rows + k * d;
        double s = 0.0;
        for (std::size_t h = 0; h < d; ++h) s += r[h] * w[h];
        out[k] = s;
    }
}

}  // namespace schaake::kernels::scalar
