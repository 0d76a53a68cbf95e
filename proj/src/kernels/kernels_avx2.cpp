// Compiled with -mavx2 -mfma; only called after a runtime CPU check.
#include <immintrin.h>

#include <cmath>
#include <vector>

#include "kernels_impl.hpp"

namespace schaake::kernels::avx2 {

namespace {

inline __m256d abs_pd(__m256d v) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    return _mm256_andnot_pd(sign, v);
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Column-major copy so four rows can be processed per vector.
std::vector<double> transpose(const double* rows, std::size_t m, std::size_t d) {
    std::vector<double> cols(m * d);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t h = 0; h < d; ++h) cols[h * m + k] = rows[k * d + h];
    }
    return cols;
}

}  // namespace

double sum_abs_dev(const double* x, std::size_t n, double y) {
    const __m256d vy = _mm256_set1_pd(y);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vy)));
        acc1 = _mm256_add_pd(acc1, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i + 4), vy)));
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_add_pd(acc0, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vy)));
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += std::abs(x[i] - y);
    return s;
}

double sum_pairwise_abs_diff(const double* x, std::size_t n) {
    double total = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        const __m256d vl = _mm256_set1_pd(x[l]);
        __m256d acc = _mm256_setzero_pd();
        std::size_t k = l + 1;
        for (; k + 4 <= n; k += 4) acc = _mm256_add_pd(acc, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + k), vl)));
        double s = hsum(acc);
        for (; k < n; ++k) s += std::abs(x[k] - x[l]);
        total += s;
    }
    return 2.0 * total;
}

double sum_distance_to(const double* rows, std::size_t m, std::size_t d, const double* y) {
    const auto cols = transpose(rows, m, d);
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= m; k += 4) {
        __m256d sq = _mm256_setzero_pd();
        for (std::size_t h = 0; h < d; ++h) {
            const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(cols.data() + h * m + k), _mm256_set1_pd(y[h]));
            sq = _mm256_fmadd_pd(diff, diff, sq);
        }
        acc = _mm256_add_pd(acc, _mm256_sqrt_pd(sq));
    }
    double s = hsum(acc);
    for (; k < m; ++k) {
        double sq = 0.0;
        for (std::size_t h = 0; h < d; ++h) {
            const double diff = rows[k * d + h] - y[h];
            sq += diff * diff;
        }
        s += std::sqrt(sq);
    }
    return s;
}

double sum_pairwise_distance(const double* rows, std::size_t m, std::size_t d) {
    const auto cols = transpose(rows, m, d);
    double total = 0.0;
    for (std::size_t l = 0; l < m; ++l) {
        __m256d acc = _mm256_setzero_pd();
        std::size_t k = l + 1;
        for (; k + 4 <= m; k += 4) {
            __m256d sq = _mm256_setzero_pd();
            for (std::size_t h = 0; h < d; ++h) {
                const double* col = cols.data() + h * m;
                const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(col + k), _mm256_set1_pd(col[l]));
                sq = _mm256_fmadd_pd(diff, diff, sq);
            }
            acc = _mm256_add_pd(acc, _mm256_sqrt_pd(sq));
        }
        double s = hsum(acc);
        for (; k < m; ++k) {
            double sq = 0.0;
            for (std::size_t h = 0; h < d; ++h) {
                const double diff = rows[l * d + h] - rows[k * d + h];
                sq += diff * diff;
            }
            s += std::sqrt(sq);
        }
        total += s;
    }
    return 2.0 * total;
}

void weighted_row_sums(const double* rows, std::size_t m, std::size_t d, const double* w, double* out) {
    for (std::size_t k = 0; k < m; ++k) {
        const double* r = rows + k * d;
        __m256d acc = _mm256_setzero_pd();
        std::size_t h = 0;
        for (; h + 4 <= d; h += 4) acc = _mm256_fmadd_pd(_mm256_loadu_pd(r + h), _mm256_loadu_pd(w + h), acc);
        double s = hsum(acc);
        for (; h < d; ++h) s += r[h] * w[h];
        out[k] = s;
    }
}

}  // namespace schaake::kernels::avx2
