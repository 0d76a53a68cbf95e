#pragma once

// Internal: per-ISA kernel entry points behind schaake::kernels::KernelTable.

#include <cstddef>

namespace schaake::kernels {

namespace scalar {
double sum_abs_dev(const double* x, std::size_t n, double y);
double sum_pairwise_abs_diff(const double* x, std::size_t n);
double sum_distance_to(const double* rows, std::size_t m, std::size_t d, const double* y);
double sum_pairwise_distance(const double* rows, std::size_t m, std::size_t d);
void weighted_row_sums(const double* rows, std::size_t m, std::size_t d, const double* w, double* out);
}  // namespace scalar

#if defined(SCHAAKE_HAS_AVX2_KERNELS)
namespace avx2 {
double sum_abs_dev(const double* x, std::size_t n, double y);
double sum_pairwise_abs_diff(const double* x, std::size_t n);
double sum_distance_to(const double* rows, std::size_t m, std::size_t d, const double* y);
double sum_pairwise_distance(const double* rows, std::size_t m, std::size_t d);
void weighted_row_sums(const double* rows, std::size_t m, std::size_t d, const double* w, double* out);
}  // namespace avx2
#endif

}  // namespace schaake::kernels
