#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace schaake::kernels {

/// Inner loops of the scoring code. `rows` are m x d, row-major.
struct KernelTable {
    const char* name;
    /// sum_i |x_i - y|
    double (*sum_abs_dev)(const double* x, std::size_t n, double y);
    /// sum_l sum_k |x_l - x_k| over all ordered pairs
    double (*sum_pairwise_abs_diff)(const double* x, std::size_t n);
    /// sum_k ||row_k - y||_2
    double (*sum_distance_to)(const double* rows, std::size_t m, std::size_t d, const double* y);
    /// sum_l sum_k ||row_l - row_k||_2 over all ordered pairs
    double (*sum_pairwise_distance)(const double* rows, std::size_t m, std::size_t d);
    /// out_k = sum_h rows(k, h) * w_h
    void (*weighted_row_sums)(const double* rows, std::size_t m, std::size_t d, const double* w,
                              double* out);
};

/// Portable reference implementation.
const KernelTable& scalar_kernels() noexcept;

/// AVX2/FMA variants, or nullptr when not compiled in or unsupported by the CPU.
const KernelTable* avx2_kernels() noexcept;

/**
 * Table used by the library. Picks AVX2 when the CPU supports it; setting
 * the environment variable SCHAAKE_SIMD=scalar forces the reference path.
 * Fixed for the lifetime of the process.
 */
const KernelTable& active() noexcept;

}  // namespace schaake::kernels
