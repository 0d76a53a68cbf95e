#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"
#include "schaake/kernels.hpp"

namespace schaake::kernels {

const KernelTable& scalar_kernels() noexcept {
    static const KernelTable table{"scalar",
                                   &scalar::sum_abs_dev,
                                   &scalar::sum_pairwise_abs_diff,
                                   &scalar::sum_distance_to,
                                   &scalar::sum_pairwise_distance,
                                   &scalar::weighted_row_sums};
    return table;
}

const KernelTable* avx2_kernels() noexcept {
#if defined(SCHAAKE_HAS_AVX2_KERNELS)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    static const KernelTable table{"avx2",
                                   &avx2::sum_abs_dev,
                                   &avx2::sum_pairwise_abs_diff,
                                   &avx2::sum_distance_to,
                                   &avx2::sum_pairwise_distance,
                                   &avx2::weighted_row_sums};
    return supported ? &table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept {
    static const KernelTable& chosen = [] () -> const KernelTable& {
        const char* env = std::getenv("SCHAAKE_SIMD");
        if (env != nullptr && std::strcmp(env, "scalar") == 0) return scalar_kernels();
        if (const auto* t = avx2_kernels()) return *t;
        return scalar_kernels();
    }();
    return chosen;
}

}  // namespace schaake::kernels
