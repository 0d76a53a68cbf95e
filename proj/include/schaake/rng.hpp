#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace schaake {

/**
 * SplitMix64 generator.
 *
 * Every draw is a pure function of (seed, counter), so streams can be split
 * by deriving new seeds with derive_seed(). Normal variates go through the
 * inverse normal CDF rather than a platform-specific distribution object,
 * which keeps sequences identical across standard libraries.
 */
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept;

    /// Uniform on the open interval (0, 1), 53 bits of resolution.
    double uniform() noexcept;

    /// Standard normal via inverse CDF.
    double normal() noexcept;

    /// Unbiased integer in [0, bound). bound must be positive.
    std::uint64_t bounded(std::uint64_t bound) noexcept;

    template <typename T>
    void shuffle(std::span<T> values) noexcept {
        for (std::size_t i = values.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(bounded(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::uint64_t state_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// FNV-1a over the bytes of a string.
std::uint64_t stable_hash(std::string_view text) noexcept;

/// Combine a master seed with labels into an independent substream seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view date,
                          std::string_view setting, std::string_view purpose) noexcept;

}  // namespace schaake
