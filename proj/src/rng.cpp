#include "schaake/rng.hpp"

#include "schaake/normal.hpp"

namespace schaake {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t SplitMix64::next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
}

double SplitMix64::uniform() noexcept {
    // (k + 0.5) / 2^53 never hits 0 or 1.
    const auto k = next_u64() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double SplitMix64::normal() noexcept { return normal_quantile(uniform()); }

std::uint64_t SplitMix64::bounded(std::uint64_t bound) noexcept {
    // Lemire's multiply-shift with rejection.
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            x = next_u64();
            m = static_cast<__uint128_t>(x) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t stable_hash(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view date, std::string_view setting,
                          std::string_view purpose) noexcept {
    std::uint64_t h = mix64(master ^ 0x5ca1ab1e0ddba11ULL);
    h = mix64(h ^ stable_hash(date));
    h = mix64(h ^ stable_hash(setting));
    h = mix64(h ^ stable_hash(purpose));
    return h;
}

}  // namespace schaake
