#pragma once

#include <cstdint>

namespace treecut {

/// SplitMix64 (Steele, Lea, Flood; constants from Vigna's reference code).
///
/// All random tree generators draw exclusively from this stream so that a
/// (parameters, seed) pair reproduces the same tree in any implementation.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    constexpr double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Integer in [0, bound) by plain modulo reduction (bound > 0).
    constexpr std::uint64_t below(std::uint64_t bound) noexcept { return next() % bound; }

    /// Independent child stream seeded from this stream's next output.
    constexpr SplitMix64 split() noexcept { return SplitMix64(next()); }

    constexpr std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

}  // namespace treecut
