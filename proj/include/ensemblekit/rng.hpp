#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace ensemblekit {

/// SplitMix64 (Steele, Lea & Flood 2014).
///
/// State transition: state += 0x9E3779B97F4A7C15.
/// Output: z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
///         z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31).
///
/// Every seeded operation in the library draws from this generator, so a
/// given seed reproduces the same stream in any language.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n) by rejection: draws below (2^64 - n) mod n are discarded.
    std::uint64_t uniform_index(std::uint64_t n);

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; one variate per call (the sine branch is discarded).
    double normal();

    std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

/// Seed for the i-th independent stream: the (i+1)-th output of SplitMix64(seed).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i) noexcept;

/// In-place Fisher-Yates shuffle, swapping position i with uniform_index(i+1) for i = n-1 .. 1.
template <typename T>
void shuffle(std::span<T> items, SplitMix64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_index(i));
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

}  // namespace ensemblekit
