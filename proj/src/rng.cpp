#include "ensemblekit/rng.hpp"

#include <cmath>
#include <numbers>

#include "ensemblekit/errors.hpp"

namespace ensemblekit {

std::uint64_t SplitMix64::uniform_index(std::uint64_t n) {
    if (n == 0) throw InvariantError("uniform_index: empty range");
    // (2^64 - n) mod n, computed without 128-bit arithmetic.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t x = next();
        if (x >= threshold) return x % n;
    }
}

double SplitMix64::normal() {
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i) noexcept {
    // Equivalent to calling next() i+1 times: the state after k steps is seed + k * gamma.
    SplitMix64 rng(seed + i * 0x9E3779B97F4A7C15ULL);
    return rng.next();
}

}  // namespace ensemblekit
