#pragma once

#include <cstdint>
#include <random>

namespace softglcm {

/// MT19937-64 is fully specified by the C++ standard, so raw outputs are
/// identical on every conforming platform. Library distributions are not, so
/// the mappings below are defined here explicitly.
using Rng = std::mt19937_64;

/// Uniform integer in [0, n) by rejection of the biased low range.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t x = rng();
        if (x >= threshold) return x % n;
    }
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform intensity in [-1, 1).
inline double uniform_intensity(Rng& rng) { return 2.0 * uniform_unit(rng) - 1.0; }

}  // namespace softglcm
