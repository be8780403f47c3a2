#pragma once

#include "softglcm/core.hpp"

#include <cstdint>
#include <string_view>

namespace softglcm {

/// Seeded synthetic test textures, quantized to 8-bit levels.
enum class TextureKind { Stripes, Checkerboard, FilteredNoise, Noise, Gradient };

TextureKind parse_texture_kind(std::string_view name);
std::string_view to_string(TextureKind kind);

/// Levels and phase are drawn from `seed`; `period` sets the stripe and check
/// widths and the smoothing scale of filtered noise. Stripes and checkerboards
/// get uniform per-pixel noise of +-`jitter` raw levels around their two levels.
GrayImage synth_texture(TextureKind kind, int height, int width, std::uint64_t seed,
                        int period = 2, int jitter = 12);

}  // namespace softglcm
