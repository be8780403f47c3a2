#include "softglcm/textures.hpp"

#include "softglcm/error.hpp"
#include "softglcm/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace softglcm {



TextureKind parse_texture_kind(std::string_view name) {
    if (name == "stripes") return TextureKind::Stripes;
    if (name == "checkerboard") return TextureKind::Checkerboard;
    if (name == "filtered-noise") return TextureKind::FilteredNoise;
    if (name == "noise") return TextureKind::Noise;
    if (name == "gradient") return TextureKind::Gradient;
    throw InputDomainError("unknown texture kind '" + std::string(name) + "'");
}

std::string_view to_string(TextureKind kind) {
    switch (kind) {
        case TextureKind::Stripes: return "stripes";
        case TextureKind::Checkerboard: return "checkerboard";
        case TextureKind::FilteredNoise: return "filtered-noise";
        case TextureKind::Noise: return "noise";
        case TextureKind::Gradient: return "gradient";
    }
    return "unknown";
}

GrayImage synth_texture(TextureKind kind, int height, int width, std::uint64_t seed, int period,
                        int jitter) {
    if (height < 1 || width < 1) throw GeometryError("synth_texture: empty size");
    if (period < 1) throw ContractError("synth_texture: period must be >= 1");
    if (jitter < 0 || jitter > 40) throw ContractError("synth_texture: jitter must be in 0..40");
    const IntensityConvention conv(256);
    Rng rng(seed);
    const auto lo = static_cast<int>(40 + uniform_below(rng, 60));
    const auto hi = static_cast<int>(150 + uniform_below(rng, 70));
    const auto phase = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(period)));

    std::vector<int> raw(static_cast<std::size_t>(height) * width);
    switch (kind) {
        case TextureKind::Stripes:
        case TextureKind::Checkerboard:
            for (int r = 0; r < height; ++r) {
                for (int c = 0; c < width; ++c) {
                    int band = (c + phase) / period;
                    if (kind == TextureKind::Checkerboard) band += (r + phase) / period;
                    const int noise = static_cast<int>(uniform_below(rng, 2 * jitter + 1)) - jitter;
                    raw[static_cast<std::size_t>(r) * width + c] = (band % 2 ? hi : lo) + noise;
                }
            }
            break;
        case TextureKind::Noise:
            for (auto& v : raw) v = static_cast<int>(uniform_below(rng, 256));
            break;
        case TextureKind::FilteredNoise: {
            std::vector<double> noise(raw.size());
            for (auto& v : noise) v = uniform_unit(rng);
            // Box filter of side `period`, then stretch to the full range.
            std::vector<double> smooth(raw.size());
            const int rad = std::max(1, period / 2);
            for (int r = 0; r < height; ++r) {
                for (int c = 0; c < width; ++c) {
                    double s = 0.0;
                    int n = 0;
                    for (int dr = -rad; dr <= rad; ++dr) {
                        for (int dc = -rad; dc <= rad; ++dc) {
                            const int rr = (r + dr + height) % height;
                            const int cc = (c + dc + width) % width;
                            s += noise[static_cast<std::size_t>(rr) * width + cc];
                            ++n;
                        }
                    }
                    smooth[static_cast<std::size_t>(r) * width + c] = s / n;
                }
            }
            const auto [mn, mx] = std::minmax_element(smooth.begin(), smooth.end());
            const double span = std::max(*mx - *mn, 1e-12);
            for (std::size_t i = 0; i < raw.size(); ++i) {
                raw[i] = static_cast<int>(std::lround(20.0 + 215.0 * (smooth[i] - *mn) / span));
            }
            break;
        }
        case TextureKind::Gradient:
            for (int r = 0; r < height; ++r) {
                for (int c = 0; c < width; ++c) {
                    raw[static_cast<std::size_t>(r) * width + c] =
                        width > 1 ? (c * 255) / (width - 1) : lo;
                }
            }
            break;
    }
    std::vector<double> pixels(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        pixels[i] = conv.to_normalized(static_cast<std::uint32_t>(std::clamp(raw[i], 0, 255)));
    }
    return GrayImage(height, width, std::move(pixels));
}

}  // namespace softglcm
