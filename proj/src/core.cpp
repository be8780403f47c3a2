#include "softglcm/core.hpp"

#include "softglcm/error.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace softglcm {

GrayImage::GrayImage(int height, int width, std::vector<double> pixels)
    : height_(height), width_(width), pixels_(std::move(pixels)) {
    if (height < 1 || width < 1) {
        throw GeometryError("GrayImage: dimensions must be positive, got " +
                            std::to_string(height) + "x" + std::to_string(width));
    }
    if (pixels_.size() != static_cast<std::size_t>(height) * width) {
        throw ContractError("GrayImage: pixel count " + std::to_string(pixels_.size()) +
                            " does not match " + std::to_string(height) + "x" +
                            std::to_string(width));
    }
    for (std::size_t i = 0; i < pixels_.size(); ++i) {
        const double t = pixels_[i];
        if (!(t >= -1.0 && t <= 1.0)) {
            throw InputDomainError("GrayImage: intensity " + std::to_string(t) + " at (" +
                                   std::to_string(i / width) + ", " +
                                   std::to_string(i % width) + ") outside [-1, 1]");
        }
    }
}

GrayImage GrayImage::filled(int height, int width, double value) {
    return GrayImage(height, width,
                     std::vector<double>(static_cast<std::size_t>(std::max(height, 0)) *
                                             std::max(width, 0),
                                         value));
}

IntensityConvention::IntensityConvention(std::uint32_t depth) : depth_(depth) {
    if (depth < 2) {
        throw InputDomainError("IntensityConvention: depth must be >= 2, got " +
                               std::to_string(depth));
    }
}

double IntensityConvention::to_normalized(std::uint32_t raw) const {
    return 2.0 * static_cast<double>(raw) / static_cast<double>(depth_ - 1) - 1.0;
}

std::uint32_t IntensityConvention::to_raw(double normalized) const {
    const double top = static_cast<double>(depth_ - 1);
    // nearbyint honours the default round-half-to-even mode.
    const double raw = std::nearbyint((normalized + 1.0) * 0.5 * top);
    if (!(raw > 0.0)) return 0;
    if (raw >= top) return depth_ - 1;
    return static_cast<std::uint32_t>(raw);
}

GrayImage normalize_image(const RawGrid& raw, std::uint32_t depth) {
    const IntensityConvention conv(depth);
    if (raw.values.size() != static_cast<std::size_t>(raw.height) * raw.width) {
        throw ContractError("normalize_image: value count does not match grid shape");
    }
    std::vector<double> pixels(raw.values.size());
    for (std::size_t i = 0; i < raw.values.size(); ++i) {
        if (raw.values[i] >= depth) {
            throw InputDomainError("normalize_image: raw value " +
                                   std::to_string(raw.values[i]) + " at (" +
                                   std::to_string(i / raw.width) + ", " +
                                   std::to_string(i % raw.width) + ") exceeds depth " +
                                   std::to_string(depth));
        }
        pixels[i] = conv.to_normalized(raw.values[i]);
    }
    return GrayImage(raw.height, raw.width, std::move(pixels));
}

RawGrid denormalize_image(const GrayImage& img, std::uint32_t depth) {
    const IntensityConvention conv(depth);
    RawGrid out{img.height(), img.width(), {}};
    out.values.reserve(img.pixels().size());
    for (double t : img.pixels()) out.values.push_back(conv.to_raw(t));
    return out;
}

std::string_view to_string(Direction dir) {
    switch (dir) {
        case Direction::Horizontal0: return "horizontal0";
        case Direction::Vertical90: return "vertical90";
        case Direction::Diag45: return "diag45";
        case Direction::Diag135: return "diag135";
    }
    return "unknown";
}

Direction parse_direction(std::string_view text) {
    if (text == "h" || text == "horizontal0" || text == "0") return Direction::Horizontal0;
    if (text == "v" || text == "vertical90" || text == "90") return Direction::Vertical90;
    if (text == "d45" || text == "diag45" || text == "45") return Direction::Diag45;
    if (text == "d135" || text == "diag135" || text == "135") return Direction::Diag135;
    throw InputDomainError("unknown direction '" + std::string(text) + "'");
}

OffsetSpec::OffsetSpec(int distance, Direction direction)
    : distance_(distance), direction_(direction) {
    if (distance < 1) {
        throw InputDomainError("OffsetSpec: distance must be >= 1, got " +
                               std::to_string(distance));
    }
    switch (direction) {
        case Direction::Horizontal0:
        case Direction::Vertical90:
        case Direction::Diag45:
        case Direction::Diag135:
            break;
        default:
            throw InputDomainError("OffsetSpec: invalid direction");
    }
}

Displacement OffsetSpec::displacement() const {
    switch (direction_) {
        case Direction::Horizontal0: return {0, distance_};
        case Direction::Vertical90: return {distance_, 0};
        case Direction::Diag45: return {-distance_, distance_};
        case Direction::Diag135: return {-distance_, -distance_};
    }
    return {};
}

std::string OffsetSpec::label() const {
    switch (direction_) {
        case Direction::Horizontal0: return "h" + std::to_string(distance_);
        case Direction::Vertical90: return "v" + std::to_string(distance_);
        case Direction::Diag45: return "d45:" + std::to_string(distance_);
        case Direction::Diag135: return "d135:" + std::to_string(distance_);
    }
    return {};
}

OffsetSpec OffsetSpec::parse(std::string_view text) {
    std::string_view dir_part;
    std::string_view dist_part;
    if (const auto colon = text.find(':'); colon != std::string_view::npos) {
        dir_part = text.substr(0, colon);
        dist_part = text.substr(colon + 1);
    } else if (!text.empty() && (text[0] == 'h' || text[0] == 'v')) {
        dir_part = text.substr(0, 1);
        dist_part = text.substr(1);
    } else {
        throw InputDomainError("cannot parse offset '" + std::string(text) +
                               "' (expected h1, v1, d45:1 or d135:1)");
    }
    int distance = 0;
    const auto [ptr, ec] =
        std::from_chars(dist_part.data(), dist_part.data() + dist_part.size(), distance);
    if (ec != std::errc{} || ptr != dist_part.data() + dist_part.size()) {
        throw InputDomainError("cannot parse offset distance in '" + std::string(text) + "'");
    }
    return {distance, parse_direction(dir_part)};
}

std::vector<OffsetSpec> default_offsets() {
    return {OffsetSpec::horizontal(1), OffsetSpec::vertical(1)};
}

}  // namespace softglcm
