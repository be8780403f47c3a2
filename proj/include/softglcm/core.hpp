#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace softglcm {

/// Non-owning row-major view of a 2-D block of normalized intensities.
struct PixelView {
    int height = 0;
    int width = 0;
    std::span<const double> pixels;

    double at(int row, int col) const {
        return pixels[static_cast<std::size_t>(row) * width + col];
    }
    std::size_t size() const { return pixels.size(); }
};

/// Grayscale image with intensities normalized to [-1, 1].
///
/// Construction validates shape and range; the object is immutable afterwards.
class GrayImage {
public:
    GrayImage(int height, int width, std::vector<double> pixels);

    /// Image filled with a single intensity.
    static GrayImage filled(int height, int width, double value);

    int height() const { return height_; }
    int width() const { return width_; }
    double at(int row, int col) const {
        return pixels_[static_cast<std::size_t>(row) * width_ + col];
    }
    std::span<const double> pixels() const { return pixels_; }
    PixelView view() const { return {height_, width_, pixels_}; }

    bool operator==(const GrayImage&) const = default;

private:
    int height_;
    int width_;
    std::vector<double> pixels_;
};

/// Row-major grid of raw integer gray levels as stored in a file.
struct RawGrid {
    int height = 0;
    int width = 0;
    std::vector<std::uint32_t> values;

    bool operator==(const RawGrid&) const = default;
};

/// Affine map between raw levels {0..G-1} and normalized [-1, 1]:
/// t = 2 v / (G - 1) - 1.
class IntensityConvention {
public:
    explicit IntensityConvention(std::uint32_t depth);

    std::uint32_t depth() const { return depth_; }
    double to_normalized(std::uint32_t raw) const;
    /// Inverse map, rounding half to even and clamping to [0, G-1].
    std::uint32_t to_raw(double normalized) const;

private:
    std::uint32_t depth_;
};

GrayImage normalize_image(const RawGrid& raw, std::uint32_t depth);
RawGrid denormalize_image(const GrayImage& img, std::uint32_t depth);

enum class Direction { Horizontal0, Vertical90, Diag45, Diag135 };

std::string_view to_string(Direction dir);
Direction parse_direction(std::string_view text);

/// Row/column step from a pixel to its co-occurrence neighbour.
struct Displacement {
    int drow = 0;
    int dcol = 0;

    Displacement reversed() const { return {-drow, -dcol}; }
    bool operator==(const Displacement&) const = default;
};

/// Pixel-pair geometry: distance d and direction theta.
class OffsetSpec {
public:
    OffsetSpec(int distance, Direction direction);

    static OffsetSpec horizontal(int distance = 1) {
        return {distance, Direction::Horizontal0};
    }
    static OffsetSpec vertical(int distance = 1) {
        return {distance, Direction::Vertical90};
    }

    int distance() const { return distance_; }
    Direction direction() const { return direction_; }

    /// Horizontal0 pairs (r, c) with (r, c + d); Vertical90 with (r + d, c);
    /// Diag45 with (r - d, c + d); Diag135 with (r - d, c - d).
    Displacement displacement() const;

    /// Text form "h1", "v2", "d45:1", "d135:1".
    std::string label() const;
    static OffsetSpec parse(std::string_view text);

    bool operator==(const OffsetSpec&) const = default;

private:
    int distance_;
    Direction direction_;
};

/// Default offsets for loss and feature extraction: horizontal and vertical, d = 1.
std::vector<OffsetSpec> default_offsets();

/// Square patch tiling of an image. `source_height`/`source_width` record the
/// image size before any padding so assembly can crop back.
struct PatchGrid {
    int patch_size = 0;
    int rows = 0;
    int cols = 0;
    int source_height = 0;
    int source_width = 0;

    int patch_count() const { return rows * cols; }
    int padded_height() const { return rows * patch_size; }
    int padded_width() const { return cols * patch_size; }
    bool operator==(const PatchGrid&) const = default;
};

}  // namespace softglcm
