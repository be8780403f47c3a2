#pragma once

#include "softglcm/core.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace softglcm {

/// Raw file contents as decoded from disk, before normalization.
struct DecodedImage {
    RawGrid raw;
    std::uint32_t depth = 256;  // gray-level count G (maxval + 1)
};

/// Decodes PGM (P2/P5, maxval up to 65535) or 8-bit grayscale PNG.
DecodedImage decode_gray(const std::filesystem::path& path);

/// Loads and normalizes to [-1, 1]; an alias for decode + normalize_image.
GrayImage load_gray(const std::filesystem::path& path);

/// Writes a binary PGM (P5). Depth up to 256 is written as one byte per pixel.
void save_pgm(const std::filesystem::path& path, const GrayImage& img,
              std::uint32_t depth = 256);
void save_pgm(const std::filesystem::path& path, const RawGrid& raw, std::uint32_t depth);

/// One square tile of a patch grid.
struct PatchRef {
    int grid_row = 0;
    int grid_col = 0;
    int patch_size = 0;
    std::vector<double> pixels;  // patch_size * patch_size, row-major

    PixelView view() const { return {patch_size, patch_size, pixels}; }
    bool operator==(const PatchRef&) const = default;
};

enum class PadPolicy { Reject, ReflectPad };

struct PatchSet {
    PatchGrid grid;
    std::vector<PatchRef> patches;  // row-major grid order
};

PatchSet extract_patches(const GrayImage& img, int patch_size, PadPolicy policy);

/// Inverse of extract_patches. Every grid cell must appear exactly once; the
/// result is cropped back to the grid's source size.
GrayImage assemble_patches(std::span<const PatchRef> patches, const PatchGrid& grid);

}  // namespace softglcm
