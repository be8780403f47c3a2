#pragma once

#include "softglcm/core.hpp"
#include "softglcm/imageio.hpp"

#include "json.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace softglcm {

struct GridCell {
    int row = 0;
    int col = 0;

    auto operator<=>(const GridCell&) const = default;
};

/// Cells hidden from the reconstruction, sorted row-major.
struct MaskPlan {
    PatchGrid grid;
    std::vector<GridCell> masked;
    double ratio = 0.75;
    std::uint64_t seed = 0;

    bool is_masked(int row, int col) const;
    bool operator==(const MaskPlan&) const = default;
};

/// Samples round(ratio * patch_count) distinct cells uniformly without
/// replacement: a partial Fisher-Yates shuffle of the row-major cell indices
/// driven by MT19937-64 seeded with `seed`.
MaskPlan make_mask(const PatchGrid& grid, double ratio, std::uint64_t seed);

nlohmann::json to_json(const MaskPlan& plan);
MaskPlan mask_plan_from_json(const nlohmann::json& j);

/// How masked regions of the corrupted image are filled.
struct MaskFill {
    enum class Kind { Noise, Constant };
    Kind kind = Kind::Constant;
    std::uint64_t seed = 0;
    double value = 0.0;

    static MaskFill noise(std::uint64_t seed) { return {Kind::Noise, seed, 0.0}; }
    static MaskFill constant(double value) { return {Kind::Constant, 0, value}; }
};

struct MaskedImage {
    std::vector<PatchRef> visible;
    std::vector<PatchRef> masked_targets;  // original content, in plan order
    GrayImage corrupted;
};

MaskedImage apply_mask(const GrayImage& img, const MaskPlan& plan, const MaskFill& fill);

}  // namespace softglcm
