#include "softglcm/masking.hpp"

#include "softglcm/error.hpp"
#include "softglcm/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace softglcm {

bool MaskPlan::is_masked(int row, int col) const {
    return std::binary_search(masked.begin(), masked.end(), GridCell{row, col});
}

MaskPlan make_mask(const PatchGrid& grid, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw ContractError("make_mask: ratio must lie in (0, 1), got " + std::to_string(ratio));
    }
    const int total = grid.patch_count();
    if (total < 1) throw ContractError("make_mask: grid is empty");
    const long count = std::lround(ratio * total);
    if (count <= 0 || count >= total) {
        throw DegenerateInputError("make_mask: ratio " + std::to_string(ratio) + " on " +
                                   std::to_string(total) + " patches masks " +
                                   std::to_string(count) + " (all or none)");
    }

    std::vector<int> cells(static_cast<std::size_t>(total));
    std::iota(cells.begin(), cells.end(), 0);
    Rng rng(seed);
    for (long i = 0; i < count; ++i) {
        const auto j = static_cast<std::size_t>(
            i + static_cast<long>(uniform_below(rng, static_cast<std::uint64_t>(total - i))));
        std::swap(cells[static_cast<std::size_t>(i)], cells[j]);
    }
    cells.resize(static_cast<std::size_t>(count));
    std::sort(cells.begin(), cells.end());

    MaskPlan plan{grid, {}, ratio, seed};
    plan.masked.reserve(cells.size());
    for (int c : cells) plan.masked.push_back({c / grid.cols, c % grid.cols});
    return plan;
}

nlohmann::json to_json(const MaskPlan& plan) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : plan.masked) cells.push_back({c.row, c.col});
    return {
        {"grid",
         {{"patch_size", plan.grid.patch_size},
          {"rows", plan.grid.rows},
          {"cols", plan.grid.cols},
          {"source_height", plan.grid.source_height},
          {"source_width", plan.grid.source_width}}},
        {"ratio", plan.ratio},
        {"seed", plan.seed},
        {"rng", "mt19937_64"},
        {"masked", cells},
    };
}

MaskPlan mask_plan_from_json(const nlohmann::json& j) {
    try {
        MaskPlan plan;
        const auto& g = j.at("grid");
        plan.grid = {g.at("patch_size").get<int>(), g.at("rows").get<int>(),
                     g.at("cols").get<int>(), g.at("source_height").get<int>(),
                     g.at("source_width").get<int>()};
        plan.ratio = j.at("ratio").get<double>();
        plan.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& c : j.at("masked")) {
            plan.masked.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
        }
        std::sort(plan.masked.begin(), plan.masked.end());
        return plan;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("mask plan JSON: ") + e.what());
    }
}

MaskedImage apply_mask(const GrayImage& img, const MaskPlan& plan, const MaskFill& fill) {
    const PatchGrid& grid = plan.grid;
    if (grid.source_height != img.height() || grid.source_width != img.width()) {
        throw ContractError("apply_mask: plan was made for a " +
                            std::to_string(grid.source_height) + "x" +
                            std::to_string(grid.source_width) + " image, got " +
                            std::to_string(img.height()) + "x" + std::to_string(img.width()));
    }
    PatchSet set = extract_patches(img, grid.patch_size, PadPolicy::ReflectPad);
    if (!(set.grid == grid)) throw ContractError("apply_mask: plan grid does not match image");
    if (fill.kind == MaskFill::Kind::Constant && !(fill.value >= -1.0 && fill.value <= 1.0)) {
        throw InputDomainError("apply_mask: constant fill outside [-1, 1]");
    }

    MaskedImage out{{}, {}, img};
    std::vector<PatchRef> corrupted_patches = set.patches;
    Rng rng(fill.seed);
    for (std::size_t idx = 0; idx < set.patches.size(); ++idx) {
        const PatchRef& p = set.patches[idx];
        if (!plan.is_masked(p.grid_row, p.grid_col)) {
            out.visible.push_back(p);
            continue;
        }
        out.masked_targets.push_back(p);
        for (double& v : corrupted_patches[idx].pixels) {
            v = fill.kind == MaskFill::Kind::Noise ? uniform_intensity(rng) : fill.value;
        }
    }
    out.corrupted = assemble_patches(corrupted_patches, grid);
    return out;
}

}  // namespace softglcm
