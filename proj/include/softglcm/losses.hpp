#pragma once

#include "softglcm/core.hpp"
#include "softglcm/glcm_soft.hpp"
#include "softglcm/imageio.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace softglcm {

/// Scaling factors of the combined objective alpha*MSE + beta*GLCM + gamma*SSIM.
struct LossWeights {
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 0.0;

    LossWeights() = default;
    LossWeights(double a, double b, double g);

    std::string label() const;
    bool operator==(const LossWeights&) const = default;
};

/// Warm-up with MSE only, then the down-weighted MSE plus GLCM and SSIM.
struct PhaseSchedule {
    int warmup_steps = 400;
    LossWeights warmup_weights{1.0, 0.0, 0.0};
    LossWeights main_weights{0.1, 1.0, 1.0};
};

LossWeights weights_at(const PhaseSchedule& schedule, int step);

/// Standard SSIM setup for data with dynamic range R (2 for [-1, 1]).
struct SsimConfig {
    int window = 11;
    double sigma = 1.5;
    double dynamic_range = 2.0;

    double c1() const { return (0.01 * dynamic_range) * (0.01 * dynamic_range); }
    double c2() const { return (0.03 * dynamic_range) * (0.03 * dynamic_range); }
    /// Normalised separable Gaussian, window x window, row-major.
    std::vector<double> gaussian_window() const;
};

/// Scalar loss with its gradient, one vector per predicted patch.
struct LossResult {
    double loss = 0.0;
    std::vector<std::vector<double>> gradient;
};

/// Gradient-carrying SSIM result for one image pair.
struct SsimResult {
    double ssim = 1.0;  // mean local SSIM
    double loss = 0.0;  // 1 - ssim
    std::vector<double> gradient;
};

/// Mean over patches of the per-patch mean squared pixel difference.
LossResult mse_loss(std::span<const PatchRef> predicted, std::span<const PatchRef> target);

/// Soft GLCMs of the ground-truth patches, held constant during optimisation.
struct GlcmReference {
    std::vector<OffsetSpec> offsets;
    SoftBinningConfig config;
    std::vector<std::vector<std::vector<double>>> matrices;  // [patch][offset] -> K*K
};

GlcmReference make_glcm_reference(std::span<const PatchRef> target,
                                  std::span<const OffsetSpec> offsets,
                                  const SoftBinningConfig& config);

/// (1/|M|) sum_i (1/|O|) sum_o sum_{v,w} (G_pred - G_true)^2.
LossResult glcm_loss(std::span<const PatchRef> predicted, const GlcmReference& reference);
LossResult glcm_loss(std::span<const PatchRef> predicted, std::span<const PatchRef> target,
                     std::span<const OffsetSpec> offsets, const SoftBinningConfig& config);

/// 1 - mean local SSIM. Images smaller than the window use one uniform
/// window spanning the whole input.
SsimResult ssim_loss(const PixelView& predicted, const PixelView& target,
                     const SsimConfig& config = {});

/// Per-patch SSIM loss averaged over patches.
LossResult ssim_loss(std::span<const PatchRef> predicted, std::span<const PatchRef> target,
                     const SsimConfig& config = {});

struct LossConfig {
    std::vector<OffsetSpec> offsets = default_offsets();
    SoftBinningConfig binning{64, 30.0};
    SsimConfig ssim{};
};

/// Unweighted component values; a component is empty when its weight is zero
/// and it was not evaluated.
struct LossComponents {
    std::optional<double> mse;
    std::optional<double> glcm;
    std::optional<double> ssim;
};

struct CombinedLoss {
    double loss = 0.0;
    std::vector<std::vector<double>> gradient;
    LossComponents components;
};

/// Weighted sum of the three losses. `reference` may carry precomputed target
/// GLCMs; it is rebuilt from `target` when absent.
CombinedLoss combined_loss(std::span<const PatchRef> predicted, std::span<const PatchRef> target,
                           const LossWeights& weights, const LossConfig& config,
                           const GlcmReference* reference = nullptr);

}  // namespace softglcm
