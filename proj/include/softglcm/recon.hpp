#pragma once

#include "softglcm/haralick.hpp"
#include "softglcm/imageio.hpp"
#include "softglcm/losses.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace softglcm {

/// Starting point for the optimised pixels.
struct ReconInit {
    enum class Kind { Noise, Constant, VisibleMean };
    Kind kind = Kind::VisibleMean;
    std::uint64_t seed = 0;
    double value = 0.0;

    static ReconInit noise(std::uint64_t seed) { return {Kind::Noise, seed, 0.0}; }
    static ReconInit constant(double value) { return {Kind::Constant, 0, value}; }
    static ReconInit visible_mean() { return {Kind::VisibleMean, 0, 0.0}; }
};

struct ReconConfig {
    double step_size = 0.05;
    int max_steps = 2000;
    PhaseSchedule schedule{};
    LossConfig loss{};
    ReconInit init{};
    /// Quantization levels for the Haralick comparison of the result.
    int haralick_levels = 64;
    /// Early exit once the total loss drops below this.
    double tolerance = 1e-8;

    void validate() const;
};

/// Schedule that applies one set of weights from the first step.
PhaseSchedule fixed_schedule(const LossWeights& weights);

struct ReconStep {
    int step = 0;
    LossWeights weights;
    double total = 0.0;
    LossComponents components;
};

struct ReconTrace {
    std::vector<ReconStep> steps;
    HaralickVector result_features;
    HaralickVector target_features;
    FeatureDistance final_distance;  // result vs target
};

struct ReconResult {
    std::vector<PatchRef> patches;
    ReconTrace trace;
};

/// Projected gradient descent on the pixels of the masked patches:
/// x <- clamp(x - step_size * grad L(x), -1, 1), with the loss weights taken
/// from the schedule at each step. `visible` is only consulted for the
/// VisibleMean initialisation.
ReconResult reconstruct_patches(std::span<const PatchRef> targets, const ReconConfig& cfg,
                                std::span<const PatchRef> visible = {});

/// One row per step: step,alpha,beta,gamma,total,mse,glcm,ssim.
void write_trace_csv(std::ostream& out, const ReconTrace& trace);
nlohmann::json trace_summary(const ReconTrace& trace);

/// Separable Gaussian blur with mirrored borders; kernel radius ceil(3 sigma).
std::vector<double> gaussian_blur(const PixelView& image, double sigma);

/// Every loss component of a Gaussian-blurred copy of `target` against the original.
LossComponents blur_probe(const PatchRef& target, double sigma, const LossConfig& config = {});

/// All three components of `predicted` against `target`, regardless of weights.
LossComponents loss_components(std::span<const PatchRef> predicted,
                               std::span<const PatchRef> target, const LossConfig& config = {});

}  // namespace softglcm
