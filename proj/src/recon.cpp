#include "softglcm/recon.hpp"

#include "softglcm/error.hpp"
#include "softglcm/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace softglcm {

void ReconConfig::validate() const {
    if (!(step_size > 0.0) || !std::isfinite(step_size)) {
        throw ContractError("ReconConfig: step_size must be positive");
    }
    if (max_steps < 0) throw ContractError("ReconConfig: max_steps must be >= 0");
    if (schedule.warmup_steps < 0) throw ContractError("ReconConfig: warmup_steps must be >= 0");
    if (loss.offsets.empty()) throw ContractError("ReconConfig: offset set is empty");
    if (haralick_levels < 2) throw ContractError("ReconConfig: haralick_levels must be >= 2");
}

PhaseSchedule fixed_schedule(const LossWeights& weights) { return {0, weights, weights}; }

namespace {

std::vector<PatchRef> initial_patches(std::span<const PatchRef> targets, const ReconInit& init,
                                      std::span<const PatchRef> visible) {
    double fill = init.value;
    if (init.kind == ReconInit::Kind::VisibleMean) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& p : visible) {
            for (double v : p.pixels) sum += v;
            n += p.pixels.size();
        }
        if (n == 0) throw ContractError("reconstruct_patches: VisibleMean init without visible patches");
        fill = sum / static_cast<double>(n);
    } else if (init.kind == ReconInit::Kind::Constant && !(fill >= -1.0 && fill <= 1.0)) {
        throw InputDomainError("reconstruct_patches: constant init outside [-1, 1]");
    }
    std::vector<PatchRef> out(targets.begin(), targets.end());
    Rng rng(init.seed);
    for (auto& p : out) {
        for (double& v : p.pixels) {
            v = init.kind == ReconInit::Kind::Noise ? uniform_intensity(rng) : fill;
        }
    }
    return out;
}

std::vector<PixelView> views_of(std::span<const PatchRef> patches) {
    std::vector<PixelView> views;
    views.reserve(patches.size());
    for (const auto& p : patches) views.push_back(p.view());
    return views;
}

std::string fmt_opt(const std::optional<double>& v) {
    if (!v) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", *v);
    return buf;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

bool all_finite(const CombinedLoss& l) {
    if (!std::isfinite(l.loss)) return false;
    for (const auto& g : l.gradient) {
        for (double v : g) {
            if (!std::isfinite(v)) return false;
        }
    }
    return true;
}

}  // namespace

ReconResult reconstruct_patches(std::span<const PatchRef> targets, const ReconConfig& cfg,
                                std::span<const PatchRef> visible) {
    cfg.validate();
    if (targets.empty()) throw ContractError("reconstruct_patches: no target patches");

    ReconResult out;
    out.patches = initial_patches(targets, cfg.init, visible);

    const bool needs_glcm = cfg.schedule.warmup_weights.beta > 0.0 ||
                            (cfg.schedule.main_weights.beta > 0.0 &&
                             cfg.max_steps > cfg.schedule.warmup_steps);
    std::optional<GlcmReference> reference;
    if (needs_glcm) {
        reference = make_glcm_reference(targets, cfg.loss.offsets, cfg.loss.binning);
    }

    for (int step = 0; step < cfg.max_steps; ++step) {
        const LossWeights w = weights_at(cfg.schedule, step);
        const CombinedLoss l = combined_loss(out.patches, targets, w, cfg.loss,
                                             reference ? &*reference : nullptr);
        if (!all_finite(l)) {
            throw NumericalError("reconstruct_patches: non-finite loss or gradient at step " +
                                     std::to_string(step) + " (total=" + fmt(l.loss) +
                                     " mse=" + fmt_opt(l.components.mse) +
                                     " glcm=" + fmt_opt(l.components.glcm) +
                                     " ssim=" + fmt_opt(l.components.ssim) + ")",
                                 step);
        }
        out.trace.steps.push_back({step, w, l.loss, l.components});
        if (l.loss < cfg.tolerance) break;
        for (std::size_t i = 0; i < out.patches.size(); ++i) {
            auto& px = out.patches[i].pixels;
            const auto& g = l.gradient[i];
            for (std::size_t j = 0; j < px.size(); ++j) {
                px[j] = std::clamp(px[j] - cfg.step_size * g[j], -1.0, 1.0);
            }
        }
    }

    const auto offsets = default_offsets();
    const auto result_views = views_of(out.patches);
    const auto target_views = views_of(targets);
    out.trace.result_features =
        haralick_features(pooled_glcm(result_views, offsets, cfg.haralick_levels));
    out.trace.target_features =
        haralick_features(pooled_glcm(target_views, offsets, cfg.haralick_levels));
    out.trace.final_distance =
        feature_distance(out.trace.result_features, out.trace.target_features);
    return out;
}

void write_trace_csv(std::ostream& out, const ReconTrace& trace) {
    out << "step,alpha,beta,gamma,total,mse,glcm,ssim\n";
    for (const auto& s : trace.steps) {
        out << s.step << ',' << fmt(s.weights.alpha) << ',' << fmt(s.weights.beta) << ','
            << fmt(s.weights.gamma) << ',' << fmt(s.total) << ',' << fmt_opt(s.components.mse)
            << ',' << fmt_opt(s.components.glcm) << ',' << fmt_opt(s.components.ssim) << '\n';
    }
}

nlohmann::json trace_summary(const ReconTrace& trace) {
    nlohmann::json j;
    j["steps"] = trace.steps.size();
    if (!trace.steps.empty()) {
        j["initial_total"] = trace.steps.front().total;
        j["final_total"] = trace.steps.back().total;
        double best = trace.steps.front().total;
        for (const auto& s : trace.steps) best = std::min(best, s.total);
        j["min_total"] = best;
    }
    nlohmann::json features = nlohmann::json::object();
    const auto names = haralick_feature_names();
    const auto rv = trace.result_features.values();
    const auto tv = trace.target_features.values();
    for (std::size_t i = 0; i < kHaralickFeatureCount; ++i) {
        features[std::string(names[i])] = {{"result", rv[i]},
                                           {"target", tv[i]},
                                           {"absolute", trace.final_distance.absolute[i]},
                                           {"relative", trace.final_distance.relative[i]}};
    }
    j["haralick"] = features;
    return j;
}

std::vector<double> gaussian_blur(const PixelView& image, double sigma) {
    if (!(sigma > 0.0)) throw ContractError("gaussian_blur: sigma must be positive");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += kernel[i + radius];
    }
    for (double& k : kernel) k /= sum;

    auto mirror = [](int i, int n) {
        if (n == 1) return 0;
        const int period = 2 * (n - 1);
        i %= period;
        if (i < 0) i += period;
        return i < n ? i : period - i;
    };
    const int h = image.height;
    const int w = image.width;
    std::vector<double> tmp(static_cast<std::size_t>(h) * w), out(tmp.size());
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double s = 0.0;
            for (int i = -radius; i <= radius; ++i) s += kernel[i + radius] * image.at(r, mirror(c + i, w));
            tmp[static_cast<std::size_t>(r) * w + c] = s;
        }
    }
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double s = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                s += kernel[i + radius] * tmp[static_cast<std::size_t>(mirror(r + i, h)) * w + c];
            }
            out[static_cast<std::size_t>(r) * w + c] = std::clamp(s, -1.0, 1.0);
        }
    }
    return out;
}

LossComponents loss_components(std::span<const PatchRef> predicted,
                               std::span<const PatchRef> target, const LossConfig& config) {
    return combined_loss(predicted, target, LossWeights{1.0, 1.0, 1.0}, config).components;
}

LossComponents blur_probe(const PatchRef& target, double sigma, const LossConfig& config) {
    PatchRef blurred = target;
    blurred.pixels = gaussian_blur(target.view(), sigma);
    return loss_components(std::span(&blurred, 1), std::span(&target, 1), config);
}

}  // namespace softglcm
