#include "softglcm/losses.hpp"

#include "softglcm/error.hpp"
#include "softglcm/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace softglcm {

LossWeights::LossWeights(double a, double b, double g) : alpha(a), beta(b), gamma(g) {
    if (!(a >= 0.0) || !(b >= 0.0) || !(g >= 0.0) || !std::isfinite(a + b + g)) {
        throw ContractError("LossWeights: weights must be finite and non-negative");
    }
    if (a == 0.0 && b == 0.0 && g == 0.0) {
        throw ContractError("LossWeights: at least one weight must be positive");
    }
}

std::string LossWeights::label() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g", alpha, beta, gamma);
    return buf;
}

LossWeights weights_at(const PhaseSchedule& schedule, int step) {
    return step < schedule.warmup_steps ? schedule.warmup_weights : schedule.main_weights;
}

namespace {

void check_pairing(std::span<const PatchRef> predicted, std::span<const PatchRef> target,
                   const char* who) {
    if (predicted.empty() || predicted.size() != target.size()) {
        throw ContractError(std::string(who) + ": need equal, non-empty patch sequences (got " +
                            std::to_string(predicted.size()) + " and " +
                            std::to_string(target.size()) + ")");
    }
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i].patch_size != target[i].patch_size ||
            predicted[i].pixels.size() != target[i].pixels.size()) {
            throw ContractError(std::string(who) + ": shape mismatch at patch " +
                                std::to_string(i));
        }
    }
}

}  // namespace

LossResult mse_loss(std::span<const PatchRef> predicted, std::span<const PatchRef> target) {
    check_pairing(predicted, target, "mse_loss");
    LossResult out;
    out.gradient.resize(predicted.size());
    const double m = static_cast<double>(predicted.size());
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const auto& p = predicted[i].pixels;
        const auto& t = target[i].pixels;
        const double scale = 1.0 / (m * static_cast<double>(p.size()));
        double sum = 0.0;
        auto& g = out.gradient[i];
        g.resize(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double d = p[j] - t[j];
            sum += d * d;
            g[j] = 2.0 * d * scale;
        }
        out.loss += sum * scale;
    }
    return out;
}

GlcmReference make_glcm_reference(std::span<const PatchRef> target,
                                  std::span<const OffsetSpec> offsets,
                                  const SoftBinningConfig& config) {
    if (offsets.empty()) throw ContractError("glcm_loss: offset set is empty");
    GlcmReference ref{{offsets.begin(), offsets.end()}, config, {}};
    ref.matrices.resize(target.size());
    parallel_for(target.size(), [&](std::size_t i) {
        ref.matrices[i].reserve(offsets.size());
        for (const auto& off : offsets) {
            ref.matrices[i].push_back(soft_glcm_forward(target[i].view(), off, config).matrix);
        }
    });
    return ref;
}

LossResult glcm_loss(std::span<const PatchRef> predicted, const GlcmReference& reference) {
    if (predicted.empty() || predicted.size() != reference.matrices.size()) {
        throw ContractError("glcm_loss: reference covers " +
                            std::to_string(reference.matrices.size()) + " patches, got " +
                            std::to_string(predicted.size()));
    }
    const double m = static_cast<double>(predicted.size());
    const double o = static_cast<double>(reference.offsets.size());
    const double scale = 1.0 / (m * o);

    std::vector<double> terms(predicted.size(), 0.0);
    LossResult out;
    out.gradient.resize(predicted.size());
    parallel_for(predicted.size(), [&](std::size_t i) {
        const PixelView view = predicted[i].view();
        auto& g = out.gradient[i];
        g.assign(view.size(), 0.0);
        double term = 0.0;
        for (std::size_t oi = 0; oi < reference.offsets.size(); ++oi) {
            const SoftGlcmEvaluation eval(view, reference.offsets[oi], reference.config);
            const auto& pm = eval.result().matrix;
            const auto& tm = reference.matrices[i][oi];
            std::vector<double> upstream(pm.size());
            double s = 0.0;
            for (std::size_t e = 0; e < pm.size(); ++e) {
                const double d = pm[e] - tm[e];
                s += d * d;
                upstream[e] = 2.0 * d * scale;
            }
            term += s * scale;
            const auto pg = eval.backward(upstream);
            for (std::size_t j = 0; j < g.size(); ++j) g[j] += pg[j];
        }
        terms[i] = term;
    });
    for (double t : terms) out.loss += t;
    return out;
}

LossResult glcm_loss(std::span<const PatchRef> predicted, std::span<const PatchRef> target,
                     std::span<const OffsetSpec> offsets, const SoftBinningConfig& config) {
    check_pairing(predicted, target, "glcm_loss");
    return glcm_loss(predicted, make_glcm_reference(target, offsets, config));
}

LossResult ssim_loss(std::span<const PatchRef> predicted, std::span<const PatchRef> target,
                     const SsimConfig& config) {
    check_pairing(predicted, target, "ssim_loss");
    const double m = static_cast<double>(predicted.size());
    std::vector<double> terms(predicted.size());
    LossResult out;
    out.gradient.resize(predicted.size());
    parallel_for(predicted.size(), [&](std::size_t i) {
        SsimResult r = ssim_loss(predicted[i].view(), target[i].view(), config);
        terms[i] = r.loss / m;
        for (double& g : r.gradient) g /= m;
        out.gradient[i] = std::move(r.gradient);
    });
    for (double t : terms) out.loss += t;
    return out;
}

CombinedLoss combined_loss(std::span<const PatchRef> predicted, std::span<const PatchRef> target,
                           const LossWeights& weights, const LossConfig& config,
                           const GlcmReference* reference) {
    check_pairing(predicted, target, "combined_loss");
    CombinedLoss out;
    out.gradient.resize(predicted.size());
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        out.gradient[i].assign(predicted[i].pixels.size(), 0.0);
    }
    auto accumulate = [&](double weight, const LossResult& part) {
        out.loss += weight * part.loss;
        for (std::size_t i = 0; i < part.gradient.size(); ++i) {
            auto& g = out.gradient[i];
            for (std::size_t j = 0; j < g.size(); ++j) g[j] += weight * part.gradient[i][j];
        }
    };

    if (weights.alpha > 0.0) {
        const LossResult r = mse_loss(predicted, target);
        out.components.mse = r.loss;
        accumulate(weights.alpha, r);
    }
    if (weights.beta > 0.0) {
        const LossResult r =
            reference ? glcm_loss(predicted, *reference)
                      : glcm_loss(predicted, target, config.offsets, config.binning);
        out.components.glcm = r.loss;
        accumulate(weights.beta, r);
    }
    if (weights.gamma > 0.0) {
        const LossResult r = ssim_loss(predicted, target, config.ssim);
        out.components.ssim = r.loss;
        accumulate(weights.gamma, r);
    }
    return out;
}

}  // namespace softglcm
