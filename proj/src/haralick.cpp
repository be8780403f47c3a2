#include "softglcm/haralick.hpp"

#include "softglcm/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace softglcm {

namespace {

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

std::array<double, kHaralickFeatureCount> HaralickVector::values() const {
    return {angular_second_moment, contrast,    correlation,
            sum_of_squares_variance, inverse_difference_moment, sum_average,
            sum_variance,          sum_entropy, entropy,
            difference_variance,   difference_entropy, information_measure_of_correlation_1};
}

HaralickVector HaralickVector::from_values(std::span<const double> v) {
    if (v.size() != kHaralickFeatureCount) throw ContractError("HaralickVector: need 12 values");
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11]};
}

const std::array<std::string_view, kHaralickFeatureCount>& haralick_feature_names() {
    static const std::array<std::string_view, kHaralickFeatureCount> names = {
        "angular_second_moment",
        "contrast",
        "correlation",
        "sum_of_squares_variance",
        "inverse_difference_moment",
        "sum_average",
        "sum_variance",
        "sum_entropy",
        "entropy",
        "difference_variance",
        "difference_entropy",
        "information_measure_of_correlation_1",
    };
    return names;
}

HaralickVector haralick_features(const CooccurrenceMatrix& m) {
    const int k = m.bins;
    if (k < 2 || m.entries.size() != static_cast<std::size_t>(k) * k) {
        throw ContractError("haralick_features: need a K x K matrix with K >= 2");
    }
    if (!m.normalized || std::abs(m.total() - 1.0) > 1e-9) {
        throw ContractError("haralick_features: matrix must be normalized");
    }
    for (int v = 0; v < k; ++v) {
        for (int w = v + 1; w < k; ++w) {
            if (std::abs(m.at(v, w) - m.at(w, v)) > 1e-12) {
                throw ContractError("haralick_features: matrix must be symmetric");
            }
        }
    }

    std::vector<double> px(k, 0.0), psum(2 * k + 1, 0.0), pdiff(k, 0.0);
    HaralickVector f;
    double hxy = 0.0;
    for (int v = 0; v < k; ++v) {
        for (int w = 0; w < k; ++w) {
            const double p = m.at(v, w);
            const int i = v + 1;
            const int j = w + 1;
            px[v] += p;
            psum[i + j] += p;
            pdiff[std::abs(i - j)] += p;
            f.angular_second_moment += p * p;
            f.contrast += p * (i - j) * (i - j);
            f.inverse_difference_moment += p / (1.0 + (i - j) * (i - j));
            hxy -= plogp(p);
        }
    }
    // Symmetric input: p_y = p_x.
    double mu = 0.0;
    double hx = 0.0;
    for (int v = 0; v < k; ++v) {
        mu += (v + 1) * px[v];
        hx -= plogp(px[v]);
    }
    double var = 0.0;
    for (int v = 0; v < k; ++v) var += (v + 1 - mu) * (v + 1 - mu) * px[v];

    double cross = 0.0;
    double hxy1 = 0.0;
    for (int v = 0; v < k; ++v) {
        for (int w = 0; w < k; ++w) {
            const double p = m.at(v, w);
            cross += (v + 1) * (w + 1) * p;
            const double q = px[v] * px[w];
            if (p > 0.0 && q > 0.0) hxy1 -= p * std::log2(q);
        }
    }
    f.correlation = var > 0.0 ? std::clamp((cross - mu * mu) / var, -1.0, 1.0) : 0.0;
    f.sum_of_squares_variance = var;

    for (int s = 2; s <= 2 * k; ++s) {
        f.sum_average += s * psum[s];
        f.sum_entropy -= plogp(psum[s]);
    }
    for (int s = 2; s <= 2 * k; ++s) {
        f.sum_variance += (s - f.sum_average) * (s - f.sum_average) * psum[s];
    }
    double dmean = 0.0;
    for (int d = 0; d < k; ++d) {
        dmean += d * pdiff[d];
        f.difference_entropy -= plogp(pdiff[d]);
    }
    for (int d = 0; d < k; ++d) f.difference_variance += (d - dmean) * (d - dmean) * pdiff[d];

    f.entropy = std::max(hxy, 0.0);
    f.sum_entropy = std::max(f.sum_entropy, 0.0);
    f.difference_entropy = std::max(f.difference_entropy, 0.0);
    f.information_measure_of_correlation_1 = hx > 0.0 ? (hxy - hxy1) / hx : 0.0;
    return f;
}

CooccurrenceMatrix pooled_glcm(std::span<const PixelView> views,
                               std::span<const OffsetSpec> offsets, int levels) {
    if (views.empty() || offsets.empty()) {
        throw ContractError("pooled_glcm: need at least one view and one offset");
    }
    CooccurrenceMatrix pooled;
    pooled.bins = levels;
    pooled.entries.assign(static_cast<std::size_t>(levels) * levels, 0.0);
    pooled.offset = offsets.front();
    for (const auto& view : views) {
        for (const auto& off : offsets) {
            if (pair_count(view.height, view.width, off.displacement()) == 0) continue;
            const auto m = exact_glcm(view, off, levels);
            for (std::size_t e = 0; e < m.entries.size(); ++e) pooled.entries[e] += m.entries[e];
        }
    }
    return normalize_glcm(symmetrize_glcm(pooled));
}

FeatureDistance feature_distance(const HaralickVector& a, const HaralickVector& b) {
    const auto va = a.values();
    const auto vb = b.values();
    FeatureDistance d;
    for (std::size_t i = 0; i < kHaralickFeatureCount; ++i) {
        d.absolute[i] = std::abs(va[i] - vb[i]);
        d.relative[i] = d.absolute[i] / std::max(std::abs(vb[i]), 1e-12);
    }
    return d;
}

}  // namespace softglcm

namespace softglcm {

std::vector<long> intensity_histogram(std::span<const double> pixels, std::uint32_t depth) {
    const IntensityConvention conv(depth);
    std::vector<long> hist(depth, 0);
    for (double t : pixels) ++hist[conv.to_raw(t)];
    return hist;
}

int occupied_bins(std::span<const long> histogram) {
    return static_cast<int>(
        std::count_if(histogram.begin(), histogram.end(), [](long c) { return c > 0; }));
}

}  // namespace softglcm
