#pragma once

#include "softglcm/glcm_exact.hpp"

#include <array>
#include <cstdint>
#include <vector>
#include <span>
#include <string_view>

namespace softglcm {

inline constexpr std::size_t kHaralickFeatureCount = 12;

/// Haralick's classical features 1-12 of a normalized symmetric GLCM.
///
/// Gray levels are indexed 1..K as in Haralick's definitions, logarithms are
/// base 2 with 0 log 0 = 0, and sum variance is centred on the sum average.
struct HaralickVector {
    double angular_second_moment = 0.0;  // energy
    double contrast = 0.0;
    double correlation = 0.0;
    double sum_of_squares_variance = 0.0;
    double inverse_difference_moment = 0.0;  // homogeneity
    double sum_average = 0.0;
    double sum_variance = 0.0;
    double sum_entropy = 0.0;
    double entropy = 0.0;
    double difference_variance = 0.0;
    double difference_entropy = 0.0;
    double information_measure_of_correlation_1 = 0.0;

    std::array<double, kHaralickFeatureCount> values() const;
    static HaralickVector from_values(std::span<const double> values);
    bool operator==(const HaralickVector&) const = default;
};

/// CSV column names, in field order.
const std::array<std::string_view, kHaralickFeatureCount>& haralick_feature_names();

HaralickVector haralick_features(const CooccurrenceMatrix& m);

/// Pools the exact GLCM counts over the given offsets, then symmetrizes and
/// normalizes. Views are assumed to share the same quantization.
CooccurrenceMatrix pooled_glcm(std::span<const PixelView> views,
                               std::span<const OffsetSpec> offsets, int levels);

struct FeatureDistance {
    std::array<double, kHaralickFeatureCount> absolute{};
    std::array<double, kHaralickFeatureCount> relative{};
};

/// |a - b| and |a - b| / max(|b|, 1e-12) per feature.
FeatureDistance feature_distance(const HaralickVector& a, const HaralickVector& b);

}  // namespace softglcm

namespace softglcm {

/// Counts of raw levels after denormalization to `depth` gray levels.
std::vector<long> intensity_histogram(std::span<const double> pixels, std::uint32_t depth = 256);

/// Number of non-empty histogram bins.
int occupied_bins(std::span<const long> histogram);

}  // namespace softglcm
