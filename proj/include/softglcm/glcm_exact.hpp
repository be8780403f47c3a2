#pragma once

#include "softglcm/core.hpp"

#include <vector>

namespace softglcm {

/// K x K co-occurrence matrix, row index = first pixel level v, column = neighbour level w.
struct CooccurrenceMatrix {
    int bins = 0;
    std::vector<double> entries;  // bins * bins, row-major
    bool normalized = false;
    OffsetSpec offset = OffsetSpec::horizontal(1);

    double at(int v, int w) const {
        return entries[static_cast<std::size_t>(v) * bins + w];
    }
    double& at(int v, int w) { return entries[static_cast<std::size_t>(v) * bins + w]; }
    double total() const;
};

/// Uniform quantizer shared with the soft binning layout:
/// level = floor(K (t + 1) / 2), clamped to [0, K - 1].
int quantize_level(double t, int levels);

/// Number of ordered pairs an H x W block yields for a displacement.
long pair_count(int height, int width, Displacement disp);

/// Unnormalized counts of ordered pairs (p, p + disp) by quantized level.
CooccurrenceMatrix exact_glcm(const PixelView& patch, Displacement disp, int levels);
CooccurrenceMatrix exact_glcm(const PixelView& patch, const OffsetSpec& offset, int levels);

CooccurrenceMatrix normalize_glcm(const CooccurrenceMatrix& m);

/// (m + m^T) / 2.
CooccurrenceMatrix symmetrize_glcm(const CooccurrenceMatrix& m);

/// Frobenius norm of the elementwise difference; matrices must share K.
double frobenius_distance(std::span<const double> a, std::span<const double> b);

}  // namespace softglcm
