#include "softglcm/glcm_exact.hpp"

#include "softglcm/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace softglcm {

double CooccurrenceMatrix::total() const {
    return std::accumulate(entries.begin(), entries.end(), 0.0);
}

int quantize_level(double t, int levels) {
    // Values a rounding error short of a bin edge belong to the upper bin, so
    // raw integer intensities quantize exactly.
    const int level = static_cast<int>(std::floor(levels * (t + 1.0) * 0.5 + 1e-9));
    return std::clamp(level, 0, levels - 1);
}

long pair_count(int height, int width, Displacement disp) {
    const long rows = height - std::abs(disp.drow);
    const long cols = width - std::abs(disp.dcol);
    return rows > 0 && cols > 0 ? rows * cols : 0;
}

CooccurrenceMatrix exact_glcm(const PixelView& patch, Displacement disp, int levels) {
    if (levels < 2) throw ContractError("exact_glcm: levels must be >= 2");
    if (pair_count(patch.height, patch.width, disp) == 0) {
        throw GeometryError("exact_glcm: " + std::to_string(patch.height) + "x" +
                            std::to_string(patch.width) + " patch has no pixel pairs at (" +
                            std::to_string(disp.drow) + ", " + std::to_string(disp.dcol) + ")");
    }
    CooccurrenceMatrix m;
    m.bins = levels;
    m.entries.assign(static_cast<std::size_t>(levels) * levels, 0.0);

    const int r0 = std::max(0, -disp.drow);
    const int r1 = patch.height - std::max(0, disp.drow);
    const int c0 = std::max(0, -disp.dcol);
    const int c1 = patch.width - std::max(0, disp.dcol);
    for (int r = r0; r < r1; ++r) {
        for (int c = c0; c < c1; ++c) {
            const int v = quantize_level(patch.at(r, c), levels);
            const int w = quantize_level(patch.at(r + disp.drow, c + disp.dcol), levels);
            m.at(v, w) += 1.0;
        }
    }
    return m;
}

CooccurrenceMatrix exact_glcm(const PixelView& patch, const OffsetSpec& offset, int levels) {
    CooccurrenceMatrix m = exact_glcm(patch, offset.displacement(), levels);
    m.offset = offset;
    return m;
}

CooccurrenceMatrix normalize_glcm(const CooccurrenceMatrix& m) {
    const double sum = m.total();
    if (!(sum > 0.0)) throw DegenerateInputError("normalize_glcm: matrix has zero mass");
    CooccurrenceMatrix out = m;
    if (m.normalized) return out;
    for (double& e : out.entries) e /= sum;
    out.normalized = true;
    return out;
}

CooccurrenceMatrix symmetrize_glcm(const CooccurrenceMatrix& m) {
    CooccurrenceMatrix out = m;
    for (int v = 0; v < m.bins; ++v) {
        for (int w = 0; w < m.bins; ++w) out.at(v, w) = 0.5 * (m.at(v, w) + m.at(w, v));
    }
    return out;
}

double frobenius_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ContractError("frobenius_distance: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace softglcm
