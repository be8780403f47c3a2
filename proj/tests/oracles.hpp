#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the implementation paths it is used to check.

#include "softglcm/core.hpp"
#include "softglcm/imageio.hpp"
#include "softglcm/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

/// Every ordered pixel pair tested against the displacement, O(P^4).
inline std::vector<long> naive_glcm(const std::vector<int>& levels, int h, int w, int drow,
                                    int dcol, int k) {
    std::vector<long> m(static_cast<std::size_t>(k) * k, 0);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            for (int r2 = 0; r2 < h; ++r2)
                for (int c2 = 0; c2 < w; ++c2)
                    if (r2 - r == drow && c2 - c == dcol)
                        ++m[static_cast<std::size_t>(levels[r * w + c]) * k +
                            levels[r2 * w + c2]];
    return m;
}

inline double naive_sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Direct evaluation of (1/N) P1^T P2 for horizontal (drow=0,dcol=1) or
/// vertical (1,0) neighbours.
inline std::vector<double> direct_soft_glcm(const std::vector<double>& px, int h, int w,
                                            int drow, int dcol, int k, double steep) {
    const double len = 2.0 / k;
    auto member = [&](double t, int b) {
        const double mu = -1.0 + (b + 0.5) * len;
        return naive_sigmoid(steep * (t - mu + len / 2)) - naive_sigmoid(steep * (t - mu - len / 2));
    };
    std::vector<double> m(static_cast<std::size_t>(k) * k, 0.0);
    int n = 0;
    for (int r = 0; r + drow < h; ++r) {
        for (int c = 0; c + dcol < w; ++c) {
            const double a = px[r * w + c];
            const double b = px[(r + drow) * w + c + dcol];
            for (int v = 0; v < k; ++v)
                for (int u = 0; u < k; ++u) m[v * k + u] += member(a, v) * member(b, u);
            ++n;
        }
    }
    for (double& e : m) e /= n;
    return m;
}

/// Central differences of f at x with step h for every coordinate.
inline std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& f,
                                              std::vector<double> x, double h) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double keep = x[i];
        x[i] = keep + h;
        const double up = f(x);
        x[i] = keep - h;
        const double down = f(x);
        x[i] = keep;
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

/// Max over coordinates of |a - b| / max(|a|, |b|, floor). The floor keeps
/// coordinates with vanishing gradient from dominating through round-off.
inline double max_relative_error(const std::vector<double>& a, const std::vector<double>& b,
                                 double floor) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({std::abs(a[i]), std::abs(b[i]), floor});
        worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    }
    return worst;
}

/// max |a - b| / max |b|: error measured against the scale of the gradient.
inline double max_scaled_error(const std::vector<double>& a, const std::vector<double>& b) {
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        err = std::max(err, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(b[i]));
    }
    return scale > 0.0 ? err / scale : err;
}

/// Random interior intensities in [-lim, lim].
inline std::vector<double> random_pixels(softglcm::Rng& rng, std::size_t n, double lim = 0.95) {
    std::vector<double> px(n);
    for (auto& v : px) v = lim * softglcm::uniform_intensity(rng);
    return px;
}

inline softglcm::PatchRef make_patch(int size, std::vector<double> px, int row = 0, int col = 0) {
    return {row, col, size, std::move(px)};
}

}  // namespace oracle
