#include "softglcm/glcm_soft.hpp"

#include "softglcm/error.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace softglcm {

SoftBinningConfig::SoftBinningConfig(int bins, double steepness)
    : bins_(bins), steepness_(steepness) {
    if (bins < 2) {
        throw ContractError("SoftBinningConfig: bins must be >= 2, got " + std::to_string(bins));
    }
    if (!(steepness > 0.0) || !std::isfinite(steepness)) {
        throw ContractError("SoftBinningConfig: steepness must be positive and finite");
    }
}

double stable_sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double sigmoid_slope(double z) {
    const double e = std::exp(-std::abs(z));
    const double d = 1.0 + e;
    return e / (d * d);
}

double bin_membership(double t, int k, const SoftBinningConfig& cfg) {
    const double half = 0.5 * cfg.bin_length();
    const double u = t - cfg.center(k);
    const double a = cfg.steepness() * (u + half);
    const double b = cfg.steepness() * (u - half);
    // Both edges on the saturated side: use the mirrored form to avoid cancellation.
    if (b >= 0.0) return stable_sigmoid(-b) - stable_sigmoid(-a);
    return stable_sigmoid(a) - stable_sigmoid(b);
}

double bin_membership_derivative(double t, int k, const SoftBinningConfig& cfg) {
    const double half = 0.5 * cfg.bin_length();
    const double u = t - cfg.center(k);
    const double w = cfg.steepness();
    return w * (sigmoid_slope(w * (u + half)) - sigmoid_slope(w * (u - half)));
}

namespace {

void check_domain(std::span<const double> values, const char* who) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= -1.0 && values[i] <= 1.0)) {
            throw InputDomainError(std::string(who) + ": value " + std::to_string(values[i]) +
                                   " at index " + std::to_string(i) + " outside [-1, 1]");
        }
    }
}

DenseMatrix membership_derivatives(std::span<const double> values,
                                   const SoftBinningConfig& cfg) {
    DenseMatrix d(static_cast<int>(values.size()), cfg.bins());
    for (int n = 0; n < d.rows; ++n) {
        for (int k = 0; k < d.cols; ++k) d.at(n, k) = bin_membership_derivative(values[n], k, cfg);
    }
    return d;
}

}  // namespace

DenseMatrix soft_bin_probabilities(std::span<const double> values,
                                   const SoftBinningConfig& cfg) {
    check_domain(values, "soft_bin_probabilities");
    DenseMatrix p(static_cast<int>(values.size()), cfg.bins());
    for (int n = 0; n < p.rows; ++n) {
        for (int k = 0; k < p.cols; ++k) p.at(n, k) = bin_membership(values[n], k, cfg);
    }
    return p;
}

OffsetPair offset_pair(const PixelView& patch, const OffsetSpec& offset) {
    const Displacement disp = offset.displacement();
    const int r0 = std::max(0, -disp.drow);
    const int r1 = patch.height - std::max(0, disp.drow);
    const int c0 = std::max(0, -disp.dcol);
    const int c1 = patch.width - std::max(0, disp.dcol);
    if (r1 <= r0 || c1 <= c0) {
        throw GeometryError("offset_pair: " + std::to_string(patch.height) + "x" +
                            std::to_string(patch.width) + " patch has no pairs at offset " +
                            offset.label());
    }
    OffsetPair out;
    const std::size_t n = static_cast<std::size_t>(r1 - r0) * (c1 - c0);
    out.first.reserve(n);
    out.second.reserve(n);
    out.first_index.reserve(n);
    out.second_index.reserve(n);
    for (int r = r0; r < r1; ++r) {
        for (int c = c0; c < c1; ++c) {
            const int i = r * patch.width + c;
            const int j = (r + disp.drow) * patch.width + (c + disp.dcol);
            out.first.push_back(patch.pixels[i]);
            out.second.push_back(patch.pixels[j]);
            out.first_index.push_back(i);
            out.second_index.push_back(j);
        }
    }
    return out;
}

double SoftGlcm::mass() const { return std::accumulate(matrix.begin(), matrix.end(), 0.0); }

SoftGlcmEvaluation::SoftGlcmEvaluation(const PixelView& patch, const OffsetSpec& offset,
                                       const SoftBinningConfig& cfg)
    : height_(patch.height),
      width_(patch.width),
      pair_(offset_pair(patch, offset)),
      p1_(soft_bin_probabilities(pair_.first, cfg)),
      p2_(soft_bin_probabilities(pair_.second, cfg)),
      d1_(membership_derivatives(pair_.first, cfg)),
      d2_(membership_derivatives(pair_.second, cfg)),
      result_{{}, cfg, offset, static_cast<long>(pair_.size())} {
    const int k = cfg.bins();
    const int n = static_cast<int>(pair_.size());
    result_.matrix.assign(static_cast<std::size_t>(k) * k, 0.0);
    const double inv_n = 1.0 / n;
    double* g = result_.matrix.data();
    for (int row = 0; row < n; ++row) {
        const double* a = &p1_.data[static_cast<std::size_t>(row) * k];
        const double* b = &p2_.data[static_cast<std::size_t>(row) * k];
        for (int v = 0; v < k; ++v) {
            const double av = a[v];
            if (av == 0.0) continue;
            double* gv = g + static_cast<std::size_t>(v) * k;
            for (int w = 0; w < k; ++w) gv[w] += av * b[w];
        }
    }
    for (double& e : result_.matrix) e *= inv_n;
}

std::vector<double> SoftGlcmEvaluation::backward(std::span<const double> upstream) const {
    const int k = result_.config.bins();
    if (upstream.size() != static_cast<std::size_t>(k) * k) {
        throw ContractError("soft_glcm_backward: upstream has " +
                            std::to_string(upstream.size()) + " entries, expected " +
                            std::to_string(k) + "x" + std::to_string(k));
    }
    const int n = static_cast<int>(pair_.size());
    const double inv_n = 1.0 / n;
    std::vector<double> grad(static_cast<std::size_t>(height_) * width_, 0.0);
    std::vector<double> g1(k), g2(k);
    for (int row = 0; row < n; ++row) {
        const double* a = &p1_.data[static_cast<std::size_t>(row) * k];
        const double* b = &p2_.data[static_cast<std::size_t>(row) * k];
        // g1 = U b (d/dP1 row), g2 = U^T a (d/dP2 row)
        std::fill(g2.begin(), g2.end(), 0.0);
        for (int v = 0; v < k; ++v) {
            const double* u = &upstream[static_cast<std::size_t>(v) * k];
            double s = 0.0;
            for (int w = 0; w < k; ++w) s += u[w] * b[w];
            g1[v] = s;
            const double av = a[v];
            if (av != 0.0) {
                for (int w = 0; w < k; ++w) g2[w] += av * u[w];
            }
        }
        const double* da = &d1_.data[static_cast<std::size_t>(row) * k];
        const double* db = &d2_.data[static_cast<std::size_t>(row) * k];
        double t1 = 0.0, t2 = 0.0;
        for (int v = 0; v < k; ++v) {
            t1 += g1[v] * da[v];
            t2 += g2[v] * db[v];
        }
        grad[pair_.first_index[row]] += inv_n * t1;
        grad[pair_.second_index[row]] += inv_n * t2;
    }
    return grad;
}

SoftGlcm soft_glcm_forward(const PixelView& patch, const OffsetSpec& offset,
                           const SoftBinningConfig& cfg) {
    return SoftGlcmEvaluation(patch, offset, cfg).result();
}

std::vector<double> soft_glcm_backward(const PixelView& patch, const OffsetSpec& offset,
                                       const SoftBinningConfig& cfg,
                                       std::span<const double> upstream) {
    return SoftGlcmEvaluation(patch, offset, cfg).backward(upstream);
}

}  // namespace softglcm
