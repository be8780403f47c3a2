#pragma once

#include "softglcm/core.hpp"

#include <span>
#include <vector>

namespace softglcm {

/// Row-major dense real matrix.
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
};

/// Uniform soft bins over [-1, 1]: K bins of length L = 2/K centred at
/// mu_k = -1 + (k + 1/2) L, with sigmoid edges of steepness W.
///
/// Steepness multiplies the sigmoid argument, so larger W gives sharper bins
/// and the soft histogram approaches hard binning as W grows.
class SoftBinningConfig {
public:
    SoftBinningConfig(int bins, double steepness);

    int bins() const { return bins_; }
    double steepness() const { return steepness_; }
    double bin_length() const { return 2.0 / bins_; }
    double center(int k) const { return -1.0 + (k + 0.5) * bin_length(); }

    bool operator==(const SoftBinningConfig&) const = default;

private:
    int bins_;
    double steepness_;
};

/// Logistic function, evaluated without overflow for any finite argument.
double stable_sigmoid(double z);
/// sigma'(z) = sigma(z) sigma(-z).
double sigmoid_slope(double z);

/// Membership of intensity t in bin k:
/// sigma(W (t - mu_k + L/2)) - sigma(W (t - mu_k - L/2)).
double bin_membership(double t, int k, const SoftBinningConfig& cfg);
/// d membership / d t.
double bin_membership_derivative(double t, int k, const SoftBinningConfig& cfg);

/// N x K membership matrix for a sequence of intensities in [-1, 1].
DenseMatrix soft_bin_probabilities(std::span<const double> values, const SoftBinningConfig& cfg);

/// The two shifted copies of a patch whose elementwise pairs are the
/// co-occurring pixels. Indices address the source patch, row-major.
struct OffsetPair {
    std::vector<double> first;
    std::vector<double> second;
    std::vector<int> first_index;
    std::vector<int> second_index;

    std::size_t size() const { return first.size(); }
};

/// For Horizontal0 d=1, `first` drops the last column and `second` drops the
/// first column; Vertical90 does the same with rows.
OffsetPair offset_pair(const PixelView& patch, const OffsetSpec& offset);

struct SoftGlcm {
    std::vector<double> matrix;  // K x K, row-major
    SoftBinningConfig config;
    OffsetSpec offset;
    long pair_count = 0;

    int bins() const { return config.bins(); }
    double at(int v, int w) const {
        return matrix[static_cast<std::size_t>(v) * config.bins() + w];
    }
    double mass() const;
};

/// Forward pass that retains memberships and their derivatives so the
/// gradient can be evaluated without recomputing the binning.
class SoftGlcmEvaluation {
public:
    SoftGlcmEvaluation(const PixelView& patch, const OffsetSpec& offset,
                       const SoftBinningConfig& cfg);

    const SoftGlcm& result() const { return result_; }

    /// Gradient with respect to patch pixels (H x W, row-major) given the
    /// K x K gradient of a scalar loss with respect to the matrix.
    std::vector<double> backward(std::span<const double> upstream) const;

private:
    int height_;
    int width_;
    OffsetPair pair_;
    DenseMatrix p1_, p2_, d1_, d2_;
    SoftGlcm result_;
};

/// H = (1/N) P1^T P2 with N the number of pixel pairs.
SoftGlcm soft_glcm_forward(const PixelView& patch, const OffsetSpec& offset,
                           const SoftBinningConfig& cfg);

std::vector<double> soft_glcm_backward(const PixelView& patch, const OffsetSpec& offset,
                                       const SoftBinningConfig& cfg,
                                       std::span<const double> upstream);

}  // namespace softglcm
