#include "doctest.h"

#include "oracles.hpp"
#include "softglcm/error.hpp"
#include "softglcm/glcm_exact.hpp"
#include "softglcm/glcm_soft.hpp"
#include "softglcm/textures.hpp"

#include <cmath>

using namespace softglcm;

TEST_CASE("bin layout tiles [-1, 1]") {
    for (int k : {2, 4, 16, 64, 256}) {
        const SoftBinningConfig cfg(k, 30.0);
        CHECK(cfg.center(0) - cfg.bin_length() / 2 == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(cfg.center(k - 1) + cfg.bin_length() / 2 == doctest::Approx(1.0).epsilon(1e-15));
        for (int b = 0; b + 1 < k; ++b) CHECK(cfg.center(b) < cfg.center(b + 1));
        for (int b = 0; b < k; ++b)
            CHECK(cfg.center(b) == doctest::Approx(-cfg.center(k - 1 - b)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(SoftBinningConfig(1, 30.0), ContractError);
    CHECK_THROWS_AS(SoftBinningConfig(8, 0.0), ContractError);
}

TEST_CASE("membership closed form at a bin centre") {
    const SoftBinningConfig cfg(4, 30.0);
    const double expected = 2.0 * oracle::naive_sigmoid(7.5) - 1.0;
    CHECK(expected == doctest::Approx(0.99889).epsilon(1e-5));
    const double t = cfg.center(1);
    CHECK(bin_membership(t, 1, cfg) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("a bin centre becomes an indicator for large steepness") {
    const SoftBinningConfig cfg(8, 5000.0);
    const auto p = soft_bin_probabilities(std::vector<double>{cfg.center(3)}, cfg);
    for (int k = 0; k < 8; ++k) CHECK(p.at(0, k) == doctest::Approx(k == 3 ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("boundary value splits equally between neighbouring bins") {
    const SoftBinningConfig cfg(8, 30.0);
    const double edge = cfg.center(2) + cfg.bin_length() / 2;
    CHECK(bin_membership(edge, 2, cfg) == doctest::Approx(bin_membership(edge, 3, cfg)).epsilon(1e-12));
}

TEST_CASE("memberships stay in [0, 1], rows sum to at most 1, no NaN up to W = 1e4") {
    Rng rng(1);
    for (double w : {0.5, 5.0, 30.0, 1000.0, 1e4}) {
        for (int k : {2, 16, 64}) {
            const SoftBinningConfig cfg(k, w);
            auto vals = oracle::random_pixels(rng, 50, 1.0);
            vals.push_back(-1.0);
            vals.push_back(1.0);
            const auto p = soft_bin_probabilities(vals, cfg);
            for (int n = 0; n < p.rows; ++n) {
                double s = 0.0;
                for (int b = 0; b < k; ++b) {
                    const double e = p.at(n, b);
                    CHECK(std::isfinite(e));
                    CHECK(e >= 0.0);
                    CHECK(e <= 1.0);
                    CHECK(std::isfinite(bin_membership_derivative(vals[n], b, cfg)));
                    s += e;
                }
                CHECK(s <= 1.0 + 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(soft_bin_probabilities(std::vector<double>{1.01}, SoftBinningConfig(4, 5)),
                    InputDomainError);
}

TEST_CASE("offset_pair shapes and order") {
    const std::vector<double> px{0.1, 0.2, 0.3, 0.4};  // [[a, b], [c, d]]
    const auto h = offset_pair(PixelView{2, 2, px}, OffsetSpec::horizontal(1));
    CHECK(h.first == std::vector<double>{0.1, 0.3});
    CHECK(h.second == std::vector<double>{0.2, 0.4});
    const auto v = offset_pair(PixelView{2, 2, px}, OffsetSpec::vertical(1));
    CHECK(v.first == std::vector<double>{0.1, 0.2});
    CHECK(v.second == std::vector<double>{0.3, 0.4});
    const std::vector<double> big(256, 0.0);
    CHECK(offset_pair(PixelView{16, 16, big}, OffsetSpec::horizontal(1)).size() == 240);
    CHECK_THROWS_AS(offset_pair(PixelView{2, 2, px}, OffsetSpec::horizontal(2)), GeometryError);
}

TEST_CASE("forward pass equals the direct formula") {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const int h = 2 + static_cast<int>(uniform_below(rng, 7));
        const int w = 2 + static_cast<int>(uniform_below(rng, 7));
        const int k = 2 + static_cast<int>(uniform_below(rng, 15));
        const double steep = 1.0 + 60.0 * uniform_unit(rng);
        const auto px = oracle::random_pixels(rng, static_cast<std::size_t>(h * w));
        const SoftBinningConfig cfg(k, steep);
        const auto hm = soft_glcm_forward(PixelView{h, w, px}, OffsetSpec::horizontal(1), cfg);
        const auto vm = soft_glcm_forward(PixelView{h, w, px}, OffsetSpec::vertical(1), cfg);
        const auto ho = oracle::direct_soft_glcm(px, h, w, 0, 1, k, steep);
        const auto vo = oracle::direct_soft_glcm(px, h, w, 1, 0, k, steep);
        CHECK(hm.pair_count == h * (w - 1));
        for (std::size_t e = 0; e < ho.size(); ++e) {
            CHECK(hm.matrix[e] == doctest::Approx(ho[e]).epsilon(1e-10));
            CHECK(vm.matrix[e] == doctest::Approx(vo[e]).epsilon(1e-10));
        }
    }
}

TEST_CASE("constant patch at a bin centre concentrates at (j, j)") {
    const SoftBinningConfig cfg(8, 2000.0);
    const std::vector<double> px(36, cfg.center(5));
    const auto g = soft_glcm_forward(PixelView{6, 6, px}, OffsetSpec::horizontal(1), cfg);
    CHECK(g.at(5, 5) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(g.mass() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("mass bounds") {
    Rng rng(3);
    const IntensityConvention conv(256);
    double mean15 = 0.0, mean30 = 0.0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<double> px(64);
        for (auto& v : px) v = conv.to_normalized(static_cast<std::uint32_t>(uniform_below(rng, 256)));
        for (int k : {8, 16, 64}) {
            for (double w : {15.0, 30.0, 120.0}) {
                const auto g = soft_glcm_forward(PixelView{8, 8, px}, OffsetSpec::horizontal(1),
                                                 SoftBinningConfig(k, w));
                CHECK(g.mass() <= 1.0 + 1e-12);
                if (w >= 120.0) CHECK(g.mass() > 0.9);
                if (w == 15.0 && k == 64) mean15 += g.mass() / trials;
                if (w == 30.0 && k == 64) mean30 += g.mass() / trials;
            }
            const auto soft = soft_glcm_forward(PixelView{8, 8, px}, OffsetSpec::horizontal(1),
                                                SoftBinningConfig(k, 0.1));
            CHECK(soft.mass() > 0.0);
        }
    }
    // Uniform 8-bit noise puts many pixels near +-1, where each pixel keeps
    // only part of its membership at moderate W; the bound holds on average.
    CHECK(mean15 > 0.9);
    CHECK(mean30 > 0.9);
    for (auto kind : {TextureKind::Stripes, TextureKind::Checkerboard, TextureKind::FilteredNoise}) {
        const auto img = synth_texture(kind, 8, 8, 17);
        const auto g = soft_glcm_forward(img.view(), OffsetSpec::horizontal(1), SoftBinningConfig(64, 15.0));
        CHECK(g.mass() > 0.9);
        CHECK(g.mass() <= 1.0);
    }
}

TEST_CASE("sharper kernels move closer to the exact GLCM") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto px = oracle::random_pixels(rng, 64, 1.0);
        const PixelView view{8, 8, px};
        const auto exact = normalize_glcm(exact_glcm(view, OffsetSpec::horizontal(1), 16));
        auto dist = [&](double w) {
            return frobenius_distance(
                soft_glcm_forward(view, OffsetSpec::horizontal(1), SoftBinningConfig(16, w)).matrix,
                exact.entries);
        };
        CHECK(dist(30.0) < dist(5.0));
        double prev = dist(5.0);
        for (double w : {15.0, 30.0, 60.0, 120.0}) {
            const double d = dist(w);
            CHECK(d <= prev);
            prev = d;
        }
    }
}

TEST_CASE("backward: zero upstream, contract error on shape") {
    Rng rng(5);
    const auto px = oracle::random_pixels(rng, 25);
    const SoftBinningConfig cfg(4, 15.0);
    const auto g = soft_glcm_backward(PixelView{5, 5, px}, OffsetSpec::horizontal(1), cfg,
                                      std::vector<double>(16, 0.0));
    CHECK(g == std::vector<double>(25, 0.0));
    CHECK_THROWS_AS(soft_glcm_backward(PixelView{5, 5, px}, OffsetSpec::horizontal(1), cfg,
                                       std::vector<double>(9, 0.0)),
                    ContractError);
}

TEST_CASE("backward: constant patch with symmetric upstream is uniform over equal-multiplicity pixels") {
    const SoftBinningConfig cfg(6, 15.0);
    const std::vector<double> px(36, 0.2);
    std::vector<double> up(36);
    for (int v = 0; v < 6; ++v)
        for (int w = 0; w < 6; ++w) up[v * 6 + w] = 1.0 / (1 + v + w);
    const auto g = soft_glcm_backward(PixelView{6, 6, px}, OffsetSpec::horizontal(1), cfg, up);
    // Interior columns take part in two pairs; they all share one value.
    for (int r = 0; r < 6; ++r)
        for (int c = 1; c < 5; ++c) CHECK(g[r * 6 + c] == doctest::Approx(g[7]).epsilon(1e-12));
}

TEST_CASE("backward matches central differences on a 6x6 patch, K=8, W=15") {
    Rng rng(6);
    const SoftBinningConfig cfg(8, 15.0);
    const auto px = oracle::random_pixels(rng, 36);
    for (const auto& off : {OffsetSpec::horizontal(1), OffsetSpec::vertical(1)}) {
        auto f = [&](const std::vector<double>& x) {
            const auto m = soft_glcm_forward(PixelView{6, 6, x}, off, cfg).matrix;
            double s = 0.0;
            for (double e : m) s += e * e;
            return 0.5 * s;
        };
        const auto m = soft_glcm_forward(PixelView{6, 6, px}, off, cfg).matrix;
        const auto analytic = soft_glcm_backward(PixelView{6, 6, px}, off, cfg, m);
        CHECK(oracle::max_scaled_error(analytic, oracle::central_difference(f, px, 1e-4)) < 1e-5);
        const auto fine = oracle::central_difference(f, px, 1e-5);
        double gmax = 0.0;
        for (double v : fine) gmax = std::max(gmax, std::abs(v));
        CHECK(oracle::max_relative_error(analytic, fine, 1e-3 * gmax) < 1e-5);
    }
}

TEST_CASE("backward matches central differences on 100 random patch, K, W triples") {
    Rng rng(21);
    const int sizes[] = {4, 6, 8};
    const int bins[] = {4, 8, 16, 32};
    const double steep[] = {5.0, 15.0, 30.0, 60.0, 120.0};
    for (int trial = 0; trial < 100; ++trial) {
        const int p = sizes[uniform_below(rng, 3)];
        const SoftBinningConfig cfg(bins[uniform_below(rng, 4)], steep[uniform_below(rng, 5)]);
        const OffsetSpec off = uniform_below(rng, 2) ? OffsetSpec::horizontal(1) : OffsetSpec::vertical(1);
        const auto px = oracle::random_pixels(rng, static_cast<std::size_t>(p * p));
        auto f = [&](const std::vector<double>& x) {
            double s = 0.0;
            for (double e : soft_glcm_forward(PixelView{p, p, x}, off, cfg).matrix) s += e * e;
            return 0.5 * s;
        };
        const auto m = soft_glcm_forward(PixelView{p, p, px}, off, cfg).matrix;
        const auto analytic = soft_glcm_backward(PixelView{p, p, px}, off, cfg, m);
        const auto numeric = oracle::central_difference(f, px, 3e-4 / cfg.steepness());
        double gmax = 0.0;
        for (double v : numeric) gmax = std::max(gmax, std::abs(v));
        CAPTURE(trial);
        CHECK(oracle::max_relative_error(analytic, numeric, 1e-3 * gmax) < 1e-5);
    }
}
