#include "doctest.h"

#include "oracles.hpp"
#include "softglcm/error.hpp"
#include "softglcm/recon.hpp"
#include "softglcm/textures.hpp"

#include <cmath>
#include <limits>
#include <sstream>

using namespace softglcm;

namespace {

ReconConfig small_config(int steps) {
    ReconConfig cfg;
    cfg.max_steps = steps;
    cfg.loss.binning = SoftBinningConfig(16, 15.0);
    cfg.haralick_levels = 16;
    return cfg;
}

}  // namespace

TEST_CASE("init equal to target returns immediately with zero loss") {
    Rng rng(1);
    const std::vector<PatchRef> targets{oracle::make_patch(8, oracle::random_pixels(rng, 64))};
    auto cfg = small_config(50);
    cfg.schedule = fixed_schedule({0.1, 1, 1});
    // Visible context equal to the target makes the visible-mean init exact
    // only for constants, so use a constant target here.
    const std::vector<PatchRef> flat{oracle::make_patch(8, std::vector<double>(64, 0.3))};
    cfg.init = ReconInit::constant(0.3);
    const auto r = reconstruct_patches(flat, cfg);
    REQUIRE(r.trace.steps.size() == 1);
    CHECK(r.trace.steps[0].total == 0.0);
    CHECK(r.patches[0].pixels == flat[0].pixels);
}

TEST_CASE("MSE-only descent reaches a constant target") {
    const std::vector<PatchRef> targets{oracle::make_patch(4, std::vector<double>(16, 0.4))};
    ReconConfig cfg = small_config(2000);
    cfg.schedule = fixed_schedule({1, 0, 0});
    cfg.init = ReconInit::noise(11);
    const auto r = reconstruct_patches(targets, cfg);
    double mse = 0.0;
    for (std::size_t i = 0; i < 16; ++i) mse += std::pow(r.patches[0].pixels[i] - 0.4, 2) / 16;
    CHECK(mse < 1e-6);

    // Pure MSE descent with a step this small never increases the loss.
    for (std::size_t i = 1; i < r.trace.steps.size(); ++i) {
        CHECK(r.trace.steps[i].total <= r.trace.steps[i - 1].total + 1e-15);
    }
}

TEST_CASE("reconstruction stays inside the intensity range") {
    Rng rng(2);
    const std::vector<PatchRef> targets{oracle::make_patch(8, oracle::random_pixels(rng, 64, 1.0))};
    ReconConfig cfg = small_config(30);
    cfg.step_size = 5.0;
    cfg.schedule = fixed_schedule({1, 1, 1});
    cfg.init = ReconInit::noise(3);
    const auto r = reconstruct_patches(targets, cfg);
    for (double v : r.patches[0].pixels) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }
    CHECK(r.trace.steps.size() == 30);
}

TEST_CASE("full loss running minimum drops substantially on a texture") {
    const auto img = synth_texture(TextureKind::Stripes, 16, 16, 5);
    const auto set = extract_patches(img, 16, PadPolicy::Reject);
    ReconConfig cfg = small_config(300);
    cfg.schedule = PhaseSchedule{50};
    cfg.init = ReconInit::noise(4);
    const auto r = reconstruct_patches(set.patches, cfg);
    double first_main = std::numeric_limits<double>::infinity(), best = first_main;
    for (const auto& s : r.trace.steps) {
        if (s.step < 50) continue;
        if (s.step == 50) first_main = s.total;
        best = std::min(best, s.total);
    }
    CHECK(best < first_main);
    CHECK(r.trace.steps.front().components.mse.has_value());
    CHECK_FALSE(r.trace.steps.front().components.glcm.has_value());
    CHECK(r.trace.steps.back().components.glcm.has_value());
}

TEST_CASE("trace CSV and summary") {
    const std::vector<PatchRef> targets{oracle::make_patch(4, std::vector<double>(16, 0.1))};
    ReconConfig cfg = small_config(3);
    cfg.schedule = PhaseSchedule{2};
    cfg.init = ReconInit::constant(-0.5);
    const auto r = reconstruct_patches(targets, cfg);
    std::ostringstream os;
    write_trace_csv(os, r.trace);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "step,alpha,beta,gamma,total,mse,glcm,ssim");
    std::getline(is, line);
    CHECK(line.rfind("0,1,0,0,", 0) == 0);
    CHECK(line.substr(line.size() - 2) == ",,");
    int rows = 1;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 3);
    const auto j = trace_summary(r.trace);
    CHECK(j.at("steps") == 3);
    CHECK(j.at("haralick").size() == 12);
}

TEST_CASE("invalid configurations are rejected") {
    const std::vector<PatchRef> targets{oracle::make_patch(4, std::vector<double>(16, 0.1))};
    ReconConfig cfg = small_config(3);
    cfg.step_size = -1.0;
    CHECK_THROWS_AS(reconstruct_patches(targets, cfg), ContractError);
    cfg = small_config(3);
    cfg.step_size = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(reconstruct_patches(targets, cfg), ContractError);
    cfg = small_config(3);
    CHECK_THROWS_AS(reconstruct_patches(std::vector<PatchRef>{}, cfg), ContractError);
}

TEST_CASE("non-finite loss raises NumericalError with the step") {
    const std::vector<PatchRef> targets{oracle::make_patch(4, std::vector<double>(16, 0.1))};
    ReconConfig cfg = small_config(3);
    cfg.init = ReconInit::constant(-0.5);
    cfg.schedule = fixed_schedule({std::numeric_limits<double>::max(), 0, 0});
    try {
        auto huge = cfg;
        huge.step_size = std::numeric_limits<double>::max();
        reconstruct_patches(targets, huge);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.step() >= 0);
    } catch (const ContractError&) {
        // Weights this large may already be rejected up front.
    }
}

TEST_CASE("gaussian blur") {
    Rng rng(6);
    const auto px = oracle::random_pixels(rng, 100);
    const PixelView v{10, 10, px};
    const auto tiny = gaussian_blur(v, 1e-3);
    for (std::size_t i = 0; i < px.size(); ++i) CHECK(tiny[i] == doctest::Approx(px[i]).epsilon(1e-9));
    const std::vector<double> flat(100, 0.25);
    for (double x : gaussian_blur(PixelView{10, 10, flat}, 2.0)) CHECK(x == doctest::Approx(0.25));
}

TEST_CASE("blur probe: zero at sigma -> 0, and growing with sigma") {
    const auto img = synth_texture(TextureKind::Checkerboard, 16, 16, 3);
    const auto patch = extract_patches(img, 16, PadPolicy::Reject).patches[0];
    LossConfig lc;
    lc.binning = SoftBinningConfig(16, 30.0);
    const auto none = blur_probe(patch, 1e-3, lc);
    CHECK(*none.mse < 1e-12);
    CHECK(*none.glcm < 1e-9);
    CHECK(*none.ssim < 1e-9);
    const auto soft = blur_probe(patch, 0.5, lc);
    const auto heavy = blur_probe(patch, 1.5, lc);
    CHECK(*heavy.glcm > *soft.glcm);
    CHECK(*heavy.ssim > *soft.ssim);

    const PatchRef constant = oracle::make_patch(16, std::vector<double>(256, -0.2));
    const auto c = blur_probe(constant, 1.0, lc);
    CHECK(*c.mse == doctest::Approx(0.0));
    CHECK(*c.glcm == doctest::Approx(0.0));
}
