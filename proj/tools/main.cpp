#include "commands.hpp"

#include "softglcm/error.hpp"
#include "softglcm/parallel.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace tool = softglcm::tool;

int main(int argc, char** argv) {
    CLI::App app{"Differentiable GLCM texture statistics and texture-aware patch reconstruction"};
    app.set_version_flag("--version", tool::kToolVersion);
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: SOFTGLCM_THREADS or 1)")
        ->check(CLI::PositiveNumber);

    std::string out;

    tool::GlcmOptions glcm;
    auto* c_glcm = app.add_subcommand("glcm", "Exact GLCM of an image as a CSV matrix");
    c_glcm->add_option("input", glcm.input, "Input PGM/PNG")->required();
    c_glcm->add_option("--offset", glcm.offset, "Offset label: h<d>, v<d>, d45:<d>, d135:<d>")
        ->capture_default_str();
    c_glcm->add_option("--levels", glcm.levels, "Gray levels K")->capture_default_str();
    c_glcm->add_flag("--normalize", glcm.normalize, "Divide by the pair count");
    c_glcm->add_flag("--symmetric", glcm.symmetric, "Add the transpose");
    c_glcm->add_option("--out", out, "Output CSV (stdout when omitted)");

    tool::SweepOptions sweep;
    auto* c_sweep = app.add_subcommand("sweep", "Soft-GLCM distance to the exact GLCM across bandwidths");
    c_sweep->add_option("input", sweep.input, "Input PGM/PNG")->required();
    c_sweep->add_option("--bandwidths", sweep.bandwidths, "Comma-separated W values")
        ->delimiter(',')
        ->capture_default_str();
    c_sweep->add_option("--levels", sweep.levels, "Bins K")->capture_default_str();
    c_sweep->add_option("--offset", sweep.offset, "Offset label")->capture_default_str();
    c_sweep->add_option("--out", out, "Output CSV; soft matrices go next to it");

    tool::HaralickOptions har;
    auto* c_har = app.add_subcommand("haralick", "Haralick features per image");
    c_har->add_option("input", har.input, "Image or directory")->required();
    c_har->add_option("--offset", har.offsets, "Offsets pooled into one GLCM (repeatable)")
        ->delimiter(',')
        ->capture_default_str();
    c_har->add_option("--levels", har.levels, "Gray levels")->capture_default_str();
    c_har->add_flag("--mean", har.mean, "Append a mean row");
    c_har->add_option("--out", out, "Output CSV (stdout when omitted)");

    tool::ReconstructOptions rec;
    std::vector<double> weights;
    auto* c_rec = app.add_subcommand("reconstruct", "Mask patches and reconstruct them by gradient descent");
    c_rec->add_option("input", rec.input, "Input PGM/PNG")->required();
    c_rec->add_option("--patch-size", rec.patch_size, "Patch side")->capture_default_str();
    c_rec->add_option("--pad", rec.pad, "reject | reflect")->capture_default_str();
    c_rec->add_option("--mask-ratio", rec.mask_ratio, "Fraction of patches masked")->capture_default_str();
    c_rec->add_option("--seed", rec.seed, "Mask seed; noise init uses seed + 1")->capture_default_str();
    c_rec->add_option("--steps", rec.steps, "Gradient steps")->capture_default_str();
    auto* o_weights = c_rec->add_option("--weights", weights, "Fixed weights alpha,beta,gamma")
                          ->delimiter(',')
                          ->expected(3);
    c_rec->add_option("--schedule", rec.warmup_steps, "Warm-up steps of the two-phase schedule")
        ->capture_default_str()
        ->excludes(o_weights);
    c_rec->add_option("--step-size", rec.step_size, "Step size")->capture_default_str();
    c_rec->add_option("--bins", rec.bins, "Soft-GLCM bins")->capture_default_str();
    c_rec->add_option("--steepness", rec.steepness, "Soft-GLCM steepness W")->capture_default_str();
    c_rec->add_option("--offset", rec.offsets, "GLCM loss offsets")->delimiter(',')->capture_default_str();
    c_rec->add_option("--init", rec.init, "visible-mean | noise | constant")->capture_default_str();
    c_rec->add_option("--init-value", rec.init_value, "Value for constant init")->capture_default_str();
    c_rec->add_option("--haralick-levels", rec.haralick_levels, "Levels for the feature table")
        ->capture_default_str();
    c_rec->add_option("--out-dir", out, "Output directory")->required();

    tool::CompareOptions cmp;
    auto* c_cmp = app.add_subcommand("compare", "Haralick features and histograms of two reconstructions");
    c_cmp->add_option("original", cmp.original, "Original image")->required();
    c_cmp->add_option("a", cmp.a, "Reconstruction A")->required();
    c_cmp->add_option("b", cmp.b, "Reconstruction B")->required();
    c_cmp->add_option("--levels", cmp.levels, "Gray levels for the features")->capture_default_str();
    c_cmp->add_option("--out", out, "Output CSV (stdout when omitted)");

    tool::SynthOptions syn;
    auto* c_syn = app.add_subcommand("synth", "Write a seeded synthetic texture as PGM");
    c_syn->add_option("kind", syn.kind, "stripes | checkerboard | filtered-noise | noise | gradient")
        ->required();
    c_syn->add_option("--height", syn.height)->capture_default_str();
    c_syn->add_option("--width", syn.width)->capture_default_str();
    c_syn->add_option("--seed", syn.seed)->capture_default_str();
    c_syn->add_option("--period", syn.period, "Stripe or square period")->capture_default_str();
    c_syn->add_option("--jitter", syn.jitter, "Per-pixel noise amplitude in gray levels")
        ->capture_default_str();
    c_syn->add_option("--out", out, "Output PGM")->required();

    std::string manifest_path;
    auto* c_rep = app.add_subcommand("replay", "Re-run a command from its manifest");
    c_rep->add_option("manifest", manifest_path, "manifest.json")->required()->check(CLI::ExistingFile);
    c_rep->add_option("--out", out, "Output file or directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (threads > 0) softglcm::set_thread_count(threads);

    try {
        if (*c_glcm) {
            tool::run_glcm(glcm, out, std::cout);
        } else if (*c_sweep) {
            tool::run_sweep(sweep, out, std::cout);
        } else if (*c_har) {
            tool::run_haralick(har, out, std::cout, std::cerr);
        } else if (*c_rec) {
            if (*o_weights) rec.weights = weights;
            tool::run_reconstruct(rec, out, std::cout);
        } else if (*c_cmp) {
            tool::run_compare(cmp, out, std::cout);
        } else if (*c_syn) {
            tool::run_synth(syn, out);
        } else if (*c_rep) {
            std::ifstream in(manifest_path);
            nlohmann::json m;
            try {
                m = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw softglcm::FormatError(std::string("manifest: ") + e.what());
            }
            tool::replay(m, out, std::cout, std::cerr);
        }
    } catch (const softglcm::NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
