#include "commands.hpp"

#include "softglcm/error.hpp"
#include "softglcm/glcm_exact.hpp"
#include "softglcm/glcm_soft.hpp"
#include "softglcm/haralick.hpp"
#include "softglcm/imageio.hpp"
#include "softglcm/masking.hpp"
#include "softglcm/parallel.hpp"
#include "softglcm/recon.hpp"
#include "softglcm/textures.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

namespace softglcm::tool {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

template <typename T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw FormatError(std::string("config: missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("config: bad field '") + key + "': " + e.what());
    }
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void write_json(const fs::path& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

std::vector<OffsetSpec> parse_offsets(const std::vector<std::string>& labels) {
    if (labels.empty()) throw ContractError("at least one offset is required");
    std::vector<OffsetSpec> out;
    for (const auto& l : labels) out.push_back(OffsetSpec::parse(l));
    return out;
}

void write_matrix_csv(std::ostream& out, int bins, const std::vector<double>& entries) {
    out << "bin";
    for (int w = 0; w < bins; ++w) out << ',' << w;
    out << '\n';
    for (int v = 0; v < bins; ++v) {
        out << v;
        for (int w = 0; w < bins; ++w) out << ',' << fmt(entries[static_cast<std::size_t>(v * bins + w)]);
        out << '\n';
    }
}

HaralickVector image_features(const GrayImage& img, const std::vector<OffsetSpec>& offsets,
                              int levels) {
    const PixelView views[] = {img.view()};
    return haralick_features(pooled_glcm(views, offsets, levels));
}

void write_feature_header(std::ostream& out, const char* first) {
    out << first;
    for (auto name : haralick_feature_names()) out << ',' << name;
    out << '\n';
}

void write_feature_row(std::ostream& out, const std::string& label, const HaralickVector& f) {
    out << label;
    for (double v : f.values()) out << ',' << fmt(v);
    out << '\n';
}

bool is_image_path(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".pgm" || ext == ".pnm" || ext == ".png";
}

PadPolicy parse_pad(const std::string& s) {
    if (s == "reject") return PadPolicy::Reject;
    if (s == "reflect") return PadPolicy::ReflectPad;
    throw ContractError("unknown pad policy '" + s + "' (expected reject or reflect)");
}

void write_manifest(const fs::path& path, const std::string& command, const json& config,
                    const std::vector<std::string>& inputs, const json& seeds = json::object()) {
    write_json(path, make_manifest(command, config, inputs, seeds));
}

}  // namespace

// ---- option serialization ----

json to_json(const GlcmOptions& o) {
    return {{"input", o.input}, {"offset", o.offset}, {"levels", o.levels},
            {"normalize", o.normalize}, {"symmetric", o.symmetric}};
}

json to_json(const SweepOptions& o) {
    return {{"input", o.input}, {"offset", o.offset}, {"levels", o.levels}, {"bandwidths", o.bandwidths}};
}

json to_json(const HaralickOptions& o) {
    return {{"input", o.input}, {"offsets", o.offsets}, {"levels", o.levels}, {"mean", o.mean}};
}

json to_json(const ReconstructOptions& o) {
    return {{"input", o.input},
            {"patch_size", o.patch_size},
            {"pad", o.pad},
            {"mask_ratio", o.mask_ratio},
            {"seed", o.seed},
            {"steps", o.steps},
            {"weights", o.weights ? json(*o.weights) : json(nullptr)},
            {"warmup_steps", o.warmup_steps},
            {"step_size", o.step_size},
            {"bins", o.bins},
            {"steepness", o.steepness},
            {"offsets", o.offsets},
            {"init", o.init},
            {"init_value", o.init_value},
            {"haralick_levels", o.haralick_levels}};
}

json to_json(const CompareOptions& o) {
    return {{"original", o.original}, {"a", o.a}, {"b", o.b}, {"levels", o.levels}};
}

json to_json(const SynthOptions& o) {
    return {{"kind", o.kind}, {"height", o.height}, {"width", o.width},
            {"seed", o.seed}, {"period", o.period}, {"jitter", o.jitter}};
}

GlcmOptions glcm_options_from_json(const json& j) {
    GlcmOptions o;
    o.input = field<std::string>(j, "input");
    o.offset = field<std::string>(j, "offset");
    o.levels = field<int>(j, "levels");
    o.normalize = field<bool>(j, "normalize");
    o.symmetric = field<bool>(j, "symmetric");
    return o;
}

SweepOptions sweep_options_from_json(const json& j) {
    SweepOptions o;
    o.input = field<std::string>(j, "input");
    o.offset = field<std::string>(j, "offset");
    o.levels = field<int>(j, "levels");
    o.bandwidths = field<std::vector<double>>(j, "bandwidths");
    return o;
}

HaralickOptions haralick_options_from_json(const json& j) {
    HaralickOptions o;
    o.input = field<std::string>(j, "input");
    o.offsets = field<std::vector<std::string>>(j, "offsets");
    o.levels = field<int>(j, "levels");
    o.mean = field<bool>(j, "mean");
    return o;
}

ReconstructOptions reconstruct_options_from_json(const json& j) {
    ReconstructOptions o;
    o.input = field<std::string>(j, "input");
    o.patch_size = field<int>(j, "patch_size");
    o.pad = field<std::string>(j, "pad");
    o.mask_ratio = field<double>(j, "mask_ratio");
    o.seed = field<std::uint64_t>(j, "seed");
    o.steps = field<int>(j, "steps");
    if (!j.contains("weights")) throw FormatError("config: missing field 'weights'");
    if (!j.at("weights").is_null()) o.weights = field<std::vector<double>>(j, "weights");
    o.warmup_steps = field<int>(j, "warmup_steps");
    o.step_size = field<double>(j, "step_size");
    o.bins = field<int>(j, "bins");
    o.steepness = field<double>(j, "steepness");
    o.offsets = field<std::vector<std::string>>(j, "offsets");
    o.init = field<std::string>(j, "init");
    o.init_value = field<double>(j, "init_value");
    o.haralick_levels = field<int>(j, "haralick_levels");
    return o;
}

CompareOptions compare_options_from_json(const json& j) {
    CompareOptions o;
    o.original = field<std::string>(j, "original");
    o.a = field<std::string>(j, "a");
    o.b = field<std::string>(j, "b");
    o.levels = field<int>(j, "levels");
    return o;
}

SynthOptions synth_options_from_json(const json& j) {
    SynthOptions o;
    o.kind = field<std::string>(j, "kind");
    o.height = field<int>(j, "height");
    o.width = field<int>(j, "width");
    o.seed = field<std::uint64_t>(j, "seed");
    o.period = field<int>(j, "period");
    o.jitter = field<int>(j, "jitter");
    return o;
}

// ---- manifests ----

std::string file_digest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw Error("sha256: digest initialisation failed");
    }
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    char byte[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(byte, sizeof byte, "%02x", md[i]);
        hex += byte;
    }
    return hex;
}

json make_manifest(const std::string& command, const json& config,
                   const std::vector<std::string>& inputs, const json& seeds) {
    json files = json::array();
    for (const auto& p : inputs) files.push_back({{"path", p}, {"sha256", file_digest(p)}});
    return {{"tool", "softglcm"}, {"version", kToolVersion}, {"command", command},
            {"config", config},   {"inputs", files},          {"seeds", seeds}};
}

fs::path manifest_path_for(const fs::path& out) {
    fs::path p = out;
    p += ".manifest.json";
    return p;
}

// ---- commands ----

void run_glcm(const GlcmOptions& o, const fs::path& out, std::ostream& log) {
    const GrayImage img = load_gray(o.input);
    CooccurrenceMatrix m = exact_glcm(img.view(), OffsetSpec::parse(o.offset), o.levels);
    if (o.symmetric) m = symmetrize_glcm(m);
    if (o.normalize) m = normalize_glcm(m);
    if (out.empty()) {
        write_matrix_csv(log, m.bins, m.entries);
        return;
    }
    auto f = open_out(out);
    write_matrix_csv(f, m.bins, m.entries);
    write_manifest(manifest_path_for(out), "glcm", to_json(o), {o.input});
}

void run_sweep(const SweepOptions& o, const fs::path& out, std::ostream& log) {
    if (o.bandwidths.empty()) throw ContractError("sweep: bandwidth list is empty");
    for (double w : o.bandwidths) {
        if (!(w > 0.0)) throw ContractError("sweep: bandwidths must be positive, got " + fmt(w));
    }
    const GrayImage img = load_gray(o.input);
    const OffsetSpec offset = OffsetSpec::parse(o.offset);
    const auto exact = normalize_glcm(exact_glcm(img.view(), offset, o.levels));

    std::ostringstream table;
    table << "W,frobenius_distance,mass\n";
    for (double w : o.bandwidths) {
        const auto soft = soft_glcm_forward(img.view(), offset, SoftBinningConfig(o.levels, w));
        table << fmt(w) << ',' << fmt(frobenius_distance(soft.matrix, exact.entries)) << ','
              << fmt(soft.mass()) << '\n';
        if (!out.empty()) {
            const fs::path side = out.parent_path() / (out.stem().string() + "_W" + fmt(w) + ".csv");
            auto f = open_out(side);
            write_matrix_csv(f, o.levels, soft.matrix);
        }
    }
    if (out.empty()) {
        log << table.str();
        return;
    }
    open_out(out) << table.str();
    write_manifest(manifest_path_for(out), "sweep", to_json(o), {o.input});
}

bool run_haralick(const HaralickOptions& o, const fs::path& out, std::ostream& log,
                  std::ostream& warn) {
    const auto offsets = parse_offsets(o.offsets);
    std::vector<fs::path> files;
    const fs::path root(o.input);
    if (fs::is_directory(root)) {
        for (const auto& e : fs::directory_iterator(root)) {
            if (e.is_regular_file() && is_image_path(e.path())) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end(),
                  [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
        if (files.empty()) throw IoError("haralick: no images in " + root.string());
    } else {
        files.push_back(root);
    }

    struct Slot {
        std::optional<HaralickVector> features;
        std::string error;
    };
    std::vector<Slot> slots(files.size());
    parallel_for(files.size(), [&](std::size_t i) {
        try {
            slots[i].features = image_features(load_gray(files[i]), offsets, o.levels);
        } catch (const Error& e) {
            slots[i].error = e.what();
        }
    });

    std::ostringstream table;
    write_feature_header(table, "file");
    std::vector<std::string> read;
    std::array<double, kHaralickFeatureCount> sum{};
    bool complete = true;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (!slots[i].features) {
            warn << "warning: skipping " << files[i].string() << ": " << slots[i].error << '\n';
            complete = false;
            continue;
        }
        read.push_back(files[i].string());
        write_feature_row(table, files[i].filename().string(), *slots[i].features);
        const auto v = slots[i].features->values();
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += v[k];
    }
    if (read.empty()) throw IoError("haralick: no readable images in " + root.string());
    if (o.mean) {
        for (double& v : sum) v /= static_cast<double>(read.size());
        write_feature_row(table, "mean", HaralickVector::from_values(sum));
    }
    if (out.empty()) {
        log << table.str();
    } else {
        open_out(out) << table.str();
        write_manifest(manifest_path_for(out), "haralick", to_json(o), read);
    }
    return complete;
}

void run_reconstruct(const ReconstructOptions& o, const fs::path& out_dir, std::ostream& log) {
    if (out_dir.empty()) throw ContractError("reconstruct: an output directory is required");
    const DecodedImage decoded = decode_gray(o.input);
    const GrayImage img = normalize_image(decoded.raw, decoded.depth);
    const PatchSet set = extract_patches(img, o.patch_size, parse_pad(o.pad));
    const MaskPlan plan = make_mask(set.grid, o.mask_ratio, o.seed);
    const std::uint64_t init_seed = o.seed + 1;

    ReconConfig cfg;
    cfg.step_size = o.step_size;
    cfg.max_steps = o.steps;
    if (o.weights) {
        if (o.weights->size() != 3) throw ContractError("reconstruct: --weights needs three values");
        cfg.schedule = fixed_schedule({(*o.weights)[0], (*o.weights)[1], (*o.weights)[2]});
    } else {
        cfg.schedule.warmup_steps = o.warmup_steps;
    }
    cfg.loss.offsets = parse_offsets(o.offsets);
    cfg.loss.binning = SoftBinningConfig(o.bins, o.steepness);
    cfg.haralick_levels = o.haralick_levels;

    // The corrupted image is the optimizer's starting point.
    MaskFill fill;
    if (o.init == "visible-mean") {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& p : set.patches) {
            if (plan.is_masked(p.grid_row, p.grid_col)) continue;
            for (double v : p.pixels) sum += v;
            n += p.pixels.size();
        }
        fill = MaskFill::constant(sum / static_cast<double>(n));
        cfg.init = ReconInit::visible_mean();
    } else if (o.init == "noise") {
        fill = MaskFill::noise(init_seed);
        cfg.init = ReconInit::noise(init_seed);
    } else if (o.init == "constant") {
        fill = MaskFill::constant(o.init_value);
        cfg.init = ReconInit::constant(o.init_value);
    } else {
        throw ContractError("unknown init '" + o.init + "' (expected visible-mean, noise or constant)");
    }

    const MaskedImage masked = apply_mask(img, plan, fill);
    const ReconResult result = reconstruct_patches(masked.masked_targets, cfg, masked.visible);
    std::vector<PatchRef> all = masked.visible;
    all.insert(all.end(), result.patches.begin(), result.patches.end());
    const GrayImage recon = assemble_patches(all, plan.grid);

    fs::create_directories(out_dir);
    save_pgm(out_dir / "corrupted.pgm", masked.corrupted, decoded.depth);
    save_pgm(out_dir / "reconstruction.pgm", recon, decoded.depth);
    {
        auto f = open_out(out_dir / "trace.csv");
        write_trace_csv(f, result.trace);
    }
    {
        const auto fo = image_features(img, cfg.loss.offsets, o.haralick_levels);
        const auto fr = image_features(recon, cfg.loss.offsets, o.haralick_levels);
        const auto d = feature_distance(fr, fo);
        const auto names = haralick_feature_names();
        const auto vo = fo.values(), vr = fr.values();
        auto f = open_out(out_dir / "haralick.csv");
        f << "feature,original,reconstruction,absolute,relative\n";
        for (std::size_t i = 0; i < kHaralickFeatureCount; ++i) {
            f << names[i] << ',' << fmt(vo[i]) << ',' << fmt(vr[i]) << ',' << fmt(d.absolute[i]) << ','
              << fmt(d.relative[i]) << '\n';
        }
    }
    json summary = {{"grid", {{"rows", plan.grid.rows}, {"cols", plan.grid.cols},
                              {"patch_size", plan.grid.patch_size}}},
                    {"masked", plan.masked.size()},
                    {"mask", to_json(plan)},
                    {"trace", trace_summary(result.trace)}};
    write_json(out_dir / "summary.json", summary);
    write_manifest(out_dir / "manifest.json", "reconstruct", to_json(o), {o.input},
                   {{"mask", o.seed}, {"init", init_seed}});
    log << "reconstructed " << plan.masked.size() << " of " << plan.grid.patch_count()
        << " patches in " << result.trace.steps.size() << " steps\n";
}

void run_compare(const CompareOptions& o, const fs::path& out, std::ostream& log) {
    const GrayImage orig = load_gray(o.original);
    const GrayImage a = load_gray(o.a);
    const GrayImage b = load_gray(o.b);
    if (a.height() != orig.height() || a.width() != orig.width() || b.height() != orig.height() ||
        b.width() != orig.width()) {
        throw ContractError("compare: images differ in shape");
    }
    const auto offsets = default_offsets();
    const HaralickVector f[] = {image_features(orig, offsets, o.levels), image_features(a, offsets, o.levels),
                                image_features(b, offsets, o.levels)};
    const std::vector<long> h[] = {intensity_histogram(orig.pixels()), intensity_histogram(a.pixels()),
                                   intensity_histogram(b.pixels())};
    std::ostringstream table;
    table << "section,key,original,a,b\n";
    const auto names = haralick_feature_names();
    const std::array<double, kHaralickFeatureCount> v[] = {f[0].values(), f[1].values(), f[2].values()};
    for (std::size_t i = 0; i < kHaralickFeatureCount; ++i) {
        table << "haralick," << names[i] << ',' << fmt(v[0][i]) << ',' << fmt(v[1][i]) << ','
              << fmt(v[2][i]) << '\n';
    }
    for (std::size_t k = 0; k < h[0].size(); ++k) {
        table << "histogram," << k << ',' << h[0][k] << ',' << h[1][k] << ',' << h[2][k] << '\n';
    }
    table << "occupied_bins,all," << occupied_bins(h[0]) << ',' << occupied_bins(h[1]) << ','
          << occupied_bins(h[2]) << '\n';
    if (out.empty()) {
        log << table.str();
        return;
    }
    open_out(out) << table.str();
    write_manifest(manifest_path_for(out), "compare", to_json(o), {o.original, o.a, o.b});
}

void run_synth(const SynthOptions& o, const fs::path& out) {
    if (out.empty()) throw ContractError("synth: an output path is required");
    const GrayImage img =
        synth_texture(parse_texture_kind(o.kind), o.height, o.width, o.seed, o.period, o.jitter);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    save_pgm(out, img);
    write_manifest(manifest_path_for(out), "synth", to_json(o), {}, {{"texture", o.seed}});
}

void replay(const json& manifest, const fs::path& out, std::ostream& log, std::ostream& warn) {
    const auto command = field<std::string>(manifest, "command");
    const auto& config = manifest.contains("config") ? manifest.at("config") : json();
    if (manifest.contains("version") && manifest.at("version") != kToolVersion) {
        warn << "warning: manifest written by version " << manifest.at("version").dump() << '\n';
    }
    if (manifest.contains("inputs")) {
        for (const auto& in : manifest.at("inputs")) {
            const auto path = field<std::string>(in, "path");
            if (file_digest(path) != field<std::string>(in, "sha256")) {
                throw IoError("replay: " + path + " does not match its recorded digest");
            }
        }
    }
    if (command == "glcm") {
        run_glcm(glcm_options_from_json(config), out, log);
    } else if (command == "sweep") {
        run_sweep(sweep_options_from_json(config), out, log);
    } else if (command == "haralick") {
        run_haralick(haralick_options_from_json(config), out, log, warn);
    } else if (command == "reconstruct") {
        run_reconstruct(reconstruct_options_from_json(config), out, log);
    } else if (command == "compare") {
        run_compare(compare_options_from_json(config), out, log);
    } else if (command == "synth") {
        run_synth(synth_options_from_json(config), out);
    } else {
        throw FormatError("replay: unknown command '" + command + "'");
    }
}

}  // namespace softglcm::tool
