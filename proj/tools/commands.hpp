#pragma once

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace softglcm::tool {

inline constexpr const char* kToolVersion = "0.1.0";

namespace fs = std::filesystem;

struct GlcmOptions {
    std::string input;
    std::string offset = "h1";
    int levels = 8;
    bool normalize = false;
    bool symmetric = false;
};

struct SweepOptions {
    std::string input;
    std::string offset = "h1";
    int levels = 16;
    std::vector<double> bandwidths{5, 15, 30, 60, 120};
};

struct HaralickOptions {
    std::string input;  // image or directory
    std::vector<std::string> offsets{"h1", "v1"};
    int levels = 64;
    bool mean = false;
};

struct ReconstructOptions {
    std::string input;
    int patch_size = 16;
    std::string pad = "reject";  // reject | reflect
    double mask_ratio = 0.75;
    std::uint64_t seed = 0;
    int steps = 2000;
    /// Fixed weights for every step; the two-phase schedule when empty.
    std::optional<std::vector<double>> weights;
    int warmup_steps = 400;
    double step_size = 0.05;
    int bins = 64;
    double steepness = 30.0;
    std::vector<std::string> offsets{"h1", "v1"};
    std::string init = "visible-mean";  // visible-mean | noise | constant
    double init_value = 0.0;
    int haralick_levels = 64;
};

struct CompareOptions {
    std::string original;
    std::string a;
    std::string b;
    int levels = 64;
};

struct SynthOptions {
    std::string kind = "stripes";
    int height = 64;
    int width = 64;
    std::uint64_t seed = 0;
    int period = 2;
    int jitter = 12;
};

nlohmann::json to_json(const GlcmOptions& o);
nlohmann::json to_json(const SweepOptions& o);
nlohmann::json to_json(const HaralickOptions& o);
nlohmann::json to_json(const ReconstructOptions& o);
nlohmann::json to_json(const CompareOptions& o);
nlohmann::json to_json(const SynthOptions& o);

GlcmOptions glcm_options_from_json(const nlohmann::json& j);
SweepOptions sweep_options_from_json(const nlohmann::json& j);
HaralickOptions haralick_options_from_json(const nlohmann::json& j);
ReconstructOptions reconstruct_options_from_json(const nlohmann::json& j);
CompareOptions compare_options_from_json(const nlohmann::json& j);
SynthOptions synth_options_from_json(const nlohmann::json& j);

/// Hex SHA-256 of a file's bytes.
std::string file_digest(const fs::path& path);

/// {tool, version, command, config, inputs: [{path, sha256}], seeds}.
nlohmann::json make_manifest(const std::string& command, const nlohmann::json& config,
                             const std::vector<std::string>& inputs, const nlohmann::json& seeds);

/// Every command writes its artifacts to `out` (a file, or a directory for
/// reconstruct) and a manifest next to them. An empty `out` streams the
/// primary CSV to `log` without a manifest.
void run_glcm(const GlcmOptions& o, const fs::path& out, std::ostream& log);
void run_sweep(const SweepOptions& o, const fs::path& out, std::ostream& log);
/// Returns false when some inputs were skipped.
bool run_haralick(const HaralickOptions& o, const fs::path& out, std::ostream& log,
                  std::ostream& warn);
void run_reconstruct(const ReconstructOptions& o, const fs::path& out_dir, std::ostream& log);
void run_compare(const CompareOptions& o, const fs::path& out, std::ostream& log);
void run_synth(const SynthOptions& o, const fs::path& out);

/// Re-runs the command recorded in a manifest after checking input digests.
void replay(const nlohmann::json& manifest, const fs::path& out, std::ostream& log,
            std::ostream& warn);

/// Path of the manifest written alongside a single-file output.
fs::path manifest_path_for(const fs::path& out);

}  // namespace softglcm::tool
