#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finegrain/json_io.hpp"

namespace fg {

inline constexpr const char* kToolVersion = "0.1.0";

/// A runnable configuration file. The mode decides which sub-specs must be
/// present; everything is validated up front so a bad file fails before any
/// output is written.
struct Scenario {
    enum class Mode { estimate, simulate, lindblad, lattice, measure };

    std::string id;
    Mode mode = Mode::estimate;
    json raw; ///< the parsed file, kept for replay
    std::filesystem::path source_path;

    std::uint64_t master_seed = 1;
    int trajectory_count = 1;
    double t_total = 1.0;
    double dt = 0.01;
    Units units = Units::si();

    static Scenario load(const std::filesystem::path& path);
    static Mode mode_from_string(const std::string& s);
    static std::string mode_to_string(Mode m);
};

/// Everything needed to reproduce a run byte for byte.
struct RunManifest {
    std::string scenario_id;
    std::string scenario_path;
    std::string tool_version = kToolVersion;
    std::string constants_version;
    std::string units_label;
    std::uint64_t master_seed = 1;
    std::vector<std::uint64_t> trajectory_seeds;
    std::string started;
    std::string finished;
    std::map<std::string, std::string> output_digests; ///< filename -> fnv1a hex

    json to_json() const;
    static RunManifest from_json(const json& j);
    static RunManifest load(const std::filesystem::path& path);
};

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    PhysicalConstants constants;
    int threads = 1;
};

/// Execute a scenario, write its outputs and manifest.json under out_dir.
RunManifest run_scenario(const std::filesystem::path& scenario_path, const RunOptions& opts);

struct ReplayResult {
    RunManifest manifest;
    bool digests_match = false;
    std::vector<std::string> mismatches;
};

/// Re-run the scenario recorded in a manifest with its recorded seed and
/// compare output digests.
ReplayResult replay(const std::filesystem::path& manifest_path, const RunOptions& opts);

/// FNV-1a 64-bit digest, rendered as hex.
std::string fnv1a_hex(const std::string& bytes);

} // namespace fg
