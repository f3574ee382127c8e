#pragma once

#include <string>
#include <vector>

#include "fracfp/config.hpp"

namespace fracfp {

inline constexpr const char* kVersion = "0.1.0";

struct RunManifest {
    std::string config_echo;  // JSON echo of the effective configuration
    std::string version = kVersion;
    std::vector<std::pair<std::string, double>> timings_s;
    std::vector<std::pair<std::string, std::string>> outcomes;
    std::vector<std::string> warnings;
    struct FileEntry {
        std::string path;
        std::uint64_t bytes;
        std::uint64_t fnv1a64;
    };
    std::vector<FileEntry> files;
    bool failed = false;
    std::string failure;

    std::string to_json() const;
};

/// Execute the configured pipeline (validate -> evolve -> [gauge] -> [sde] ->
/// [superposition] -> [kernel tables]) under cfg.output_dir and write the
/// manifest atomically at the end. Stage errors are recorded; partial outputs
/// are preserved.
RunManifest run_scenario(const RunConfig& cfg);

/// Load the snapshot path written by an evolve stage (fields/index.csv plus
/// binary snapshots) back into memory.
SolutionPath load_run_path(const std::string& run_dir);

}  // namespace fracfp
