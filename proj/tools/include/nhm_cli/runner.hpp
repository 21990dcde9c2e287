#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nhm_cli/scenario.hpp"

namespace nhm::cli {

struct RunOptions {
    std::filesystem::path out_dir = ".";
    /// Worker threads for data-parallel sweeps; outputs do not depend on it.
    int threads = 1;
};

struct RunReport {
    std::filesystem::path directory;
    std::vector<std::string> files;  // written files, manifest.json last
    Json summary;
};

/// Executes the scenario and writes its artifacts to out_dir/<name>/:
/// data CSVs, summary.json and manifest.json (resolved configuration,
/// library version and SHA-256 of every other output).
RunReport run_scenario(const Scenario& scenario, const RunOptions& opts);

std::string sha256_hex(const std::string& bytes);

/// NHM_SCENARIO_DIR from the environment, else the bundled directory.
std::filesystem::path default_scenario_dir();

/// *.json files of a directory, sorted by file name.
std::vector<std::filesystem::path> list_scenario_files(const std::filesystem::path& dir);

}  // namespace nhm::cli
