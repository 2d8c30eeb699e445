#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "senseflow/experiments.hpp"
#include "senseflow/reports.hpp"

namespace senseflow {

struct AnalysisConfig {
    Duration t_win = 600.0;
    std::optional<Timestamp> from; // default: 0
    std::optional<Timestamp> to;   // default: scenario duration
    std::vector<GatewaySeq> targets;
    Duration dwell_bucket = 600.0;
};

/// Everything one end-to-end run needs; a manifest (plus its referenced
/// scenario) fully determines every output byte. Instead of a scenario, a
/// manifest may reference a pre-recorded capture (plus, optionally, its
/// ground-truth log) to replay through the agents.
struct RunManifest {
    std::filesystem::path scenario_path;          // empty when capture-driven
    std::optional<std::filesystem::path> capture; // skip simulation, replay this
    std::optional<std::filesystem::path> ground_truth;
    CollectionConfig collection;
    AnalysisConfig analysis;
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed; // overrides the scenario seed

    static RunManifest from_json(const std::string& text,
                                 const std::filesystem::path& base_dir);
    static RunManifest load(const std::filesystem::path& path);
};

struct PipelineResult {
    std::filesystem::path capture_path;
    std::filesystem::path ground_truth_path;
    std::filesystem::path packets_dir;
    std::filesystem::path reports_dir;
    std::filesystem::path metrics_path;
    std::uint64_t events = 0;
    std::uint64_t packets = 0;
    std::uint64_t bytes_uploaded = 0;
    double max_abs_detection_error = 0.0;
    bool density_matches_truth = false;
};

/// simulate -> per-gateway agents -> packet store -> reports + metrics.
/// Each stage removes its own partial outputs on failure and errors carry
/// the stage name. Re-running a manifest rewrites every output byte-
/// identically.
PipelineResult run_pipeline(const RunManifest& manifest);

/// Targets file: a JSON array of gateway-id sequences.
std::vector<GatewaySeq> load_targets(const std::filesystem::path& path);

} // namespace senseflow
