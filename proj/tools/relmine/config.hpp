#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relmine/random.hpp"

namespace relmine::cli {

/// Every knob of every subcommand. Loaded from a JSON document (--config);
/// command-line flags then override individual fields. Paths are used as
/// given, relative to the working directory.
struct PipelineConfig {
  std::string task = "qc";
  std::string input;
  std::string output;
  std::string diagnostics;
  /// gen-negatives, mine, augment-run: write the input corpus followed by the
  /// new records instead of the new records alone.
  bool combined = false;
  /// 0: RELMINE_THREADS, else the hardware concurrency.
  unsigned threads = 0;
  std::string path_separator = "angle";

  struct Clean {
    bool conflicts = true;
    bool dedup = true;
    bool numeric = true;
    std::string numeric_rule = "lenient";
    std::string allowlist;
    std::string report;
  } clean;

  struct Negatives {
    std::string strategy = "sibling-leaf";
    std::uint64_t seed = kDefaultSeed;
    std::uint32_t max_resamples = 16;
    /// Whitespace-separated argv of an NDJSON generator; empty uses the stub.
    std::string generator_command;
  } negatives;

  struct Mining {
    std::string mode = "easy";
    double tau = 0.7;
    std::uint64_t seed = kDefaultSeed;
    std::string embeddings;
  } mining;

  struct Augment {
    std::vector<std::string> targets;  // empty: task default
    std::size_t quota = 0;             // 0: task default
    std::uint64_t seed = kDefaultSeed;
    std::string dev_paths;
    std::string dev;
    std::string plan;
    std::string translator = "stub";
    std::size_t batch_size = 64;
    unsigned retries = 3;
    unsigned max_in_flight = 1;
  } augment;

  struct Split {
    std::string mode = "stratified";
    std::vector<double> ratios = {0.9, 0.05, 0.05};
    std::uint64_t seed = kDefaultSeed;
    std::string out_dir = ".";
  } split;

  struct Evaluate {
    std::vector<std::string> gold;
    std::vector<std::string> predictions;
    std::vector<std::string> tasks;
  } evaluate;

  struct Report {
    std::string json;
    std::string csv;
    std::string svg;
    std::string title;
  } report;
};

/// Throws ValidationError on unknown keys or mistyped values.
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);

/// Explicit value, then RELMINE_THREADS, then hardware concurrency (min 1).
unsigned resolve_threads(unsigned requested);

}  // namespace relmine::cli
