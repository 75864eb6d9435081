// Config-driven experiment pipelines behind the rotset command line tool.
#ifndef ROTSET_IO_EXPERIMENT_HPP
#define ROTSET_IO_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rotset/io/map_spec.hpp"

namespace rotset::io {

enum class ExperimentKind { MzEstimate, PerWords, PseudoRotset, EssentialMap, PaperExamples };

std::string to_string(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::MzEstimate;
  std::uint64_t seed = 1;
  int threads = 1;
  /// The parsed document and its original bytes (hashed for the report).
  json doc;
  std::string text;
};

/// Parses and checks the top-level fields. JSON syntax errors carry line
/// and column; schema errors carry the field path.
ExperimentConfig parse_config(const std::string& text);

struct CriterionResult {
  std::string id;
  bool pass = false;
  json measured;
};

struct RunReport {
  json config;
  std::string config_hash;
  double wall_time_s = 0.0;
  std::vector<CriterionResult> criteria;

  bool all_passed() const;
  json to_json() const;
};

/// Git blob id: SHA-1 of "blob <size>\0" followed by the content.
std::string git_blob_sha1(const std::string& content);

/// Runs the pipeline, writing its files into out_dir (created if needed)
/// plus report.json. Throws ConfigError for schema problems and
/// std::runtime_error for I/O failures.
RunReport run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace rotset::io

#endif  // ROTSET_IO_EXPERIMENT_HPP
