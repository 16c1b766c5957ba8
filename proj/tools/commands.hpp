#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace vizrec::cli {

using Json = nlohmann::ordered_json;

/// Settings shared by all subcommands. Precedence: flags, then the --config
/// JSON document, then these defaults.
struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0: hardware default
  std::string kernels = "auto";
  std::string corpus;
  std::string out;
  std::string task = "vt2";
  std::string feature_set = "All";
  std::string dedup = "exact";
  std::string family = "logistic_regression";
  Json hyperparameters = Json::object();
  std::size_t folds = 5;
  bool cross_validate = true;
  bool shuffle_labels = false;

  Json to_json() const;
  /// Applies keys present in a config document; unknown keys are a UsageError.
  void merge(const Json& j);
};

struct IngestArgs {
  std::string source_dir;
  std::string url;
  std::size_t first_page = 0;
  std::size_t max_pages = 100;
  double rate_limit = 2.0;
};

struct RecommendArgs {
  std::string dataset;
  std::string model;
  std::string axis_model;
  std::size_t top = 3;
};

struct BenchmarkArgs {
  std::string votes;
  std::vector<std::string> predictions;  // name=path or path
  std::vector<std::string> vocabulary;
  std::size_t replicates = 100000;
  double level = 0.95;
  bool include_random = true;
  std::vector<std::string> leave_one_out;  // predictor names scored without their own vote
};

struct SynthArgs {
  std::size_t datasets = 1000;
  double noise = 0.0;
  std::string rule = "string_bar_else_line";
};

struct ImportanceArgs {
  std::string model;
  std::size_t top = 25;
};

void cmd_ingest(const RunConfig& cfg, const IngestArgs& a);
void cmd_features(const RunConfig& cfg, const std::string& format);
void cmd_choices(const RunConfig& cfg);
void cmd_train(const RunConfig& cfg);
void cmd_cv(const RunConfig& cfg);
void cmd_importances(const RunConfig& cfg, const ImportanceArgs& a);
void cmd_recommend(const RunConfig& cfg, const RecommendArgs& a);
void cmd_benchmark(const RunConfig& cfg, const BenchmarkArgs& a);
void cmd_synth(const RunConfig& cfg, const SynthArgs& a);

/// Recommendation document for one table (also used by tests).
Json recommend(const std::string& dataset_path, const std::string& model_path, const std::string& axis_model_path,
               std::size_t top);

}  // namespace vizrec::cli
