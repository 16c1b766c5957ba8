#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "json.hpp"
#include "vizrec/models/model.hpp"
#include "vizrec/pipeline/split.hpp"

namespace vizrec::eval {

using Json = nlohmann::ordered_json;

/// A preprocessor fitted on training rows and the classifier trained after it.
struct FittedPipeline {
  pipeline::PreprocessorParams preprocessor;
  std::unique_ptr<models::Model> model;
};

/// Fits the preprocessor on train_rows only, then trains. validation_rows feed the
/// network schedule and may be empty for the other families.
FittedPipeline fit_pipeline(const models::ModelSpec& spec, const pipeline::TaskDataset& d,
                            const std::vector<std::size_t>& train_rows, const std::vector<std::size_t>& validation_rows,
                            pipeline::FitAudit* audit = nullptr);

/// Labels predicted for the given rows.
std::vector<std::size_t> predict_rows(const FittedPipeline& p, const pipeline::TaskDataset& d,
                                      const std::vector<std::size_t>& rows);

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_rows = 0;       // before oversampling
  std::size_t validation_rows = 0;
  std::size_t test_rows = 0;
  double accuracy = 0;              // oversampled test split
  double raw_accuracy = 0;          // test rows as they are
  double balanced_accuracy = 0;     // mean per-class recall on the raw test rows
  std::size_t iterations = 0;
  std::size_t epochs = 0;
  bool converged = true;
};

struct CvOptions {
  std::size_t folds = 5;
  double validation_share = 0.25;  // of the non-test rows
};

struct CvReport {
  std::string task;
  std::string family;
  std::string feature_set;
  std::uint64_t seed = 0;
  std::vector<FoldResult> folds;
  std::vector<double> fold_accuracies;
  double mean = 0;
  double standard_error = 0;  // sample std / sqrt(folds)
  double raw_mean = 0;
  double raw_standard_error = 0;

  Json to_json() const;
};

/// Each fold in turn is the test set; the remaining rows are split (grouped and
/// stratified) into train and validation, every split is oversampled on its own,
/// and the preprocessor is fitted on the oversampled train rows.
/// Folds run in parallel; every random choice comes from `seed`.
CvReport cross_validate(const models::ModelSpec& spec, const pipeline::TaskDataset& d, std::uint64_t seed,
                        const CvOptions& options = {});

/// Random permutation of the labels (a null model for the same features).
pipeline::TaskDataset shuffle_labels(const pipeline::TaskDataset& d, std::uint64_t seed);

/// Mean and sample-std / sqrt(n) of a list.
std::pair<double, double> mean_and_standard_error(const std::vector<double>& values);

}  // namespace vizrec::eval
