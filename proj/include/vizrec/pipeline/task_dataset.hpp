#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vizrec/choices/tasks.hpp"
#include "vizrec/features/extract.hpp"
#include "vizrec/ingest/corpus.hpp"
#include "vizrec/pipeline/preprocess.hpp"

namespace vizrec::pipeline {

/// Features and choices of one corpus record. Pairwise features are not kept.
struct RecordAnalysis {
  std::string fid;
  std::string user_id;
  std::vector<std::string> column_names;
  features::DatasetFeatures dataset_features;
  std::vector<features::SingleColumnFeatures> column_features;
  std::optional<choices::DesignChoices> choices;  // absent when the spec could not be used
  std::string skip_reason;
};

/// Extracts features and choices for every record in parallel (input order kept).
std::vector<RecordAnalysis> analyze_corpus(const ingest::Corpus& corpus);
RecordAnalysis analyze_record(const ingest::CorpusRecord& record);

struct RowProvenance {
  std::string dataset_id;
  std::string user_id;
  std::optional<std::size_t> column;  // encoding-level rows
  std::optional<choices::Axis> axis;
  bool single_slot = false;
};

struct TaskDataset {
  choices::Task task = choices::Task::vt2;
  features::FeatureSet mask = features::FeatureSet::all;
  std::vector<std::string> vocabulary;
  RawMatrix features;
  std::vector<std::size_t> labels;
  std::vector<RowProvenance> provenance;

  std::size_t size() const { return labels.size(); }
  std::vector<std::size_t> class_counts() const;
};

/// Visualization-level tasks get one row per dataset (dataset-level features);
/// encoding-level tasks one row per (column, axis) instance (single-column features).
/// Rows whose label is outside the task vocabulary are dropped.
/// Throws ValidationError when no row remains.
TaskDataset build_task_dataset(const std::vector<RecordAnalysis>& records, choices::Task task,
                               features::FeatureSet mask);

/// Empty raw matrix with the masked feature columns of a task's level.
RawMatrix empty_feature_matrix(choices::Task task, features::FeatureSet mask);
/// Appends one row of masked features.
void append_row(RawMatrix& m, const features::FeatureVector& f, features::FeatureSet mask);

/// Keeps the given rows (in order, duplicates allowed).
TaskDataset subset(const TaskDataset& d, const std::vector<std::size_t>& rows);

}  // namespace vizrec::pipeline
