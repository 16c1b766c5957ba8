#include "vizrec/pipeline/task_dataset.hpp"

#include "vizrec/choices/extract.hpp"
#include "vizrec/common/error.hpp"
#include "vizrec/common/parallel.hpp"

namespace vizrec::pipeline {

using choices::Task;
using features::FeatureSet;
using features::Level;

RecordAnalysis analyze_record(const ingest::CorpusRecord& record) {
  RecordAnalysis a;
  a.fid = record.fid;
  a.user_id = record.user_id;
  for (const auto& c : record.data.columns()) a.column_names.push_back(c.name());
  features::DatasetExtraction ex;
  try {
    ex = features::extract_features(record.data);
  } catch (const DataError& e) {
    a.skip_reason = e.what();
    return a;
  }
  a.dataset_features = std::move(ex.dataset);
  a.column_features = std::move(ex.columns);
  try {
    a.choices = choices::extract_record_choices(record);
  } catch (const DataError& e) {
    a.skip_reason = e.what();
  }
  return a;
}

std::vector<RecordAnalysis> analyze_corpus(const ingest::Corpus& corpus) {
  std::vector<RecordAnalysis> out(corpus.records.size());
  parallel_for(corpus.records.size(), [&](std::size_t i) { out[i] = analyze_record(corpus.records[i]); });
  return out;
}

std::vector<std::size_t> TaskDataset::class_counts() const {
  std::vector<std::size_t> c(vocabulary.size(), 0);
  for (std::size_t l : labels) ++c[l];
  return c;
}

RawMatrix empty_feature_matrix(Task task, FeatureSet mask) {
  const Level level = choices::is_visualization_level(task) ? Level::dataset : Level::single_column;
  const auto names = features::feature_names(level);
  RawMatrix m;
  for (std::size_t i : features::mask_indices(level, mask)) {
    RawFeatureColumn c;
    c.name = names[i];
    m.columns.push_back(std::move(c));
  }
  return m;
}

void append_row(RawMatrix& m, const features::FeatureVector& f, FeatureSet mask) {
  const auto idx = features::mask_indices(f.level, mask);
  if (idx.size() != m.columns.size()) throw InternalError("feature row does not match the matrix");
  for (std::size_t k = 0; k < idx.size(); ++k) m.columns[k].numeric.push_back(f.values[idx[k]]);
  ++m.rows;
}

TaskDataset build_task_dataset(const std::vector<RecordAnalysis>& records, Task task, FeatureSet mask) {
  TaskDataset d;
  d.task = task;
  d.mask = mask;
  d.vocabulary = choices::vocabulary(task);
  d.features = empty_feature_matrix(task, mask);
  const bool vis = choices::is_visualization_level(task);
  for (const auto& r : records) {
    if (!r.choices) continue;
    if (vis) {
      auto label = choices::visualization_label(task, *r.choices);
      if (!label) continue;
      append_row(d.features, r.dataset_features, mask);
      d.labels.push_back(*label);
      d.provenance.push_back({r.fid, r.user_id, std::nullopt, std::nullopt, false});
      continue;
    }
    for (const auto& e : r.choices->encodings) {
      auto label = choices::encoding_label(task, e);
      if (!label) continue;
      append_row(d.features, r.column_features.at(e.column), mask);
      d.labels.push_back(*label);
      d.provenance.push_back({r.fid, r.user_id, e.column, e.axis, e.single_slot});
    }
  }
  if (d.labels.empty()) {
    throw ValidationError("task " + std::string(choices::to_string(task)) + " has no rows in this corpus");
  }
  return d;
}

TaskDataset subset(const TaskDataset& d, const std::vector<std::size_t>& rows) {
  TaskDataset out;
  out.task = d.task;
  out.mask = d.mask;
  out.vocabulary = d.vocabulary;
  out.features.rows = rows.size();
  for (const auto& c : d.features.columns) {
    RawFeatureColumn nc;
    nc.name = c.name;
    nc.categorical = c.categorical;
    for (std::size_t r : rows) {
      if (c.categorical) nc.labels.push_back(c.labels[r]);
      else nc.numeric.push_back(c.numeric[r]);
    }
    out.features.columns.push_back(std::move(nc));
  }
  for (std::size_t r : rows) {
    out.labels.push_back(d.labels[r]);
    out.provenance.push_back(d.provenance[r]);
  }
  return out;
}

}  // namespace vizrec::pipeline
