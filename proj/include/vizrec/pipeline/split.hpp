#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "vizrec/pipeline/task_dataset.hpp"

namespace vizrec::pipeline {

enum class Split : std::uint8_t { train, validation, test };
std::string_view to_string(Split s);

struct SplitPlan {
  std::uint64_t seed = 0;
  double train = 0.6;
  double validation = 0.2;
  double test = 0.2;
  std::size_t folds = 5;
};

/// Row indices per split. After balancing, indices repeat (oversampled rows).
struct SplitRows {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

/// Stratified, grouped assignment of rows to splits: all rows of one dataset land in
/// the same split, and each label stratum is cut at the plan's fractions.
/// Only `rows` take part (all rows when empty). `stream` names the random sub-stream.
std::vector<Split> assign_splits(const TaskDataset& d, const SplitPlan& plan, const std::vector<std::size_t>& rows = {},
                                 std::string_view stream = "split");

/// Duplicates rows of minority classes (sampling with replacement) until every
/// class present matches the majority count. Output: originals in order, then extras.
std::vector<std::size_t> oversample(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& labels,
                                    std::size_t num_classes, std::uint64_t seed);

/// Split first, then oversample each split independently. Throws ValidationError
/// when a class is absent from some split.
SplitRows split_and_balance(const TaskDataset& d, const SplitPlan& plan);
SplitRows split_rows(const TaskDataset& d, const std::vector<Split>& assignment);
/// Throws ValidationError naming the split and class when a class is missing.
void check_class_coverage(const TaskDataset& d, const SplitRows& s);

/// Fold id per row: groups stay together, strata are spread evenly, and each
/// group goes to the currently smallest fold.
std::vector<std::size_t> make_folds(const TaskDataset& d, std::size_t k, std::uint64_t seed);

/// CSV manifest: row,dataset_id,column,axis,label,split,fold.
void write_split_manifest(std::ostream& out, const TaskDataset& d, const std::vector<Split>& splits,
                          const std::vector<std::size_t>& folds);

}  // namespace vizrec::pipeline
