#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace vizrec::pipeline {

/// One raw feature column. Numeric columns use `numeric`, categorical ones `labels`.
struct RawFeatureColumn {
  std::string name;
  bool categorical = false;
  std::vector<std::optional<double>> numeric;
  std::vector<std::optional<std::string>> labels;
};

/// Column-major raw features with missing cells.
struct RawMatrix {
  std::vector<RawFeatureColumn> columns;
  std::size_t rows = 0;

  /// Manifest identity: names and kinds in order.
  std::uint64_t manifest_hash() const;
};

/// Dense row-major numeric matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

struct FeatureParams {
  std::string name;
  bool categorical = false;
  // categorical
  std::vector<std::string> categories;  // one-hot order (sorted)
  std::string impute_label;             // mode of the fitted values
  // numeric
  double clip_low = 0;
  double clip_high = 0;
  double impute_value = 0;
  double mean = 0;
  double scale = 1;
  bool all_missing = false;  // nothing to fit: imputes 0 with scale 1
};

struct PreprocessorParams {
  static constexpr int kVersion = 1;
  std::uint64_t manifest_hash = 0;
  std::size_t fitted_rows = 0;
  std::vector<FeatureParams> features;

  std::size_t output_width() const;
  std::vector<std::string> output_names() const;
};

/// Row indices a fit read, for leakage checks.
struct FitAudit {
  std::vector<std::size_t> rows_read;
};

/// Fits on the listed rows only: one-hot categories, then 1st/99th percentile clip
/// bounds, then mean/mode imputation, then standardisation moments, each stage on
/// the output of the previous one. Needs at least two rows.
PreprocessorParams fit_preprocessor(const RawMatrix& m, std::span<const std::size_t> rows, FitAudit* audit = nullptr);
PreprocessorParams fit_preprocessor(const RawMatrix& m);

/// Transforms the listed rows (all rows when empty) into a dense finite matrix.
/// Throws ValidationError when the manifest does not match the fitted one.
Matrix apply_preprocessor(const PreprocessorParams& params, const RawMatrix& m, std::span<const std::size_t> rows);
Matrix apply_preprocessor(const PreprocessorParams& params, const RawMatrix& m);

nlohmann::ordered_json to_json(const PreprocessorParams& p);
PreprocessorParams preprocessor_from_json(const nlohmann::ordered_json& j);

}  // namespace vizrec::pipeline
