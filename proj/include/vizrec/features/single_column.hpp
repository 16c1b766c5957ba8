#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vizrec/features/feature_vector.hpp"
#include "vizrec/ingest/dataset.hpp"

namespace vizrec::features {

/// All 81 single-column features. Inapplicable or undefined entries are missing.
SingleColumnFeatures extract_single_column_features(const ingest::Column& column);

/// |Pearson(raw, sorted)|. Missing for fewer than two values or a constant input.
std::optional<double> sortedness(std::span<const double> values);

struct SpaceSequence {
  std::optional<double> lin_coeff;
  std::optional<double> log_coeff;
  std::optional<bool> is_lin;
  std::optional<bool> is_log;
};
inline constexpr double kSpaceThreshold = 1e-3;
/// Coefficient of variation of successive differences and ratios.
SpaceSequence space_sequence_coefficients(std::span<const double> values);

/// Entropy of a 10-bin equal-width histogram (natural log).
double histogram_entropy(std::span<const double> values, int bins = 10);

struct Outliers {
  bool has = false;
  double fraction = 0;
};
/// Outliers by 1.5×IQR, 3×IQR, outside [p1, p99], and beyond 3σ, in that order.
std::vector<Outliers> outlier_features(std::span<const double> values);

struct EditDistance {
  std::size_t raw = 0;
  double normalized = 0;
};
/// Levenshtein distance over Unicode code points.
EditDistance edit_distance(std::string_view a, std::string_view b);

/// Splits on non-alphanumerics and camelCase boundaries, lowercased.
std::vector<std::string> tokenize_name(std::string_view name);

/// Number of Unicode code points in UTF-8 text.
std::size_t utf8_length(std::string_view s);

}  // namespace vizrec::features
