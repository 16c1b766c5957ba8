#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace vizrec::features {

enum class Category { dimensions, types, values, names };
enum class ValueKind { boolean, numeric };
enum class Level { single_column, pairwise, dataset };

/// Which column types a feature is defined for; others report it as missing.
enum class Applicability {
  any,
  quantitative,             // general type Q
  quantitative_or_temporal, // general type Q or T (datetimes as epoch seconds)
  categorical,              // general type C
  qq,                       // both columns quantitative
  cc,                       // both columns categorical
  cq,                       // one categorical, one quantitative
};

enum class Aggregator {
  // categorical aggregators over boolean features
  count, percent, has, only_one, all,
  // quantitative aggregators over numeric features
  mean, variance, stddev, coeff_variation, min, max, range, normalized_range, average_abs_deviation,
  median_abs_deviation,
};

std::string_view to_string(Category c);
std::string_view to_string(ValueKind k);
std::string_view to_string(Applicability a);
std::string_view to_string(Aggregator a);
std::string_view to_string(Level l);

// Single-column features: id, name, category, group, kind, applicability.
#define VIZREC_SINGLE_COLUMN_FEATURES(X)                                                                   \
  X(length, "length", dimensions, "Length", numeric, any)                                                 \
  X(is_categorical, "general_type_is_categorical", types, "General type", boolean, any)                   \
  X(is_quantitative, "general_type_is_quantitative", types, "General type", boolean, any)                 \
  X(is_temporal, "general_type_is_temporal", types, "General type", boolean, any)                         \
  X(is_string, "specific_type_is_string", types, "Specific type", boolean, any)                           \
  X(is_boolean, "specific_type_is_boolean", types, "Specific type", boolean, any)                         \
  X(is_integer, "specific_type_is_integer", types, "Specific type", boolean, any)                         \
  X(is_decimal, "specific_type_is_decimal", types, "Specific type", boolean, any)                         \
  X(is_datetime, "specific_type_is_datetime", types, "Specific type", boolean, any)                       \
  X(mean, "mean", values, "Statistical [Q,T]", numeric, quantitative_or_temporal)                         \
  X(normalized_mean, "normalized_mean", values, "Statistical [Q,T]", numeric, quantitative_or_temporal)   \
  X(median, "median", values, "Statistical [Q,T]", numeric, quantitative_or_temporal)                     \
  X(normalized_median, "normalized_median", values, "Statistical [Q,T]", numeric, quantitative_or_temporal) \
  X(range, "range", values, "Statistical [Q,T]", numeric, quantitative_or_temporal)                       \
  X(normalized_range, "normalized_range", values, "Statistical [Q,T]", numeric, quantitative_or_temporal) \
  X(variance, "variance", values, "Statistical [Q,T]", numeric, quantitative_or_temporal)                 \
  X(stddev, "standard_deviation", values, "Statistical [Q,T]", numeric, quantitative_or_temporal)         \
  X(coeff_variation, "coefficient_of_variation", values, "Statistical [Q,T]", numeric, quantitative_or_temporal) \
  X(minimum, "minimum", values, "Statistical [Q,T]", numeric, quantitative_or_temporal)                   \
  X(maximum, "maximum", values, "Statistical [Q,T]", numeric, quantitative_or_temporal)                   \
  X(percentile_25, "percentile_25", values, "Statistical [Q,T]", numeric, quantitative_or_temporal)       \
  X(percentile_75, "percentile_75", values, "Statistical [Q,T]", numeric, quantitative_or_temporal)       \
  X(median_abs_deviation, "median_absolute_deviation", values, "Statistical [Q,T]", numeric, quantitative_or_temporal) \
  X(average_abs_deviation, "average_absolute_deviation", values, "Statistical [Q,T]", numeric, quantitative_or_temporal) \
  X(quartile_dispersion, "quantitative_coefficient_of_dispersion", values, "Statistical [Q,T]", numeric, quantitative_or_temporal) \
  X(q_entropy, "entropy", values, "Distribution [Q]", numeric, quantitative)                              \
  X(gini, "gini", values, "Distribution [Q]", numeric, quantitative)                                      \
  X(skewness, "skewness", values, "Distribution [Q]", numeric, quantitative)                              \
  X(kurtosis, "kurtosis", values, "Distribution [Q]", numeric, quantitative)                              \
  X(moment_5, "moment_5", values, "Distribution [Q]", numeric, quantitative)                              \
  X(moment_6, "moment_6", values, "Distribution [Q]", numeric, quantitative)                              \
  X(moment_7, "moment_7", values, "Distribution [Q]", numeric, quantitative)                              \
  X(moment_8, "moment_8", values, "Distribution [Q]", numeric, quantitative)                              \
  X(moment_9, "moment_9", values, "Distribution [Q]", numeric, quantitative)                              \
  X(moment_10, "moment_10", values, "Distribution [Q]", numeric, quantitative)                            \
  X(normality_statistic, "normality_statistic", values, "Distribution [Q]", numeric, quantitative)        \
  X(normality_p, "normality_p", values, "Distribution [Q]", numeric, quantitative)                        \
  X(is_normal_5, "is_normal_at_p05", values, "Distribution [Q]", boolean, quantitative)                   \
  X(is_normal_1, "is_normal_at_p01", values, "Distribution [Q]", boolean, quantitative)                   \
  X(has_outliers_15iqr, "has_outliers_1_5iqr", values, "Outliers", boolean, quantitative)                 \
  X(pct_outliers_15iqr, "percent_outliers_1_5iqr", values, "Outliers", numeric, quantitative)             \
  X(has_outliers_3iqr, "has_outliers_3iqr", values, "Outliers", boolean, quantitative)                    \
  X(pct_outliers_3iqr, "percent_outliers_3iqr", values, "Outliers", numeric, quantitative)                \
  X(has_outliers_99p, "has_outliers_99p", values, "Outliers", boolean, quantitative)                      \
  X(pct_outliers_99p, "percent_outliers_99p", values, "Outliers", numeric, quantitative)                  \
  X(has_outliers_3std, "has_outliers_3std", values, "Outliers", boolean, quantitative)                    \
  X(pct_outliers_3std, "percent_outliers_3std", values, "Outliers", numeric, quantitative)                \
  X(c_entropy, "value_entropy", values, "Statistical [C]", numeric, categorical)                          \
  X(mean_value_length, "mean_value_length", names, "Statistical [C]", numeric, categorical)               \
  X(median_value_length, "median_value_length", values, "Statistical [C]", numeric, categorical)          \
  X(min_value_length, "min_value_length", values, "Statistical [C]", numeric, categorical)                \
  X(std_value_length, "std_value_length", values, "Statistical [C]", numeric, categorical)                \
  X(max_value_length, "max_value_length", values, "Statistical [C]", numeric, categorical)                \
  X(pct_mode, "percent_of_mode", values, "Statistical [C]", numeric, categorical)                         \
  X(is_sorted, "is_sorted", values, "Sequence", boolean, any)                                             \
  X(is_monotonic, "is_monotonic", values, "Sequence", boolean, any)                                       \
  X(sortedness, "sortedness", values, "Sequence", numeric, any)                                           \
  X(lin_space_coeff, "linear_space_sequence_coefficient", values, "Sequence", numeric, quantitative_or_temporal) \
  X(log_space_coeff, "log_space_sequence_coefficient", values, "Sequence", numeric, quantitative_or_temporal) \
  X(is_lin_space, "is_linear_space", values, "Sequence", boolean, quantitative_or_temporal)               \
  X(is_log_space, "is_log_space", values, "Sequence", boolean, quantitative_or_temporal)                  \
  X(is_unique, "is_unique", values, "Unique", boolean, any)                                               \
  X(num_unique, "num_unique", values, "Unique", numeric, any)                                             \
  X(pct_unique, "percent_unique", values, "Unique", numeric, any)                                         \
  X(has_missing, "has_missing", values, "Missing", boolean, any)                                          \
  X(num_missing, "num_missing", values, "Missing", numeric, any)                                          \
  X(pct_missing, "percent_missing", values, "Missing", numeric, any)                                      \
  X(name_length, "name_length", names, "Properties", numeric, any)                                        \
  X(num_words, "name_num_words", names, "Properties", numeric, any)                                       \
  X(num_uppercase, "name_num_uppercase", names, "Properties", numeric, any)                               \
  X(starts_uppercase, "name_starts_with_uppercase", names, "Properties", boolean, any)                    \
  X(x_in_name, "x_in_name", names, "Value", boolean, any)                                                 \
  X(y_in_name, "y_in_name", names, "Value", boolean, any)                                                 \
  X(id_in_name, "id_in_name", names, "Value", boolean, any)                                               \
  X(time_in_name, "time_in_name", names, "Value", boolean, any)                                           \
  X(digit_in_name, "digit_in_name", names, "Value", boolean, any)                                         \
  X(whitespace_in_name, "whitespace_in_name", names, "Value", boolean, any)                               \
  X(dollar_in_name, "dollar_in_name", names, "Value", boolean, any)                                       \
  X(euro_in_name, "euro_in_name", names, "Value", boolean, any)                                           \
  X(pound_in_name, "pound_in_name", names, "Value", boolean, any)                                         \
  X(yen_in_name, "yen_in_name", names, "Value", boolean, any)

#define VIZREC_PAIRWISE_FEATURES(X)                                                               \
  X(correlation, "correlation", values, "[Q-Q]", numeric, qq)                                     \
  X(correlation_p, "correlation_p", values, "[Q-Q]", numeric, qq)                                 \
  X(correlation_significant, "correlation_p_lt_05", values, "[Q-Q]", boolean, qq)                 \
  X(ks_statistic, "ks_statistic", values, "[Q-Q]", numeric, qq)                                   \
  X(ks_p, "ks_p", values, "[Q-Q]", numeric, qq)                                                   \
  X(ks_significant, "ks_p_lt_05", values, "[Q-Q]", boolean, qq)                                   \
  X(has_overlapping_range, "has_overlapping_range", values, "[Q-Q]", boolean, qq)                 \
  X(pct_overlapping_range, "percent_overlapping_range", values, "[Q-Q]", numeric, qq)             \
  X(chi2_statistic, "chi2_statistic", values, "[C-C]", numeric, cc)                               \
  X(chi2_p, "chi2_p", values, "[C-C]", numeric, cc)                                               \
  X(chi2_significant, "chi2_p_lt_05", values, "[C-C]", boolean, cc)                               \
  X(nestedness, "nestedness", values, "[C-C]", numeric, cc)                                       \
  X(nestedness_is_one, "nestedness_eq_1", values, "[C-C]", boolean, cc)                           \
  X(nestedness_above_95, "nestedness_gt_95", values, "[C-C]", boolean, cc)                        \
  X(anova_statistic, "anova_statistic", values, "[C-Q]", numeric, cq)                             \
  X(anova_p, "anova_p", values, "[C-Q]", numeric, cq)                                             \
  X(anova_significant, "anova_p_lt_05", values, "[C-Q]", boolean, cq)                             \
  X(is_identical, "is_identical", values, "Shared values", boolean, any)                          \
  X(has_shared_values, "has_shared_values", values, "Shared values", boolean, any)                \
  X(num_shared_values, "num_shared_values", values, "Shared values", numeric, any)                \
  X(pct_shared_values, "percent_shared_values", values, "Shared values", numeric, any)            \
  X(unique_identical, "unique_values_identical", values, "Shared values", boolean, any)           \
  X(has_shared_unique, "has_shared_unique_values", values, "Shared values", boolean, any)         \
  X(num_shared_unique, "num_shared_unique_values", values, "Shared values", numeric, any)         \
  X(pct_shared_unique, "percent_shared_unique_values", values, "Shared values", numeric, any)     \
  X(edit_distance, "edit_distance", names, "Character", numeric, any)                             \
  X(edit_distance_normalized, "edit_distance_normalized", names, "Character", numeric, any)       \
  X(has_shared_words, "has_shared_words", names, "Word", boolean, any)                            \
  X(num_shared_words, "num_shared_words", names, "Word", numeric, any)                            \
  X(pct_shared_words, "percent_shared_words", names, "Word", numeric, any)

namespace sc {
#define VIZREC_ENUM_ENTRY(id, name, cat, group, kind, app) id,
enum Index : std::size_t { VIZREC_SINGLE_COLUMN_FEATURES(VIZREC_ENUM_ENTRY) count };
}  // namespace sc

namespace pw {
enum Index : std::size_t { VIZREC_PAIRWISE_FEATURES(VIZREC_ENUM_ENTRY) count };
#undef VIZREC_ENUM_ENTRY
}  // namespace pw

inline constexpr std::size_t kSingleColumnFeatureCount = 81;
inline constexpr std::size_t kPairwiseFeatureCount = 30;
inline constexpr std::size_t kDatasetFeatureCount = 841;
static_assert(sc::count == kSingleColumnFeatureCount);
static_assert(pw::count == kPairwiseFeatureCount);

struct FeatureDef {
  std::string name;
  Category category;
  std::string group;
  ValueKind kind;
  Applicability applicability;
  std::vector<Aggregator> aggregators;  // how the dataset level summarises it
};

/// Dataset properties computed directly rather than aggregated.
enum class DatasetSpecial : std::size_t {
  num_columns, num_rows, num_cells, num_column_pairs, column_row_ratio,
  general_type_entropy, specific_type_entropy, num_qq_pairs, num_cc_pairs, num_cq_pairs,
  num_unique_names, pct_unique_names, has_duplicate_names, name_token_entropy,
};

/// Dataset-level entries are either an aggregate of a column/pair feature or a
/// directly computed dataset property ("special").
struct DatasetFeatureDef {
  std::string name;
  Category category;
  Level source_level;                    // single_column, pairwise, or dataset for specials
  std::size_t source_index = 0;          // index into the source catalog (or special id)
  std::optional<Aggregator> aggregator;  // absent for specials
  ValueKind kind;
};

const std::vector<FeatureDef>& single_column_catalog();
const std::vector<FeatureDef>& pairwise_catalog();
const std::vector<DatasetFeatureDef>& dataset_catalog();

/// Names of the features of one level, in catalog order.
std::vector<std::string> feature_names(Level level);
std::size_t feature_count(Level level);
/// Index of a named feature, or nullopt.
std::optional<std::size_t> find_feature(Level level, std::string_view name);

/// Machine-readable catalog (names, categories, groups, applicability, aggregators).
nlohmann::ordered_json catalog_manifest();
/// Hash of the ordered feature names of one level; model and preprocessor files carry it.
std::uint64_t manifest_hash(Level level);

/// Throws InternalError unless the catalog holds exactly 81 / 30 / 841 unique names
/// and the feature-set masks have the expected sizes.
void verify_catalog();

// Feature-set masks: nested supersets D ⊂ D+T ⊂ D+T+V ⊂ All.
enum class FeatureSet { d, dt, dtv, all };
std::string_view to_string(FeatureSet s);
FeatureSet parse_feature_set(std::string_view text);
/// Category set admitted by a mask.
bool admits(FeatureSet set, Category c);
/// Sorted catalog indices kept by the mask at a level (single_column or dataset).
std::vector<std::size_t> mask_indices(Level level, FeatureSet set);

}  // namespace vizrec::features
