#include "vizrec/features/aggregate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "vizrec/common/error.hpp"
#include "vizrec/common/numeric.hpp"
#include "vizrec/features/single_column.hpp"

namespace vizrec::features {

using ingest::GeneralType;

FeatureValue aggregate(Aggregator agg, std::span<const double> present_values) {
  std::vector<double> v(present_values.begin(), present_values.end());
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double trues = 0;
  for (double x : v) trues += x != 0 ? 1.0 : 0.0;
  switch (agg) {
    case Aggregator::count: return trues;
    case Aggregator::percent: return v.empty() ? FeatureValue{} : trues / n;
    case Aggregator::has: return trues > 0 ? 1.0 : 0.0;
    case Aggregator::only_one: return trues == 1 ? 1.0 : 0.0;
    case Aggregator::all: return v.empty() ? FeatureValue{} : (trues == n ? 1.0 : 0.0);
    default: break;
  }
  if (v.empty()) return std::nullopt;
  switch (agg) {
    case Aggregator::mean: return num::mean(v);
    case Aggregator::variance: return num::variance(v);
    case Aggregator::stddev: return num::stddev(v);
    case Aggregator::coeff_variation: {
      const double m = num::mean(v);
      if (m == 0) return std::nullopt;
      return num::stddev(v) / std::abs(m);
    }
    case Aggregator::min: return v.front();
    case Aggregator::max: return v.back();
    case Aggregator::range: return v.back() - v.front();
    case Aggregator::normalized_range: {
      const double scale = std::max(std::abs(v.front()), std::abs(v.back()));
      if (scale == 0) return std::nullopt;
      return (v.back() - v.front()) / scale;
    }
    case Aggregator::average_abs_deviation: return num::average_absolute_deviation(v);
    case Aggregator::median_abs_deviation: return num::median_absolute_deviation(v);
    default: break;
  }
  return std::nullopt;
}

namespace {

struct Specials {
  std::array<FeatureValue, 14> values;
};

Specials compute_specials(const ingest::Dataset& d) {
  Specials s;
  auto put = [&](DatasetSpecial id, FeatureValue v) { s.values[static_cast<std::size_t>(id)] = v; };
  const double cols = static_cast<double>(d.column_count());
  const double rows = static_cast<double>(d.row_count());
  put(DatasetSpecial::num_columns, cols);
  put(DatasetSpecial::num_rows, rows);
  put(DatasetSpecial::num_cells, cols * rows);
  put(DatasetSpecial::num_column_pairs, cols * (cols - 1) / 2);
  put(DatasetSpecial::column_row_ratio, rows > 0 ? FeatureValue{cols / rows} : FeatureValue{});

  std::array<double, 3> general{};
  std::array<double, 5> specific{};
  for (const auto& c : d.columns()) {
    general[static_cast<std::size_t>(c.general_type())] += 1;
    specific[static_cast<std::size_t>(c.specific_type())] += 1;
  }
  put(DatasetSpecial::general_type_entropy, num::entropy_from_counts(general));
  put(DatasetSpecial::specific_type_entropy, num::entropy_from_counts(specific));
  const double q = general[static_cast<std::size_t>(GeneralType::quantitative)];
  const double c = general[static_cast<std::size_t>(GeneralType::categorical)];
  put(DatasetSpecial::num_qq_pairs, q * (q - 1) / 2);
  put(DatasetSpecial::num_cc_pairs, c * (c - 1) / 2);
  put(DatasetSpecial::num_cq_pairs, c * q);

  std::set<std::string> names;
  std::map<std::string, double> tokens;
  for (const auto& col : d.columns()) {
    names.insert(col.name());
    for (auto& t : tokenize_name(col.name())) tokens[t] += 1;
  }
  std::vector<double> token_counts;
  for (const auto& [t, n] : tokens) token_counts.push_back(n);
  put(DatasetSpecial::num_unique_names, static_cast<double>(names.size()));
  put(DatasetSpecial::pct_unique_names, static_cast<double>(names.size()) / cols);
  put(DatasetSpecial::has_duplicate_names, names.size() < d.column_count() ? 1.0 : 0.0);
  put(DatasetSpecial::name_token_entropy, num::entropy_from_counts(token_counts));
  return s;
}

}  // namespace

DatasetFeatures aggregate_features(const std::vector<SingleColumnFeatures>& singles,
                                   const std::vector<PairwiseFeatures>& pairs, const ingest::Dataset& dataset) {
  if (dataset.column_count() == 0) throw ValidationError("dataset '" + dataset.id() + "' has no columns");
  if (singles.size() != dataset.column_count()) throw InternalError("single-column features do not match columns");
  const std::size_t c = dataset.column_count();
  if (pairs.size() != c * (c - 1) / 2) throw InternalError("pairwise features do not cover all column pairs");

  const auto specials = compute_specials(dataset);
  const auto& catalog = dataset_catalog();
  DatasetFeatures out;
  out.level = Level::dataset;
  out.values.assign(catalog.size(), std::nullopt);
  out.support.assign(catalog.size(), 0);

  // Present values per source feature, gathered once.
  auto gather = [](const std::vector<FeatureVector>& vecs, std::size_t count) {
    std::vector<std::vector<double>> cols(count);
    for (const auto& v : vecs) {
      for (std::size_t i = 0; i < count; ++i) {
        if (v.values[i]) cols[i].push_back(*v.values[i]);
      }
    }
    return cols;
  };
  const auto single_vals = gather(singles, kSingleColumnFeatureCount);
  const auto pair_vals = gather(pairs, kPairwiseFeatureCount);

  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const auto& def = catalog[i];
    switch (def.source_level) {
      case Level::dataset:
        out.values[i] = specials.values[def.source_index];
        out.support[i] = static_cast<std::uint32_t>(c);
        break;
      case Level::single_column:
        out.values[i] = aggregate(*def.aggregator, single_vals[def.source_index]);
        out.support[i] = static_cast<std::uint32_t>(single_vals[def.source_index].size());
        break;
      case Level::pairwise:
        out.values[i] = aggregate(*def.aggregator, pair_vals[def.source_index]);
        out.support[i] = static_cast<std::uint32_t>(pair_vals[def.source_index].size());
        break;
    }
    if (out.values[i] && !std::isfinite(*out.values[i])) out.values[i].reset();
  }
  return out;
}

}  // namespace vizrec::features
