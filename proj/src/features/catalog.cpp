#include "vizrec/features/catalog.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "vizrec/common/encoding.hpp"
#include "vizrec/common/error.hpp"

namespace vizrec::features {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::dimensions: return "dimensions";
    case Category::types: return "types";
    case Category::values: return "values";
    case Category::names: return "names";
  }
  return "?";
}

std::string_view to_string(ValueKind k) { return k == ValueKind::boolean ? "boolean" : "numeric"; }

std::string_view to_string(Applicability a) {
  switch (a) {
    case Applicability::any: return "any";
    case Applicability::quantitative: return "Q";
    case Applicability::quantitative_or_temporal: return "Q,T";
    case Applicability::categorical: return "C";
    case Applicability::qq: return "Q-Q";
    case Applicability::cc: return "C-C";
    case Applicability::cq: return "C-Q";
  }
  return "?";
}

std::string_view to_string(Aggregator a) {
  switch (a) {
    case Aggregator::count: return "num";
    case Aggregator::percent: return "pct";
    case Aggregator::has: return "has";
    case Aggregator::only_one: return "only_one";
    case Aggregator::all: return "all";
    case Aggregator::mean: return "mean";
    case Aggregator::variance: return "var";
    case Aggregator::stddev: return "std";
    case Aggregator::coeff_variation: return "cv";
    case Aggregator::min: return "min";
    case Aggregator::max: return "max";
    case Aggregator::range: return "range";
    case Aggregator::normalized_range: return "normalized_range";
    case Aggregator::average_abs_deviation: return "avg_abs_dev";
    case Aggregator::median_abs_deviation: return "median_abs_dev";
  }
  return "?";
}

std::string_view to_string(Level l) {
  switch (l) {
    case Level::single_column: return "single_column";
    case Level::pairwise: return "pairwise";
    case Level::dataset: return "dataset";
  }
  return "?";
}

std::string_view to_string(FeatureSet s) {
  switch (s) {
    case FeatureSet::d: return "D";
    case FeatureSet::dt: return "D+T";
    case FeatureSet::dtv: return "D+T+V";
    case FeatureSet::all: return "All";
  }
  return "?";
}

FeatureSet parse_feature_set(std::string_view text) {
  std::string t;
  for (char c : text) {
    if (c != '+' && c != ' ' && c != '_') t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (t == "d") return FeatureSet::d;
  if (t == "dt") return FeatureSet::dt;
  if (t == "dtv") return FeatureSet::dtv;
  if (t == "all" || t == "dtvn") return FeatureSet::all;
  throw UsageError("unknown feature set '" + std::string(text) + "' (expected D, D+T, D+T+V or All)");
}

bool admits(FeatureSet set, Category c) {
  switch (set) {
    case FeatureSet::d: return c == Category::dimensions;
    case FeatureSet::dt: return c == Category::dimensions || c == Category::types;
    case FeatureSet::dtv: return c != Category::names;
    case FeatureSet::all: return true;
  }
  return false;
}

namespace {

const std::vector<Aggregator> kCategoricalAggs = {Aggregator::count, Aggregator::percent, Aggregator::has,
                                                  Aggregator::only_one, Aggregator::all};
const std::vector<Aggregator> kQuantitativeAggs = {
    Aggregator::mean, Aggregator::variance, Aggregator::stddev, Aggregator::coeff_variation,
    Aggregator::min, Aggregator::max, Aggregator::range, Aggregator::normalized_range,
    Aggregator::average_abs_deviation, Aggregator::median_abs_deviation};
// Type flags: "only one" column of a type is not summarised.
const std::vector<Aggregator> kTypeAggs = {Aggregator::count, Aggregator::percent, Aggregator::has, Aggregator::all};

std::vector<Aggregator> default_aggs(ValueKind k) {
  return k == ValueKind::boolean ? kCategoricalAggs : kQuantitativeAggs;
}

std::vector<FeatureDef> build_single() {
  std::vector<FeatureDef> out;
#define VIZREC_DEF(id, name, cat, group, kind, app) \
  out.push_back({name, Category::cat, group, ValueKind::kind, Applicability::app, {}});
  VIZREC_SINGLE_COLUMN_FEATURES(VIZREC_DEF)
#undef VIZREC_DEF
  for (auto& f : out) {
    f.aggregators = f.category == Category::types ? kTypeAggs : default_aggs(f.kind);
  }
  return out;
}

std::vector<FeatureDef> build_pairwise() {
  std::vector<FeatureDef> out;
#define VIZREC_DEF(id, name, cat, group, kind, app) \
  out.push_back({name, Category::cat, group, ValueKind::kind, Applicability::app, {}});
  VIZREC_PAIRWISE_FEATURES(VIZREC_DEF)
#undef VIZREC_DEF
  for (std::size_t i = 0; i < out.size(); ++i) {
    // p-values enter through their significance flags; raw counts through their
    // normalised forms.
    const bool skip = i == pw::correlation_p || i == pw::ks_p || i == pw::chi2_p || i == pw::anova_p ||
                      i == pw::edit_distance || i == pw::num_shared_words;
    if (!skip) out[i].aggregators = default_aggs(out[i].kind);
  }
  return out;
}

struct SpecialDef {
  DatasetSpecial id;
  const char* name;
  Category category;
  ValueKind kind;
};

const SpecialDef kSpecials[] = {
    {DatasetSpecial::num_columns, "num_columns", Category::dimensions, ValueKind::numeric},
    {DatasetSpecial::num_rows, "num_rows", Category::dimensions, ValueKind::numeric},
    {DatasetSpecial::num_cells, "num_cells", Category::dimensions, ValueKind::numeric},
    {DatasetSpecial::num_column_pairs, "num_column_pairs", Category::dimensions, ValueKind::numeric},
    {DatasetSpecial::column_row_ratio, "column_row_ratio", Category::dimensions, ValueKind::numeric},
    {DatasetSpecial::general_type_entropy, "general_type_entropy", Category::types, ValueKind::numeric},
    {DatasetSpecial::specific_type_entropy, "specific_type_entropy", Category::types, ValueKind::numeric},
    {DatasetSpecial::num_qq_pairs, "num_qq_pairs", Category::types, ValueKind::numeric},
    {DatasetSpecial::num_cc_pairs, "num_cc_pairs", Category::types, ValueKind::numeric},
    {DatasetSpecial::num_cq_pairs, "num_cq_pairs", Category::types, ValueKind::numeric},
    {DatasetSpecial::num_unique_names, "num_unique_names", Category::names, ValueKind::numeric},
    {DatasetSpecial::pct_unique_names, "pct_unique_names", Category::names, ValueKind::numeric},
    {DatasetSpecial::has_duplicate_names, "has_duplicate_names", Category::names, ValueKind::boolean},
    {DatasetSpecial::name_token_entropy, "name_token_entropy", Category::names, ValueKind::numeric},
};

std::vector<DatasetFeatureDef> build_dataset() {
  const auto& singles = single_column_catalog();
  const auto& pairs = pairwise_catalog();
  std::vector<DatasetFeatureDef> out;
  const Category order[] = {Category::dimensions, Category::types, Category::values, Category::names};
  for (Category cat : order) {
    // Specials lead the dimensions block and close the others.
    auto add_specials = [&] {
      for (const auto& s : kSpecials) {
        if (s.category == cat) {
          out.push_back({s.name, cat, Level::dataset, static_cast<std::size_t>(s.id), std::nullopt, s.kind});
        }
      }
    };
    if (cat == Category::dimensions) add_specials();
    for (std::size_t i = 0; i < singles.size(); ++i) {
      if (singles[i].category != cat) continue;
      for (Aggregator a : singles[i].aggregators) {
        const ValueKind k = (a == Aggregator::has || a == Aggregator::only_one || a == Aggregator::all)
                                ? ValueKind::boolean
                                : ValueKind::numeric;
        out.push_back({singles[i].name + "__" + std::string(to_string(a)), cat, Level::single_column, i, a, k});
      }
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i].category != cat) continue;
      for (Aggregator a : pairs[i].aggregators) {
        const ValueKind k = (a == Aggregator::has || a == Aggregator::only_one || a == Aggregator::all)
                                ? ValueKind::boolean
                                : ValueKind::numeric;
        out.push_back({"pair_" + pairs[i].name + "__" + std::string(to_string(a)), cat, Level::pairwise, i, a, k});
      }
    }
    if (cat != Category::dimensions) add_specials();
  }
  return out;
}

template <typename Defs>
std::vector<std::string> names_of(const Defs& defs) {
  std::vector<std::string> out;
  out.reserve(defs.size());
  for (const auto& d : defs) out.push_back(d.name);
  return out;
}

const std::unordered_map<std::string, std::size_t>& index_map(Level level) {
  static const auto build = [](Level l) {
    std::unordered_map<std::string, std::size_t> m;
    const auto names = feature_names(l);
    for (std::size_t i = 0; i < names.size(); ++i) m.emplace(names[i], i);
    return m;
  };
  static const auto single = build(Level::single_column);
  static const auto pair = build(Level::pairwise);
  static const auto dataset = build(Level::dataset);
  switch (level) {
    case Level::single_column: return single;
    case Level::pairwise: return pair;
    case Level::dataset: return dataset;
  }
  return dataset;
}

}  // namespace

const std::vector<FeatureDef>& single_column_catalog() {
  static const std::vector<FeatureDef> c = build_single();
  return c;
}

const std::vector<FeatureDef>& pairwise_catalog() {
  static const std::vector<FeatureDef> c = build_pairwise();
  return c;
}

const std::vector<DatasetFeatureDef>& dataset_catalog() {
  static const std::vector<DatasetFeatureDef> c = build_dataset();
  return c;
}

std::vector<std::string> feature_names(Level level) {
  switch (level) {
    case Level::single_column: return names_of(single_column_catalog());
    case Level::pairwise: return names_of(pairwise_catalog());
    case Level::dataset: return names_of(dataset_catalog());
  }
  return {};
}

std::size_t feature_count(Level level) {
  switch (level) {
    case Level::single_column: return single_column_catalog().size();
    case Level::pairwise: return pairwise_catalog().size();
    case Level::dataset: return dataset_catalog().size();
  }
  return 0;
}

std::optional<std::size_t> find_feature(Level level, std::string_view name) {
  const auto& m = index_map(level);
  auto it = m.find(std::string(name));
  if (it == m.end()) return std::nullopt;
  return it->second;
}

nlohmann::ordered_json catalog_manifest() {
  using J = nlohmann::ordered_json;
  auto defs_json = [](const std::vector<FeatureDef>& defs) {
    J arr = J::array();
    for (const auto& d : defs) {
      J aggs = J::array();
      for (Aggregator a : d.aggregators) aggs.push_back(std::string(to_string(a)));
      arr.push_back(J{{"name", d.name},
                      {"category", std::string(to_string(d.category))},
                      {"group", d.group},
                      {"kind", std::string(to_string(d.kind))},
                      {"applicability", std::string(to_string(d.applicability))},
                      {"aggregators", aggs}});
    }
    return arr;
  };
  J dataset = J::array();
  for (const auto& d : dataset_catalog()) {
    J e{{"name", d.name},
        {"category", std::string(to_string(d.category))},
        {"kind", std::string(to_string(d.kind))},
        {"source_level", std::string(to_string(d.source_level))}};
    if (d.source_level == Level::single_column) e["source"] = single_column_catalog()[d.source_index].name;
    if (d.source_level == Level::pairwise) e["source"] = pairwise_catalog()[d.source_index].name;
    if (d.aggregator) e["aggregator"] = std::string(to_string(*d.aggregator));
    dataset.push_back(std::move(e));
  }
  J masks = J::object();
  for (FeatureSet s : {FeatureSet::d, FeatureSet::dt, FeatureSet::dtv, FeatureSet::all}) {
    masks[std::string(to_string(s))] = {{"single_column", mask_indices(Level::single_column, s).size()},
                                        {"dataset", mask_indices(Level::dataset, s).size()}};
  }
  return J{{"version", 1},
           {"single_column", defs_json(single_column_catalog())},
           {"pairwise", defs_json(pairwise_catalog())},
           {"dataset", dataset},
           {"mask_sizes", masks},
           {"hashes",
            {{"single_column", hex64(manifest_hash(Level::single_column))},
             {"pairwise", hex64(manifest_hash(Level::pairwise))},
             {"dataset", hex64(manifest_hash(Level::dataset))}}}};
}

std::uint64_t manifest_hash(Level level) {
  std::string buf(to_string(level));
  for (const auto& n : feature_names(level)) {
    buf.push_back('\n');
    buf += n;
  }
  return fnv1a64(buf);
}

std::vector<std::size_t> mask_indices(Level level, FeatureSet set) {
  std::vector<std::size_t> out;
  if (level == Level::single_column) {
    const auto& c = single_column_catalog();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (admits(set, c[i].category)) out.push_back(i);
    }
  } else if (level == Level::dataset) {
    const auto& c = dataset_catalog();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (admits(set, c[i].category)) out.push_back(i);
    }
  } else {
    const auto& c = pairwise_catalog();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (admits(set, c[i].category)) out.push_back(i);
    }
  }
  return out;
}

void verify_catalog() {
  auto check_unique = [](Level level, std::size_t expected) {
    const auto names = feature_names(level);
    if (names.size() != expected) {
      throw InternalError("feature catalog " + std::string(to_string(level)) + " has " +
                          std::to_string(names.size()) + " entries, expected " + std::to_string(expected));
    }
    std::set<std::string> seen(names.begin(), names.end());
    if (seen.size() != names.size()) {
      throw InternalError("feature catalog " + std::string(to_string(level)) + " has duplicate names");
    }
  };
  check_unique(Level::single_column, kSingleColumnFeatureCount);
  check_unique(Level::pairwise, kPairwiseFeatureCount);
  check_unique(Level::dataset, kDatasetFeatureCount);
  const std::size_t expected_single[] = {1, 9, 66, 81};
  const std::size_t expected_dataset[] = {15, 52, 717, 841};
  const FeatureSet sets[] = {FeatureSet::d, FeatureSet::dt, FeatureSet::dtv, FeatureSet::all};
  for (int i = 0; i < 4; ++i) {
    if (mask_indices(Level::single_column, sets[i]).size() != expected_single[i] ||
        mask_indices(Level::dataset, sets[i]).size() != expected_dataset[i]) {
      throw InternalError("feature mask " + std::string(to_string(sets[i])) + " has the wrong size");
    }
  }
}

}  // namespace vizrec::features
