#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "vizrec/common/error.hpp"
#include "vizrec/common/numeric.hpp"
#include "vizrec/common/rng.hpp"
#include "vizrec/features/aggregate.hpp"
#include "vizrec/features/catalog.hpp"
#include "vizrec/features/extract.hpp"
#include "vizrec/features/matrix_io.hpp"
#include "vizrec/features/pairwise.hpp"
#include "vizrec/features/single_column.hpp"
#include "vizrec/features/stat_tests.hpp"
#include "vizrec/ingest/corpus.hpp"

using namespace vizrec;
using namespace vizrec::features;
using ingest::Column;
using ingest::Dataset;

namespace {

std::vector<std::string> text(std::initializer_list<double> v) {
  std::vector<std::string> out;
  for (double x : v) {
    std::ostringstream s;
    s << x;
    out.push_back(s.str());
  }
  return out;
}

Column qcol(std::string name, std::initializer_list<double> v) { return Column(std::move(name), text(v)); }

double value(const FeatureVector& f, std::string_view name) {
  const auto v = f.get(name);
  REQUIRE_MESSAGE(v.has_value(), "missing feature ", name);
  return *v;
}

constexpr double kTol = 1e-9;

}  // namespace

TEST_CASE("catalog cardinality and masks") {
  CHECK_NOTHROW(verify_catalog());
  CHECK(feature_count(Level::single_column) == 81);
  CHECK(feature_count(Level::pairwise) == 30);
  CHECK(feature_count(Level::dataset) == 841);
  const std::size_t ds[] = {15, 52, 717, 841}, col[] = {1, 9, 66, 81};
  const FeatureSet sets[] = {FeatureSet::d, FeatureSet::dt, FeatureSet::dtv, FeatureSet::all};
  for (int i = 0; i < 4; ++i) {
    CHECK(mask_indices(Level::dataset, sets[i]).size() == ds[i]);
    CHECK(mask_indices(Level::single_column, sets[i]).size() == col[i]);
  }
  CHECK(feature_names(Level::single_column)[mask_indices(Level::single_column, FeatureSet::d)[0]] == "length");
  for (Level l : {Level::single_column, Level::dataset})
    for (int i = 0; i + 1 < 4; ++i) {
      const auto small = mask_indices(l, sets[i]), big = mask_indices(l, sets[i + 1]);
      CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
    }
  CHECK(parse_feature_set("D+T+V") == FeatureSet::dtv);
  CHECK_THROWS_AS(parse_feature_set("Q"), UsageError);
}

TEST_CASE("fixture corpus extractions have full cardinality") {
  const auto corpus = ingest::load_corpus(std::filesystem::path(VIZREC_FIXTURES) / "corpus");
  REQUIRE(!corpus.records.empty());
  for (const auto& rec : corpus.records) {
    const auto ex = extract_features(rec.data);
    CHECK(ex.dataset.size() == 841);
    CHECK(ex.dataset.support.size() == 841);
    const std::size_t n = rec.data.column_count();
    CHECK(ex.columns.size() == n);
    CHECK(ex.pairs.size() == n * (n - 1) / 2);
    for (const auto& c : ex.columns) {
      CHECK(c.size() == 81);
      for (const auto& v : c.values)
        if (v) CHECK(std::isfinite(*v));
    }
    for (const auto& p : ex.pairs) CHECK(p.size() == 30);
    for (const auto& v : ex.dataset.values)
      if (v) CHECK(std::isfinite(*v));
    CHECK(apply_feature_mask(ex.dataset, FeatureSet::dt).size() == 52);
    CHECK(apply_feature_mask(ex.columns[0], FeatureSet::dtv).size() == 66);
  }
}

TEST_CASE("single-column examples") {
  const auto f = extract_single_column_features(qcol("v", {1, 2, 3, 4, 5}));
  CHECK(value(f, "length") == 5);
  CHECK(value(f, "is_sorted") == 1);
  CHECK(value(f, "is_monotonic") == 1);
  CHECK(value(f, "sortedness") == doctest::Approx(1.0).epsilon(kTol));
  CHECK(std::abs(value(f, "linear_space_sequence_coefficient")) < kTol);
  CHECK(value(f, "is_linear_space") == 1);
  CHECK(value(f, "percent_unique") == 1.0);
  CHECK(value(f, "mean") == doctest::Approx(3.0));
  CHECK(value(f, "general_type_is_quantitative") == 1);
  CHECK(!f.get("value_entropy").has_value());

  const auto c = extract_single_column_features(Column("c", {"a", "a", "b", "b"}));
  CHECK(value(c, "general_type_is_categorical") == 1);
  CHECK(std::abs(value(c, "value_entropy") - std::log(2.0)) < kTol);
  CHECK(value(c, "percent_of_mode") == 0.5);
  CHECK(value(c, "mean_value_length") == 1.0);
  CHECK(!c.get("mean").has_value());
}

TEST_CASE("formula oracles") {
  const std::vector<double> s312{3, 1, 2};
  CHECK(std::abs(*sortedness(s312) - 0.5) < kTol);
  CHECK(std::abs(*sortedness(std::vector<double>{3, 2, 1}) - 1.0) < kTol);
  CHECK(!sortedness(std::vector<double>{4, 4, 4}).has_value());

  const auto lin = space_sequence_coefficients(std::vector<double>{2, 4, 6, 8});
  CHECK(std::abs(*lin.lin_coeff) < kTol);
  CHECK(*lin.is_lin);
  const auto geo = space_sequence_coefficients(std::vector<double>{1, 2, 4, 8});
  CHECK(std::abs(*geo.log_coeff) < kTol);
  CHECK(*geo.is_log);
  CHECK(!*geo.is_lin);
  const auto mixed = space_sequence_coefficients(std::vector<double>{1, 2, 4, 7});
  CHECK(std::abs(*mixed.lin_coeff - std::sqrt(2.0 / 3.0) / 2.0) < kTol);
  CHECK(!*mixed.is_lin);
  CHECK(!space_sequence_coefficients(std::vector<double>{-1, 2, 4}).log_coeff.has_value());

  const auto k = edit_distance("kitten", "sitting");
  CHECK(k.raw == 3);
  CHECK(std::abs(k.normalized - 3.0 / 7.0) < kTol);
  CHECK(edit_distance("x", "y").normalized == 1.0);
  CHECK(edit_distance("abc", "abc").raw == 0);
  CHECK(edit_distance("", "").normalized == 0.0);
  CHECK(edit_distance("naïve", "naive").raw == 1);

  const auto chi = chi2_test({{10, 0}, {0, 10}});
  CHECK(std::abs(*chi->statistic - 20.0) < kTol);

  // "0"/"1" alone would be read as boolean
  const auto g01 = extract_single_column_features(Column("g", {"0.0", "1.0"}));
  CHECK(std::abs(*num::gini(std::vector<double>{0, 1}) - 0.5) < kTol);
  CHECK(std::abs(value(g01, "gini") - 0.5) < kTol);
  CHECK(value(extract_single_column_features(qcol("g", {5, 5, 5, 5})), "gini") == 0.0);
}

TEST_CASE("statistical tests against reference values") {
  // references from a standard scientific stack
  const std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8, 9, 10.5}, b{2, 1, 4, 3, 7, 5, 8, 6, 10, 9};
  const auto r = pearson_test(a, b);
  CHECK(*r->statistic == doctest::Approx(0.8988606835883017).epsilon(1e-12));
  CHECK(*r->p_value == doctest::Approx(0.0004045292656477511).epsilon(1e-8));
  CHECK(*pearson_test(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1})->statistic ==
        doctest::Approx(-1.0));

  const std::vector<double> x{0.1, 0.5, 0.9, 1.3, 2.2, 2.5, 3.1, 4.0}, y{1.5, 2.6, 3.3, 3.9, 4.4, 5.8, 6.1, 7.7, 8.2};
  const auto ks = ks_test(x, y);
  CHECK(*ks->statistic == doctest::Approx(0.6527777777777778).epsilon(1e-12));
  CHECK(*ks->p_value == doctest::Approx(0.05413091733096922).epsilon(1e-8));

  const auto chi = chi2_test({{12, 5, 7}, {3, 9, 4}});
  CHECK(*chi->statistic == doctest::Approx(6.001082251082252).epsilon(1e-12));
  CHECK(*chi->p_value == doctest::Approx(0.04976013460148397).epsilon(1e-8));
  CHECK(*chi2_test({{10, 0}, {0, 10}})->p_value == doctest::Approx(7.744216431044088e-06).epsilon(1e-8));

  const auto f = anova_test({{1, 2, 3, 4}, {2, 3, 4, 5, 6}, {7, 8, 9}});
  CHECK(*f->statistic == doctest::Approx(14.294117647058824).epsilon(1e-12));
  CHECK(*f->p_value == doctest::Approx(0.0016082648751593702).epsilon(1e-8));
  const auto same = anova_test({{1, 1, 1}, {1, 1, 1}});
  CHECK((!same || !same->statistic || *same->statistic == 0.0));

  const std::vector<double> z{2.1, 3.4, 1.9, 5.6, 4.4, 3.3, 2.8, 6.1, 3.9, 4.2, 3.0, 2.2};
  const auto nt = normality_test(z);
  CHECK(*nt->statistic == doctest::Approx(1.0985207603544616).epsilon(1e-10));
  CHECK(*nt->p_value == doctest::Approx(0.5773766917424856).epsilon(1e-8));
  CHECK(!normality_test(std::vector<double>{1, 2, 3}).has_value());
}

TEST_CASE("normal samples look normal") {
  Rng rng(20240101);
  std::vector<std::string> cells;
  for (int i = 0; i < 5000; ++i) cells.push_back(std::to_string(rng.normal()));
  const auto f = extract_single_column_features(Column("n", cells));
  CHECK(value(f, "is_normal_at_p05") == 1);
}

TEST_CASE("outlier examples") {
  const auto o = outlier_features(std::vector<double>{1, 2, 3, 4, 100});
  CHECK(o[0].has);
  CHECK(!outlier_features(std::vector<double>{1, 2, 3, 4, 5})[3].has);
  // mean 0.2, population sigma 0.4: |1-0.2| = 0.8 < 1.2
  const auto z = outlier_features(std::vector<double>{0, 0, 0, 0, 1});
  CHECK(z[3].fraction == 0.0);
  for (const auto& e : o) {
    CHECK(e.fraction >= 0.0);
    CHECK(e.fraction <= 1.0);
  }
}

TEST_CASE("pairwise examples") {
  const auto p = extract_pairwise_features(qcol("a", {1, 2, 3}), qcol("b", {2, 4, 6}));
  CHECK(value(p, "correlation") == doctest::Approx(1.0));
  CHECK(value(p, "has_overlapping_range") == 1);
  CHECK(!p.get("chi2_statistic").has_value());
  CHECK(!p.get("anova_statistic").has_value());

  const auto w = extract_pairwise_features(qcol("price_usd", {1, 2, 3}), qcol("price_eur", {3, 1, 2}));
  CHECK(value(w, "has_shared_words") == 1);
  CHECK(value(w, "num_shared_words") == 1);

  const auto n = extract_pairwise_features(Column("s", {"a", "b", "a", "b"}), Column("l", {"a", "b", "c", "a"}));
  CHECK(value(n, "nestedness") == 1.0);
  CHECK(value(n, "nestedness_eq_1") == 1);
  CHECK(!n.get("correlation").has_value());

  const auto cq = extract_pairwise_features(Column("g", {"a", "a", "b", "b"}), qcol("v", {1, 2, 5, 6}));
  CHECK(cq.get("anova_statistic").has_value());

  const Column col = qcol("self", {4, 1, 7, 2});
  const auto self = extract_pairwise_features(col, col);
  CHECK(value(self, "correlation") == doctest::Approx(1.0));
  CHECK(value(self, "edit_distance") == 0);
  CHECK(value(self, "is_identical") == 1);
}

TEST_CASE("name tokenization") {
  CHECK(tokenize_name("priceUSD_total") == std::vector<std::string>{"price", "usd", "total"});
  CHECK(tokenize_name("GDP per capita") == std::vector<std::string>{"gdp", "per", "capita"});
}

TEST_CASE("dataset aggregates") {
  const Dataset d("agg", {qcol("x", {1, 2, 3}), qcol("y", {5, 3, 9}), Column("label", {"a", "b", "c"})});
  const auto ex = extract_features(d);
  CHECK(std::abs(value(ex.dataset, "general_type_is_quantitative__pct") - 2.0 / 3.0) < kTol);
  CHECK(std::abs(value(ex.dataset, "general_type_entropy") -
                 -(2.0 / 3.0 * std::log(2.0 / 3.0) + 1.0 / 3.0 * std::log(1.0 / 3.0))) < kTol);
  CHECK(value(ex.dataset, "num_columns") == 3);

  const Dataset s("str", {Column("word", {"p", "q"})});
  CHECK(value(extract_features(s).dataset, "specific_type_is_string__has") == 1);
  CHECK_THROWS_AS(extract_features(Dataset("none", {})), ValidationError);
}

TEST_CASE("dataset features ignore column order") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Column> cols;
    const std::size_t n = 2 + rng.index(4), rows = 5 + rng.index(20);
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<std::string> cells;
      const bool cat = rng.bernoulli(0.4);
      for (std::size_t r = 0; r < rows; ++r)
        cells.push_back(cat ? std::string(1, static_cast<char>('a' + rng.index(4))) : std::to_string(rng.normal() * 10));
      cols.emplace_back("col_" + std::to_string(c), std::move(cells));
    }
    std::vector<Column> shuffled = cols;
    rng.shuffle(std::span<Column>(shuffled));
    const auto a = extract_features(Dataset("p", cols)).dataset;
    const auto b = extract_features(Dataset("p", shuffled)).dataset;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].has_value() == b[i].has_value());
      if (a[i] && b[i]) CHECK(std::abs(*a[i] - *b[i]) <= 1e-9 * (1 + std::abs(*a[i])));
    }
  }
}

TEST_CASE("scale behaviours") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(12);
    for (auto& x : v) x = std::floor(rng.uniform() * 20) + 1;
    std::vector<std::string> raw, exp_raw, scaled;
    for (double x : v) {
      raw.push_back(std::to_string(x));
      exp_raw.push_back(std::to_string(std::exp(x / 4)));
      scaled.push_back(std::to_string(x * 3.5));
    }
    const auto f = extract_single_column_features(Column("v", raw));
    const auto g = extract_single_column_features(Column("v", exp_raw));
    const auto h = extract_single_column_features(Column("v", scaled));
    CHECK(value(f, "is_monotonic") == value(g, "is_monotonic"));
    CHECK(value(f, "percent_unique") == value(g, "percent_unique"));
    CHECK(value(f, "is_sorted") == value(g, "is_sorted"));
    CHECK(value(h, "gini") == doctest::Approx(value(f, "gini")).epsilon(1e-9));
  }
  CHECK(edit_distance("abcdef", "azced").raw == edit_distance("azced", "abcdef").raw);
}

TEST_CASE("extraction is deterministic and thread independent") {
  const auto corpus = ingest::load_corpus(std::filesystem::path(VIZREC_FIXTURES) / "corpus");
  std::vector<const Dataset*> ptrs;
  for (const auto& r : corpus.records) ptrs.push_back(&r.data);
  const auto a = extract_features(ptrs);
  const auto b = extract_features(ptrs);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].dataset == b[i].dataset);
    CHECK(a[i].dataset == extract_features(*ptrs[i]).dataset);
  }
}

TEST_CASE("feature matrix csv round trip") {
  FeatureMatrix m;
  m.feature_names = {"f1", "f2"};
  m.row_ids = {"r,1", "r2"};
  m.rows = {{0.1, std::nullopt}, {1e-300, -3.0}};
  std::ostringstream out;
  write_matrix_csv(out, m);
  const auto back = read_matrix_csv(out.str());
  CHECK(back.feature_names == m.feature_names);
  CHECK(back.row_ids == m.row_ids);
  CHECK(back.rows == m.rows);
}
