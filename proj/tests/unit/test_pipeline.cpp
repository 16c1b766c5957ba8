#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "doctest.h"
#include "vizrec/common/error.hpp"
#include "vizrec/common/rng.hpp"
#include "vizrec/eval/synth.hpp"
#include "vizrec/ingest/corpus.hpp"
#include "vizrec/pipeline/dedup.hpp"
#include "vizrec/pipeline/preprocess.hpp"
#include "vizrec/pipeline/split.hpp"
#include "vizrec/pipeline/task_dataset.hpp"

using namespace vizrec;
using namespace vizrec::pipeline;

namespace {

RawFeatureColumn numeric(std::string name, std::vector<std::optional<double>> v) {
  RawFeatureColumn c;
  c.name = std::move(name);
  c.numeric = std::move(v);
  return c;
}

RawFeatureColumn labels(std::string name, std::vector<std::optional<std::string>> v) {
  RawFeatureColumn c;
  c.name = std::move(name);
  c.categorical = true;
  c.labels = std::move(v);
  return c;
}

RawMatrix matrix(std::vector<RawFeatureColumn> cols) {
  RawMatrix m;
  m.rows = cols.empty() ? 0 : (cols[0].categorical ? cols[0].labels.size() : cols[0].numeric.size());
  m.columns = std::move(cols);
  return m;
}

// rows with one group per row unless group_size > 1
TaskDataset toy_task(const std::vector<std::size_t>& label_of_row, std::size_t classes, std::size_t group_size = 1,
                     std::uint64_t seed = 1) {
  TaskDataset d;
  d.task = choices::Task::mt3;
  for (std::size_t k = 0; k < classes; ++k) d.vocabulary.push_back("c" + std::to_string(k));
  d.labels = label_of_row;
  Rng rng(seed);
  std::vector<std::optional<double>> f0, f1;
  for (std::size_t r = 0; r < d.labels.size(); ++r) {
    RowProvenance p;
    p.dataset_id = "ds" + std::to_string(r / group_size);
    p.user_id = "u" + std::to_string(r % 7);
    d.provenance.push_back(p);
    f0.push_back(rng.normal() * 3 + static_cast<double>(d.labels[r]));
    f1.push_back(rng.bernoulli(0.1) ? std::nullopt : std::optional<double>(rng.uniform() * 100));
  }
  d.features = matrix({numeric("f0", f0), numeric("f1", f1)});
  return d;
}

std::vector<std::size_t> cycle_labels(std::size_t n, std::size_t classes, std::size_t skew = 1) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (i % (classes + skew)) < skew + 1 ? 0 : (i % (classes + skew)) - skew;
  return out;
}

ingest::CorpusRecord record(const std::string& fid, const std::string& user, const std::string& type,
                            const std::string& values = "[1, 2, 3]") {
  return ingest::parse_record_text(R"({"fid": ")" + fid + R"(", "user_id": ")" + user +
                                   R"(", "data": {"k": ["a", "b", "c"], "v": )" + values +
                                   R"(}, "specification": [{"type": ")" + type +
                                   R"(", "x": "k", "y": "v"}], "layout": {}})");
}

}  // namespace

TEST_CASE("clip bounds on a 1..1000 grid") {
  std::vector<std::optional<double>> v;
  for (int i = 1; i <= 1000; ++i) v.push_back(i);
  const auto p = fit_preprocessor(matrix({numeric("g", v)}));
  CHECK(p.features[0].clip_low == doctest::Approx(10.99).epsilon(1e-12));
  CHECK(p.features[0].clip_high == doctest::Approx(990.01).epsilon(1e-12));
  // above the fitted bound clips to it
  const auto out = apply_preprocessor(p, matrix({numeric("g", {5000.0, 990.01})}));
  CHECK(out.at(0, 0) == out.at(1, 0));
}

TEST_CASE("standardisation and imputation") {
  const auto p = fit_preprocessor(matrix({numeric("s", {2.0, 4.0, 6.0})}));
  const auto out = apply_preprocessor(p, matrix({numeric("s", {2.0, 4.0, 6.0})}));
  const double z = std::sqrt(1.5);
  CHECK(out.at(0, 0) == doctest::Approx(-z).epsilon(1e-12));
  CHECK(std::abs(out.at(1, 0)) < 1e-12);
  CHECK(out.at(2, 0) == doctest::Approx(z).epsilon(1e-12));

  const auto c = fit_preprocessor(matrix({labels("c", {"a", "a", "b", std::nullopt})}));
  CHECK(c.features[0].impute_label == "a");
  CHECK(c.features[0].categories == std::vector<std::string>{"a", "b"});
  // missing imputes the mode
  const auto imputed = apply_preprocessor(c, matrix({labels("c", {std::nullopt, "a"})}));
  REQUIRE(imputed.cols == 2);
  for (std::size_t j = 0; j < imputed.cols; ++j) CHECK(imputed.at(0, j) == imputed.at(1, j));

  const auto empty = fit_preprocessor(matrix({numeric("m", {std::nullopt, std::nullopt, std::nullopt})}));
  CHECK(empty.features[0].all_missing);
  CHECK(empty.features[0].impute_value == 0);
  CHECK(empty.features[0].scale == 1);
}

TEST_CASE("unseen categories become a zero block") {
  const auto p = fit_preprocessor(matrix({labels("c", {"a", "b", "a", "b"}), numeric("n", {1.0, 2.0, 3.0, 4.0})}));
  const auto seen = apply_preprocessor(p, matrix({labels("c", {"a"}), numeric("n", {2.0})}));
  const auto unseen = apply_preprocessor(p, matrix({labels("c", {"c"}), numeric("n", {2.0})}));
  REQUIRE(unseen.cols == 3);
  CHECK(unseen.at(0, 0) == 0.0);
  CHECK(unseen.at(0, 1) == 0.0);
  CHECK(seen.at(0, 0) != 0.0);
  CHECK(unseen.at(0, 2) == seen.at(0, 2));
}

TEST_CASE("manifest mismatch is rejected") {
  const auto p = fit_preprocessor(matrix({numeric("a", {1.0, 2.0}), numeric("b", {3.0, 4.0})}));
  CHECK_THROWS_AS(apply_preprocessor(p, matrix({numeric("a", {1.0}), numeric("c", {3.0})})), ValidationError);
  CHECK_THROWS_AS(apply_preprocessor(p, matrix({numeric("a", {1.0})})), ValidationError);
  const auto back = preprocessor_from_json(to_json(p));
  const auto m = matrix({numeric("a", {1.5, -3.0}), numeric("b", {9.0, std::nullopt})});
  CHECK(apply_preprocessor(back, m).data == apply_preprocessor(p, m).data);
}

TEST_CASE("preprocessor reads only training rows") {
  TaskDataset d = toy_task(cycle_labels(200, 3), 3, 2);
  const auto s = split_rows(d, assign_splits(d, SplitPlan{11, 0.6, 0.2, 0.2, 5}));
  FitAudit audit;
  const auto p = fit_preprocessor(d.features, s.train, &audit);
  const std::set<std::size_t> train(s.train.begin(), s.train.end());
  for (std::size_t r : audit.rows_read) CHECK(train.count(r) == 1);
  // poison every non-training row: the fit must not change
  TaskDataset poisoned = d;
  for (std::size_t r : s.validation) poisoned.features.columns[0].numeric[r] = 1e9;
  for (std::size_t r : s.test) poisoned.features.columns[1].numeric[r] = std::nullopt;
  for (std::size_t r : s.test) poisoned.labels[r] = 0;
  CHECK(to_json(fit_preprocessor(poisoned.features, s.train)) == to_json(p));

  // standardised training columns
  const auto x = apply_preprocessor(p, d.features, s.train);
  for (std::size_t j = 0; j < x.cols; ++j) {
    double mean = 0, var = 0;
    for (std::size_t i = 0; i < x.rows; ++i) mean += x.at(i, j);
    mean /= static_cast<double>(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) var += (x.at(i, j) - mean) * (x.at(i, j) - mean);
    var /= static_cast<double>(x.rows);
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(var - 1.0) < 1e-6);
  }
}

TEST_CASE("splits are disjoint, cover the rows and keep groups together") {
  for (std::size_t group : {1, 3}) {
    TaskDataset d = toy_task(cycle_labels(300, 3, 2), 3, group);
    const auto a = assign_splits(d, SplitPlan{5, 0.6, 0.2, 0.2, 5});
    CHECK(a.size() == d.size());
    std::map<std::string, std::set<Split>> by_group;
    for (std::size_t r = 0; r < d.size(); ++r) by_group[d.provenance[r].dataset_id].insert(a[r]);
    for (const auto& [id, s] : by_group) CHECK(s.size() == 1);
    const auto b = split_and_balance(d, SplitPlan{5, 0.6, 0.2, 0.2, 5});
    std::set<std::size_t> tr(b.train.begin(), b.train.end()), va(b.validation.begin(), b.validation.end()),
        te(b.test.begin(), b.test.end());
    for (std::size_t r : tr) CHECK((va.count(r) == 0 && te.count(r) == 0));
    for (std::size_t r : va) CHECK(te.count(r) == 0);
    CHECK(tr.size() + va.size() + te.size() == d.size());
    for (const auto* part : {&b.train, &b.validation, &b.test}) {
      std::vector<std::size_t> counts(3, 0);
      for (std::size_t r : *part) ++counts[d.labels[r]];
      CHECK(counts[0] == counts[1]);
      CHECK(counts[1] == counts[2]);
    }
  }
  TaskDataset hundred = toy_task(cycle_labels(100, 2), 2);
  const auto s = split_rows(hundred, assign_splits(hundred, SplitPlan{3, 0.6, 0.2, 0.2, 5}));
  CHECK(s.train.size() == 60);
  CHECK(s.validation.size() == 20);
  CHECK(s.test.size() == 20);
}

TEST_CASE("oversampling reaches the majority count deterministically") {
  std::vector<std::size_t> lab(14, 0);
  for (std::size_t i = 10; i < 14; ++i) lab[i] = 1;
  std::vector<std::size_t> rows(14);
  std::iota(rows.begin(), rows.end(), 0);
  const auto o = oversample(rows, lab, 2, 9);
  CHECK(o.size() == 20);
  CHECK(std::equal(rows.begin(), rows.end(), o.begin()));
  for (std::size_t i = 14; i < o.size(); ++i) CHECK(lab[o[i]] == 1);
  CHECK(oversample(rows, lab, 2, 9) == o);
  CHECK(oversample(rows, lab, 2, 10) != o);
}

TEST_CASE("missing class in a split is reported") {
  TaskDataset d = toy_task(cycle_labels(40, 2), 3);  // class c2 absent everywhere is fine
  CHECK_NOTHROW(split_and_balance(d, SplitPlan{1, 0.6, 0.2, 0.2, 5}));
  std::vector<std::size_t> lab(40, 0);
  lab[0] = 1;  // a single row of class 1 cannot reach every split
  TaskDataset rare = toy_task(lab, 2);
  CHECK_THROWS_WITH_AS(split_and_balance(rare, SplitPlan{1, 0.6, 0.2, 0.2, 5}), doctest::Contains("c1"),
                       ValidationError);
}

TEST_CASE("folds partition the rows") {
  TaskDataset ten = toy_task(cycle_labels(10, 2), 2);
  const auto f = make_folds(ten, 5, 3);
  std::vector<std::size_t> sizes(5, 0);
  for (std::size_t x : f) ++sizes.at(x);
  for (std::size_t s : sizes) CHECK(s == 2);
  CHECK(make_folds(ten, 5, 3) == f);

  TaskDataset d = toy_task(cycle_labels(503, 3, 1), 3);
  const auto g = make_folds(d, 5, 8);
  std::vector<std::size_t> n(5, 0);
  for (std::size_t x : g) ++n.at(x);
  CHECK(*std::max_element(n.begin(), n.end()) - *std::min_element(n.begin(), n.end()) <= 1);
  CHECK_THROWS_AS(make_folds(ten, 11, 1), ValidationError);

  std::ostringstream manifest;
  write_split_manifest(manifest, ten, assign_splits(ten, SplitPlan{}), f);
  const std::string text = manifest.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 11);
}

TEST_CASE("dedup is idempotent and removes exact copies") {
  ingest::Corpus c;
  c.records = {record("a1", "A", "bar"), record("a2", "A", "bar"), record("a3", "A", "bar"),
               record("b1", "B", "line", "[7, 8, 9]")};
  const auto e = deduplicate(c, DedupMode::exact, 4);
  CHECK(e.records.size() == 2);
  CHECK(deduplicate(e, DedupMode::exact, 4).records.size() == 2);
  CHECK(deduplicate(c, DedupMode::exact, 4).records[0].fid == e.records[0].fid);

  ingest::Corpus u;
  for (int i = 0; i < 5; ++i) u.records.push_back(record("A" + std::to_string(i), "A", "bar", "[" + std::to_string(i) + ", 1, 2]"));
  u.records.push_back(record("B0", "B", "bar", "[9, 9, 9]"));
  const auto p = deduplicate(u, DedupMode::per_user, 4);
  CHECK(p.records.size() == 2);
  const auto again = deduplicate(p, DedupMode::per_user, 4);
  REQUIRE(again.records.size() == p.records.size());
  for (std::size_t i = 0; i < p.records.size(); ++i) CHECK(again.records[i].fid == p.records[i].fid);
  ingest::Corpus reversed = u;
  std::reverse(reversed.records.begin(), reversed.records.end());
  std::set<std::string> a, b;
  for (const auto& r : p.records) a.insert(r.fid);
  for (const auto& r : deduplicate(reversed, DedupMode::per_user, 4).records) b.insert(r.fid);
  CHECK(a == b);
  CHECK(parse_dedup_mode("per_user") == DedupMode::per_user);
}

TEST_CASE("task datasets from records") {
  ingest::Corpus c;
  for (int i = 0; i < 3; ++i) c.records.push_back(record("bar" + std::to_string(i), "u", "bar", "[" + std::to_string(i) + ", 5, 6]"));
  for (int i = 0; i < 2; ++i) c.records.push_back(record("line" + std::to_string(i), "u", "line", "[" + std::to_string(i) + ", 7, 1]"));
  c.records.push_back(record("pie", "u", "pie"));
  const auto analysed = analyze_corpus(c);
  const auto vt2 = build_task_dataset(analysed, choices::Task::vt2, features::FeatureSet::all);
  CHECK(vt2.size() == 5);
  const auto counts = vt2.class_counts();
  CHECK(counts[choices::class_index(choices::Task::vt2, "bar").value()] == 3);
  CHECK(counts[choices::class_index(choices::Task::vt2, "line").value()] == 2);
  CHECK(vt2.features.columns.size() == 841);
  const auto dims = build_task_dataset(analysed, choices::Task::vt2, features::FeatureSet::d);
  CHECK(dims.features.columns.size() == 15);
  // the pie chart is absent from the mark-type tasks
  const auto mt6 = build_task_dataset(analysed, choices::Task::mt6, features::FeatureSet::all);
  for (const auto& p : mt6.provenance) CHECK(p.dataset_id != "pie");
  CHECK(mt6.features.columns.size() == 81);

  ingest::Corpus dual;
  dual.records.push_back(ingest::load_corpus(std::filesystem::path(VIZREC_FIXTURES) / "corpus").records.at(1));
  REQUIRE(dual.records[0].fid == "dual:1");
  const auto mt3 = build_task_dataset(analyze_corpus(dual), choices::Task::mt3, features::FeatureSet::all);
  CHECK(mt3.size() == 3);
  for (std::size_t l : mt3.labels) CHECK(mt3.vocabulary[l] == "scatter");

  CHECK_THROWS_AS(build_task_dataset(analyze_corpus(dual), choices::Task::vt2, features::FeatureSet::all),
                  ValidationError);
}
