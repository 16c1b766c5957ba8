// Acceptance run: one PASS/FAIL line per criterion, with elapsed time.
// Usage: acceptance [criterion numbers...]   (all when none given)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracles.hpp"
#include "vizrec/choices/chart_spec.hpp"
#include "vizrec/choices/emit.hpp"
#include "vizrec/choices/extract.hpp"
#include "vizrec/common/error.hpp"
#include "vizrec/common/numeric.hpp"
#include "vizrec/common/parallel.hpp"
#include "vizrec/common/rng.hpp"
#include "vizrec/eval/consensus.hpp"
#include "vizrec/eval/cross_validate.hpp"
#include "vizrec/eval/synth.hpp"
#include "vizrec/features/catalog.hpp"
#include "vizrec/features/extract.hpp"
#include "vizrec/features/single_column.hpp"
#include "vizrec/features/stat_tests.hpp"
#include "vizrec/ingest/corpus.hpp"
#include "vizrec/models/knn.hpp"
#include "vizrec/models/logistic.hpp"
#include "vizrec/models/mlp.hpp"
#include "vizrec/models/naive_bayes.hpp"
#include "vizrec/models/random_forest.hpp"
#include "vizrec/pipeline/preprocess.hpp"
#include "vizrec/pipeline/split.hpp"
#include "vizrec/pipeline/task_dataset.hpp"

namespace fs = std::filesystem;
using namespace vizrec;
using Clock = std::chrono::steady_clock;

namespace {

// Collects failed checks with a short reason; the first few are printed.
struct Checks {
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vizrec_acceptance_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + VIZREC_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

eval::VoteDistribution votes(std::string id, std::vector<std::size_t> counts,
                             std::vector<std::string> vocab = {"bar", "line", "scatter"}) {
  return {std::move(id), std::move(vocab), std::move(counts)};
}

std::vector<eval::VoteDistribution> random_votes(Rng& rng, std::size_t datasets, std::size_t max_votes = 40) {
  std::vector<eval::VoteDistribution> out;
  for (std::size_t i = 0; i < datasets; ++i) {
    std::vector<std::size_t> c(3, 0);
    const std::size_t n = 1 + rng.index(max_votes);
    for (std::size_t v = 0; v < n; ++v) ++c[rng.index(3)];
    out.push_back(votes("d" + std::to_string(i), c));
  }
  return out;
}

pipeline::TaskDataset planted_task(std::size_t datasets, double noise, std::uint64_t seed) {
  eval::SynthOptions o;
  o.datasets = datasets;
  o.noise = noise;
  o.seed = seed;
  const auto s = eval::generate_synthetic_corpus(o);
  return pipeline::build_task_dataset(pipeline::analyze_corpus(s.corpus), choices::Task::vt2,
                                      features::FeatureSet::all);
}

// 1: feature cardinality on the fixture corpus
void cardinality(Checks& c) {
  using features::FeatureSet;
  using features::Level;
  const auto corpus = ingest::load_corpus(fs::path(VIZREC_FIXTURES) / "corpus");
  c.expect(corpus.records.size() == 5, "fixture corpus has 5 records");
  c.expect(features::feature_count(Level::single_column) == 81, "81 single-column features");
  c.expect(features::feature_count(Level::pairwise) == 30, "30 pairwise features");
  c.expect(features::feature_count(Level::dataset) == 841, "841 dataset features");
  const FeatureSet sets[] = {FeatureSet::d, FeatureSet::dt, FeatureSet::dtv, FeatureSet::all};
  const std::size_t ds[] = {15, 52, 717, 841}, col[] = {1, 9, 66, 81};
  for (int i = 0; i < 4; ++i) {
    c.expect(features::mask_indices(Level::dataset, sets[i]).size() == ds[i], "dataset mask size");
    c.expect(features::mask_indices(Level::single_column, sets[i]).size() == col[i], "column mask size");
  }
  for (const auto& rec : corpus.records) {
    const auto ex = features::extract_features(rec.data);
    const std::size_t n = rec.data.column_count();
    c.expect(ex.dataset.size() == 841, rec.fid + ": 841 dataset values");
    c.expect(ex.columns.size() == n, rec.fid + ": one vector per column");
    c.expect(ex.pairs.size() == n * (n - 1) / 2, rec.fid + ": one vector per column pair");
    for (const auto& v : ex.columns) c.expect(v.size() == 81, rec.fid + ": 81 values per column");
    for (const auto& v : ex.pairs) c.expect(v.size() == 30, rec.fid + ": 30 values per pair");
    for (int i = 0; i < 4; ++i) {
      c.expect(features::apply_feature_mask(ex.dataset, sets[i]).size() == ds[i], rec.fid + ": masked dataset width");
      if (!ex.columns.empty())
        c.expect(features::apply_feature_mask(ex.columns[0], sets[i]).size() == col[i], rec.fid + ": masked column width");
    }
  }
}

// 2: formula oracles (hand-derived or reference-stack values), absolute 1e-9
void formulas(Checks& c) {
  using namespace features;
  constexpr double tol = 1e-9;
  auto near = [&](std::optional<double> got, double want, const std::string& what) {
    c.expect(got.has_value() && std::abs(*got - want) <= tol, what + " = " + (got ? fmt(*got, 17) : "none") +
                                                                     ", want " + fmt(want, 17));
  };
  near(sortedness(std::vector<double>{3, 1, 2}), 0.5, "sortedness [3,1,2]");
  near(sortedness(std::vector<double>{3, 2, 1}), 1.0, "sortedness [3,2,1]");
  near(space_sequence_coefficients(std::vector<double>{2, 4, 6, 8}).lin_coeff, 0.0, "linear coefficient of [2,4,6,8]");
  near(space_sequence_coefficients(std::vector<double>{1, 2, 4, 8}).log_coeff, 0.0, "log coefficient of [1,2,4,8]");
  near(space_sequence_coefficients(std::vector<double>{1, 2, 4, 7}).lin_coeff, std::sqrt(2.0 / 3.0) / 2.0,
       "linear coefficient of [1,2,4,7]");
  const auto ed = edit_distance("kitten", "sitting");
  c.expect(ed.raw == 3, "edit distance kitten/sitting is 3");
  near(ed.normalized, 3.0 / 7.0, "normalized edit distance kitten/sitting");
  near(chi2_test({{10, 0}, {0, 10}})->statistic, 20.0, "chi2 of a perfect 2x2 table");
  near(chi2_test({{12, 5, 7}, {3, 9, 4}})->statistic, 6.001082251082252, "chi2 of a 2x3 table");
  near(num::gini(std::vector<double>{0, 1}), 0.5, "gini [0,1]");
  const auto g = extract_single_column_features(ingest::Column("g", {"0.0", "1.0"})).get("gini");
  near(g, 0.5, "column gini [0,1]");
  const std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8, 9, 10.5}, b{2, 1, 4, 3, 7, 5, 8, 6, 10, 9};
  near(pearson_test(a, b)->statistic, 0.8988606835883017, "pearson r");
  near(pearson_test(a, b)->p_value, 0.0004045292656477511, "pearson p");
  const std::vector<double> x{0.1, 0.5, 0.9, 1.3, 2.2, 2.5, 3.1, 4.0}, y{1.5, 2.6, 3.3, 3.9, 4.4, 5.8, 6.1, 7.7, 8.2};
  near(ks_test(x, y)->statistic, 0.6527777777777778, "KS statistic");
  near(ks_test(x, y)->p_value, 0.05413091733096922, "KS p");
  near(chi2_test({{12, 5, 7}, {3, 9, 4}})->p_value, 0.04976013460148397, "chi2 p");
  const auto f = anova_test({{1, 2, 3, 4}, {2, 3, 4, 5, 6}, {7, 8, 9}});
  near(f->statistic, 14.294117647058824, "ANOVA F");
  near(f->p_value, 0.0016082648751593702, "ANOVA p");
  const auto nt = normality_test(std::vector<double>{2.1, 3.4, 1.9, 5.6, 4.4, 3.3, 2.8, 6.1, 3.9, 4.2, 3.0, 2.2});
  near(nt->statistic, 1.0985207603544616, "normality statistic");
  near(nt->p_value, 0.5773766917424856, "normality p");
}

// 3: vote Gini endpoints
void gini_endpoints(Checks& c) {
  c.expect(eval::vote_gini(votes("u", {7, 0}, {"bar", "line"})) == 0.5, "unanimous two-way is 1/2");
  c.expect(std::abs(eval::vote_gini(votes("u", {0, 9, 0})) - 2.0 / 3.0) < 1e-15, "unanimous three-way is 2/3");
  c.expect(eval::vote_gini(votes("u", {4, 4, 4})) == 0.0, "uniform three-way is 0");
  c.expect(eval::vote_gini(votes("u", {5, 5}, {"bar", "line"})) == 0.0, "uniform two-way is 0");
}

// 4: effectiveness worked example and modal CARS over random vote sets
void effectiveness(Checks& c) {
  c.expect(std::abs(eval::effectiveness(votes("a", {40, 20, 0}), "line") - 0.5) < 1e-12, "E = 20/40 for line");
  const std::vector<eval::VoteDistribution> two{votes("x", {40, 20, 0}), votes("y", {5, 0, 0})};
  c.expect(std::abs(eval::cars("p", {{"x", "line"}, {"y", "bar"}}, two).cars - 75.0) < 1e-12, "CARS 75 example");
  Rng rng(99);
  std::size_t bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto v = random_votes(rng, 1 + rng.index(20));
    bad += std::abs(eval::cars("modal", eval::modal_predictions(v), v).cars - 100.0) > 1e-9;
  }
  c.expect(bad == 0, std::to_string(bad) + " of 1000 modal CARS differ from 100");
}

// 5: bootstrap intervals
void bootstrap(Checks& c) {
  const std::vector<eval::VoteDistribution> unanimous{votes("a", {30, 0, 0}), votes("b", {0, 12, 0})};
  const auto u = eval::bootstrap_ci(unanimous, {{"a", "bar"}, {"b", "line"}}, 2000, 0.95, 7);
  c.expect(u.low == 100.0 && u.high == 100.0, "unanimous votes give [100, 100]");

  Rng rng(5);
  const auto v = random_votes(rng, 99);
  const auto p = eval::random_predictions(v, 3);
  const auto t0 = Clock::now();
  const auto a = eval::bootstrap_ci(v, p, 100000, 0.95, 42);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const auto b = eval::bootstrap_ci(v, p, 100000, 0.95, 42);
  c.expect(a.low == b.low && a.high == b.high, "same seed, same interval");
  c.expect(a.low <= a.high, "ordered interval");
  c.expect(secs < 60.0, "1e5 replicates x 99 datasets took " + fmt(secs) + " s");
  c.note("1e5 replicates: " + fmt(secs, 3) + " s, [" + fmt(a.low) + ", " + fmt(a.high) + "]");
}

// 6: classifier oracles
void classifiers(Checks& c) {
  using namespace models;
  using namespace vizrec::testing;
  Rng rng(4242);
  std::size_t nb_bad = 0, knn_bad = 0, queries = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const auto sc = small_case(rng);
    const TrainingData data{&sc.x, &sc.y, sc.classes};
    const auto nb = train_naive_bayes({}, data);
    const std::size_t k = 1 + rng.index(6);
    const auto knn = train_knn({k}, data);
    const Matrix qm = small_case_queries(sc);
    const auto pn = nb->predict(qm), pk = knn->predict(qm);
    for (std::size_t i = 0; i < qm.rows; ++i, ++queries) {
      long double scale = 0;
      const auto on = nb_oracle(sc.x, sc.y, sc.classes, qm.row(i), &scale);
      const long double tol = 1e-9L + 1e-15L * scale;  // rounding of log joints far from zero
      bool ok = true;
      for (std::size_t j = 0; j < sc.classes; ++j) ok = ok && std::abs(pn.row(i)[j] - on[j]) <= tol;
      if (ok && pn.labels[i] != lowest_argmax(on, tol)) {
        // label may differ only within the tolerance band of a tie
        ok = on[pn.labels[i]] >= *std::max_element(on.begin(), on.end()) - tol;
      }
      nb_bad += !ok;
      const auto ok_k = knn_oracle(sc.x, sc.y, sc.classes, k, qm.row(i));
      bool kk = pk.labels[i] == lowest_argmax(ok_k, 1e-12L);
      for (std::size_t j = 0; j < sc.classes; ++j) kk = kk && std::abs(pk.row(i)[j] - ok_k[j]) <= 1e-12L;
      knn_bad += !kk;
    }
  }
  c.expect(nb_bad == 0, std::to_string(nb_bad) + " naive Bayes mismatches");
  c.expect(knn_bad == 0, std::to_string(knn_bad) + " KNN mismatches");
  c.note(std::to_string(queries) + " oracle queries");

  // separable data: LR fits it exactly
  std::vector<double> v;
  std::vector<std::size_t> y;
  while (y.size() < 40) {
    const double a = rng.normal() * 2, b = rng.normal() * 2;
    if (std::abs(a + b) < 0.5) continue;
    v.insert(v.end(), {a, b});
    y.push_back(a + b > 0);
  }
  const Matrix x = make_matrix(40, 2, v);
  c.expect(train_logistic({}, {&x, &y, 2})->predict(x).labels == y, "LR separates separable data");

  // one unbootstrapped tree is pure on its training data
  ForestParams one;
  one.trees = 1;
  one.bootstrap = false;
  one.max_features = 2;
  const auto f = train_forest(one, {&x, &y, 2}, 5);
  c.expect(f->predict(x).labels == y, "single tree reproduces its training labels");
  for (const auto& t : dynamic_cast<const RandomForest&>(*f).trees)
    for (std::size_t n = 0; n < t.nodes(); ++n)
      if (t.feature[n] < 0) {
        const double top = *std::max_element(t.value.begin() + n * 2, t.value.begin() + n * 2 + 2);
        c.expect(top == 1.0, "leaf " + std::to_string(n) + " is pure");
      }

  Mlp<double> net({4, 16, 16, 3});
  net.initialize(rng);
  std::vector<double> nx(10 * 4);
  for (auto& e : nx) e = rng.normal();
  std::vector<std::size_t> ny(10);
  for (auto& l : ny) l = rng.index(3);
  const double gc = nn_gradient_check(net, nx, ny);
  c.expect(gc < 1e-4, "NN gradient check " + fmt(gc));
}

struct CvLine {
  std::string name;
  double mean = 0, se = 0;
};

// 7: planted-rule corpus, null model and noise ceiling
void planted(Checks& c) {
  using models::Family;
  const std::uint64_t seed = 7;
  const Family families[] = {Family::logistic_regression, Family::random_forest, Family::neural_network};
  auto run = [&](const pipeline::TaskDataset& d, Family fam, const std::string& tag) {
    models::ModelSpec spec;
    spec.family = fam;
    spec.seed = seed;
    const auto t0 = Clock::now();
    const auto r = eval::cross_validate(spec, d, seed);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    c.note(tag + " " + std::string(models::to_string(fam)) + ": " + fmt(r.mean) + " +- " + fmt(r.standard_error) +
           " (" + fmt(secs, 3) + " s)");
    std::cout << "  " << c.notes.back() << std::endl;
    return r;
  };

  const auto clean = planted_task(5000, 0.0, seed);
  for (Family fam : families) {
    const auto r = run(clean, fam, "clean");
    c.expect(r.mean >= 0.95, std::string(models::to_string(fam)) + " clean accuracy " + fmt(r.mean));
  }
  const auto shuffled = eval::shuffle_labels(clean, seed);
  for (Family fam : families) {
    const auto r = run(shuffled, fam, "shuffled");
    c.expect(std::abs(r.mean - 0.5) <= 3 * r.standard_error,
             std::string(models::to_string(fam)) + " shuffled accuracy " + fmt(r.mean) + " not within 3 SE of 0.5");
  }
  const auto noisy = planted_task(5000, 0.2, seed);
  for (Family fam : families) {
    const auto r = run(noisy, fam, "noise 0.2");
    c.expect(r.mean <= 0.80 + 3 * r.standard_error,
             std::string(models::to_string(fam)) + " noisy accuracy " + fmt(r.mean) + " above 0.80 + 3 SE");
  }
}

// 8: split and preprocessing invariants on a planted task
void pipeline_invariants(Checks& c) {
  using namespace pipeline;
  const auto d = planted_task(1000, 0.1, 3);
  const SplitPlan plan{17, 0.6, 0.2, 0.2, 5};
  const auto assign = assign_splits(d, plan);
  std::map<std::string, std::set<Split>> by_group;
  for (std::size_t r = 0; r < d.size(); ++r) by_group[d.provenance[r].dataset_id].insert(assign[r]);
  for (const auto& [id, s] : by_group) c.expect(s.size() == 1, id + " spans splits");

  const auto b = split_and_balance(d, plan);
  const std::set<std::size_t> tr(b.train.begin(), b.train.end()), va(b.validation.begin(), b.validation.end()),
      te(b.test.begin(), b.test.end());
  std::size_t overlap = 0;
  for (std::size_t r : tr) overlap += va.count(r) + te.count(r);
  for (std::size_t r : va) overlap += te.count(r);
  c.expect(overlap == 0, "splits overlap in " + std::to_string(overlap) + " rows");
  c.expect(tr.size() + va.size() + te.size() == d.size(), "splits cover every row");
  for (const auto* part : {&b.train, &b.validation, &b.test}) {
    std::vector<std::size_t> counts(d.vocabulary.size(), 0);
    for (std::size_t r : *part) ++counts[d.labels[r]];
    c.expect(std::adjacent_find(counts.begin(), counts.end(), std::not_equal_to<>()) == counts.end(),
             "classes unequal after oversampling");
  }

  FitAudit audit;
  const auto p = fit_preprocessor(d.features, b.train, &audit);
  std::size_t leaked = 0;
  for (std::size_t r : audit.rows_read) leaked += tr.count(r) == 0;
  c.expect(leaked == 0, std::to_string(leaked) + " non-training rows read by the fit");
  TaskDataset poisoned = d;
  for (std::size_t r = 0; r < d.size(); ++r) {
    if (tr.count(r)) continue;
    for (auto& col : poisoned.features.columns) {
      if (col.categorical) col.labels[r] = "poison";
      else col.numeric[r] = 1e12;
    }
  }
  c.expect(to_json(fit_preprocessor(poisoned.features, b.train)) == to_json(p), "fit depends on non-training rows");

  // standardized numeric columns; columns constant on the fitted rows map to 0.
  // one-hot blocks stay 0/1 and are skipped
  const auto x = apply_preprocessor(p, d.features, b.train);
  std::vector<std::size_t> numeric_cols;
  for (std::size_t off = 0; const auto& f : p.features) {
    if (!f.categorical) numeric_cols.push_back(off);
    off += f.categorical ? f.categories.size() : 1;
  }
  std::size_t bad = 0, constant = 0;
  for (std::size_t j : numeric_cols) {
    double mean = 0, var = 0;
    for (std::size_t i = 0; i < x.rows; ++i) mean += x.at(i, j);
    mean /= static_cast<double>(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) var += (x.at(i, j) - mean) * (x.at(i, j) - mean);
    var /= static_cast<double>(x.rows);
    if (var == 0.0 && mean == 0.0) {
      ++constant;
      continue;
    }
    bad += !(std::abs(mean) < 1e-9 && std::abs(var - 1.0) < 1e-6);
  }
  c.expect(bad == 0, std::to_string(bad) + " standardized columns off mean 0 / variance 1");
  c.note(std::to_string(numeric_cols.size()) + " numeric columns, " + std::to_string(constant) +
         " constant on the training rows");
}

// 9: chart spec round trips and the dual-axis fixture
void round_trips(Checks& c) {
  using namespace choices;
  Rng rng(2024);
  const std::vector<std::string> types{"scatter", "line", "bar", "box", "histogram", "heatmap", "pie"};
  std::size_t bad = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t ncols = 1 + rng.index(6);
    std::vector<ingest::Column> cols;
    for (std::size_t k = 0; k < ncols; ++k)
      cols.emplace_back(rng.bernoulli(0.2) ? "dup" : "col" + std::to_string(k), std::vector<std::string>{"1", "2", "3"});
    const ingest::Dataset d("rt", std::move(cols));
    std::vector<std::size_t> xs, ys;
    for (std::size_t k = 0; k < ncols; ++k) {
      if (rng.bernoulli(0.35)) xs.push_back(k);
      if (rng.bernoulli(0.5)) ys.push_back(k);
    }
    if (xs.empty() && ys.empty()) xs.push_back(rng.index(ncols));
    const auto chosen = choices_from_axes(types[rng.index(types.size())], xs, ys);
    const auto back =
        extract_design_choices(parse_chart_spec(std::string_view(emit_chart_spec(d, chosen).dump()), d));
    bad += !(equivalent(back, chosen) && back.visualization == chosen.visualization);
  }
  c.expect(bad == 0, std::to_string(bad) + " of 500 round trips changed the choices");

  const auto rec = ingest::parse_record_text(slurp(fs::path(VIZREC_FIXTURES) / "dual_axis_record.json"));
  const auto ch = extract_record_choices(rec);
  c.expect(ch.visualization.visualization_type == std::optional<std::string>("scatter"), "fixture is a scatter");
  c.expect(ch.visualization.has_shared_axis, "fixture shares an axis");
  const std::size_t hp = rec.data.find_column("Hp"), mpg = rec.data.find_column("MPG"), wgt = rec.data.find_column("Wgt");
  bool hp_single = false, mpg_multi = false, wgt_multi = false;
  for (const auto& e : ch.encodings) {
    if (e.column == hp && e.axis == Axis::x) hp_single = e.is_single_axis;
    if (e.column == mpg && e.axis == Axis::y) mpg_multi = !e.is_single_axis;
    if (e.column == wgt && e.axis == Axis::y) wgt_multi = !e.is_single_axis;
  }
  c.expect(hp_single && mpg_multi && wgt_multi, "fixture single-axis flags");
  c.expect(equivalent(extract_design_choices(parse_chart_spec(emit_chart_spec(rec.data, ch), rec.data)), ch),
           "fixture round trip");
}

// 10: byte-identical outputs at 1 and 4 workers
void determinism(Checks& c) {
  const fs::path dir = scratch("determinism");
  c.expect(run_cli("--seed 31 synth --datasets 300 --out " + q(dir / "synth")) == 0, "synth");
  const fs::path corpus = dir / "synth" / "records";
  auto same_files = [&](const fs::path& a, const fs::path& b) {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(a)) {
      const auto name = e.path().filename();
      if (name == "config.resolved.json") continue;  // records the worker count itself
      ++n;
      c.expect(fs::exists(b / name) && slurp(e.path()) == slurp(b / name), name.string() + " differs across worker counts");
    }
    c.expect(n > 0, "no outputs in " + a.string());
  };
  for (const char* threads : {"1", "4"})
    c.expect(run_cli(std::string("--threads ") + threads + " features --corpus " + q(corpus) + " --out " +
                     q(dir / (std::string("f") + threads))) == 0,
             "features run");
  same_files(dir / "f1", dir / "f4");
  for (const char* fam : {"nb", "knn", "lr", "rf", "nn"}) {
    for (const char* threads : {"1", "4"})
      c.expect(run_cli(std::string("--seed 31 --threads ") + threads + " train --corpus " + q(corpus) +
                       " --model " + fam + " --out " + q(dir / (std::string(fam) + threads))) == 0,
               std::string(fam) + " train run");
    same_files(dir / (std::string(fam) + "1"), dir / (std::string(fam) + "4"));
  }
  fs::remove_all(dir.parent_path());
}

// 11: MDI importances on planted signal
void importances(Checks& c) {
  using namespace models;
  std::size_t first = 0;
  double worst_sum = 0;
  bool negative = false;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(derive_seed(1100, "mdi", static_cast<std::uint64_t>(trial)));
    // feature 2 carries the label (10% flips); the rest are noise
    const std::size_t n = 300, d = 6;
    std::vector<double> v(n * d);
    std::vector<std::size_t> y(n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t j = 0; j < d; ++j) v[r * d + j] = rng.normal();
      y[r] = (v[r * d + 2] > 0) != rng.bernoulli(0.1);
    }
    const Matrix x = vizrec::testing::make_matrix(n, d, v);
    const auto f = train_forest({}, {&x, &y, 2}, static_cast<std::uint64_t>(trial));
    const auto imp = mdi_importances(*f);
    double sum = 0;
    for (const auto& [j, w] : imp) {
      negative = negative || w < 0;
      sum += w;
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    first += imp[0].first == 2;
  }
  c.expect(!negative, "negative importance");
  c.expect(worst_sum <= 1e-9, "importances sum off 1 by " + fmt(worst_sum));
  c.expect(first >= 95, "planted feature first in " + std::to_string(first) + " of 100 forests");
  c.note("planted feature first in " + std::to_string(first) + "/100");
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0: no time bound
  std::function<void(Checks&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "feature cardinality on fixtures", 1, cardinality},
      {2, "formula oracles", 0, formulas},
      {3, "vote gini endpoints", 0, gini_endpoints},
      {4, "effectiveness and modal CARS", 5, effectiveness},
      {5, "bootstrap intervals", 60, bootstrap},
      {6, "classifier oracles", 30, classifiers},
      {7, "planted corpus cross-validation", 600, planted},
      {8, "pipeline invariants", 10, pipeline_invariants},
      {9, "chart spec round trips", 5, round_trips},
      {10, "determinism across worker counts", 0, determinism},
      {11, "MDI importances", 60, importances},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& cr : all) {
    if (!wanted.empty() && !wanted.count(cr.id)) continue;
    Checks checks;
    const auto t0 = Clock::now();
    try {
      cr.body(checks);
    } catch (const std::exception& e) {
      checks.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (cr.budget_s > 0 && secs >= cr.budget_s)
      checks.failures.push_back("took " + fmt(secs, 4) + " s, budget " + fmt(cr.budget_s) + " s");
    const bool ok = checks.failures.empty();
    failed += !ok;
    std::printf("criterion %2d %s  %-36s %9.3f s", cr.id, ok ? "PASS" : "FAIL", cr.name, secs);
    for (const auto& n : checks.notes) std::printf("  | %s", n.c_str());
    std::printf("\n");
    for (std::size_t i = 0; i < checks.failures.size() && i < 10; ++i)
      std::printf("    - %s\n", checks.failures[i].c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
