#include "vizrec/models/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vizrec/common/encoding.hpp"
#include "vizrec/common/error.hpp"
#include "vizrec/common/parallel.hpp"

namespace vizrec::models {

std::size_t Tree::leaf_of(std::span<const double> row) const {
  std::size_t n = 0;
  while (feature[n] >= 0) {
    n = static_cast<std::size_t>(row[static_cast<std::size_t>(feature[n])] <= threshold[n] ? left[n] : right[n]);
  }
  return n;
}

namespace {

double gini_sum(const std::vector<double>& counts, double n) {
  if (n <= 0) return 0;
  double sq = 0;
  for (double c : counts) sq += c * c;
  return n - sq / n;  // n * gini
}

struct Pending {
  std::size_t node, begin, end, depth;
};

}  // namespace

Tree grow_tree(const Matrix& x, const std::vector<std::size_t>& y, std::size_t classes,
               std::vector<std::size_t> samples, std::size_t max_features, std::optional<std::size_t> max_depth,
               std::size_t min_samples_split, Rng& rng) {
  const std::size_t d = x.cols;
  Tree t;
  t.importance.assign(d, 0.0);
  auto add_node = [&]() {
    t.feature.push_back(-1);
    t.threshold.push_back(0.0);
    t.left.push_back(-1);
    t.right.push_back(-1);
    t.value.insert(t.value.end(), classes, 0.0);
    return t.feature.size() - 1;
  };

  std::vector<std::size_t> order(d);
  std::vector<std::pair<double, std::size_t>> vals;
  std::vector<double> counts(classes), lc(classes), rc(classes);

  std::vector<Pending> stack{{add_node(), 0, samples.size(), 0}};
  while (!stack.empty()) {
    const Pending p = stack.back();
    stack.pop_back();
    const std::size_t n = p.end - p.begin;
    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::size_t i = p.begin; i < p.end; ++i) counts[y[samples[i]]] += 1.0;
    for (std::size_t k = 0; k < classes; ++k) t.value[p.node * classes + k] = counts[k] / static_cast<double>(n);

    const double node_imp = gini_sum(counts, static_cast<double>(n));
    if (node_imp <= 1e-12 || n < min_samples_split || (max_depth && p.depth >= *max_depth)) continue;

    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    std::size_t seen = 0;
    double best_child = std::numeric_limits<double>::infinity();
    std::size_t best_feature = d;
    double best_threshold = 0;
    for (std::size_t fi = 0; fi < d && seen < max_features; ++fi) {
      const std::size_t f = order[fi];
      vals.clear();
      for (std::size_t i = p.begin; i < p.end; ++i) vals.emplace_back(x.at(samples[i], f), y[samples[i]]);
      std::sort(vals.begin(), vals.end());
      if (vals.front().first == vals.back().first) continue;  // constant here: does not count
      ++seen;
      std::fill(lc.begin(), lc.end(), 0.0);
      rc = counts;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        lc[vals[i].second] += 1.0;
        rc[vals[i].second] -= 1.0;
        if (vals[i].first == vals[i + 1].first) continue;
        const double nl = static_cast<double>(i + 1), nr = static_cast<double>(n - i - 1);
        const double child = gini_sum(lc, nl) + gini_sum(rc, nr);
        if (child < best_child) {
          best_child = child;
          best_feature = f;
          double thr = 0.5 * (vals[i].first + vals[i + 1].first);
          if (thr >= vals[i + 1].first) thr = vals[i].first;
          best_threshold = thr;
        }
      }
    }
    if (best_feature == d) continue;

    auto mid = std::partition(samples.begin() + static_cast<std::ptrdiff_t>(p.begin),
                              samples.begin() + static_cast<std::ptrdiff_t>(p.end),
                              [&](std::size_t s) { return x.at(s, best_feature) <= best_threshold; });
    const std::size_t split = static_cast<std::size_t>(mid - samples.begin());
    t.importance[best_feature] += node_imp - best_child;
    const std::size_t l = add_node();
    const std::size_t r = add_node();
    t.feature[p.node] = static_cast<std::int32_t>(best_feature);
    t.threshold[p.node] = best_threshold;
    t.left[p.node] = static_cast<std::int32_t>(l);
    t.right[p.node] = static_cast<std::int32_t>(r);
    // right pushed first so the left subtree is grown next
    stack.push_back({r, split, p.end, p.depth + 1});
    stack.push_back({l, p.begin, split, p.depth + 1});
  }
  return t;
}

RandomForest::RandomForest(std::size_t features, std::size_t classes) : Model(features, classes) {}

std::unique_ptr<Model> train_forest(const ForestParams& params, const TrainingData& data, std::uint64_t seed) {
  if (params.trees == 0) throw UsageError("random forest needs at least one tree");
  const Matrix& x = *data.x;
  const std::size_t d = x.cols, n = x.rows;
  std::size_t mf = params.max_features.value_or(static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(d)))));
  mf = std::clamp<std::size_t>(mf, 1, std::max<std::size_t>(d, 1));
  auto m = std::make_unique<RandomForest>(d, data.classes);
  m->trees.resize(params.trees);
  parallel_for(params.trees, [&](std::size_t i) {
    Rng rng(derive_seed(seed, "forest_tree", i));
    std::vector<std::size_t> samples(n);
    if (params.bootstrap) {
      for (auto& s : samples) s = rng.index(n);
    } else {
      std::iota(samples.begin(), samples.end(), std::size_t{0});
    }
    m->trees[i] = grow_tree(x, *data.y, data.classes, std::move(samples), mf, params.max_depth,
                            std::max<std::size_t>(params.min_samples_split, 2), rng);
  });
  std::size_t nodes = 0;
  for (const auto& t : m->trees) nodes += t.nodes();
  m->log().iterations = nodes;
  m->log().flags.push_back("trees:" + std::to_string(params.trees));
  return m;
}

void RandomForest::predict_proba(const Matrix& x, std::vector<double>& out) const {
  const std::size_t c = classes_;
  parallel_for(x.rows, [&](std::size_t r) {
    double* o = out.data() + r * c;
    std::fill(o, o + c, 0.0);
    for (const auto& t : trees) {
      const std::size_t leaf = t.leaf_of(x.row(r));
      for (std::size_t k = 0; k < c; ++k) o[k] += t.value[leaf * c + k];
    }
    double z = 0;
    for (std::size_t k = 0; k < c; ++k) z += o[k];
    for (std::size_t k = 0; k < c; ++k) o[k] /= z;
  });
}

std::vector<double> RandomForest::importances() const {
  std::vector<double> total(features_, 0.0);
  for (const auto& t : trees) {
    double s = 0;
    for (double v : t.importance) s += v;
    if (s <= 0) continue;  // a stump contributes nothing
    for (std::size_t f = 0; f < features_; ++f) total[f] += t.importance[f] / s;
  }
  double s = 0;
  for (double& v : total) {
    v /= static_cast<double>(trees.size());
    s += v;
  }
  if (s > 0) {
    for (double& v : total) v /= s;
  }
  return total;
}

std::vector<std::pair<std::size_t, double>> mdi_importances(const Model& model) {
  const auto* rf = dynamic_cast<const RandomForest*>(&model);
  if (!rf) {
    throw UsageError("feature importances need a random_forest model, got " + std::string(to_string(model.family())));
  }
  const auto imp = rf->importances();
  std::vector<std::pair<std::size_t, double>> ranked;
  for (std::size_t f = 0; f < imp.size(); ++f) ranked.emplace_back(f, imp[f]);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return ranked;
}

Json RandomForest::parameters() const {
  Json ts = Json::array();
  for (const auto& t : trees) {
    ts.push_back(Json{{"feature", t.feature},
                      {"threshold", encode_doubles(t.threshold)},
                      {"left", t.left},
                      {"right", t.right},
                      {"value", encode_doubles(t.value)},
                      {"importance", encode_doubles(t.importance)}});
  }
  return Json{{"features", features_}, {"classes", classes_}, {"trees", ts}};
}

std::unique_ptr<RandomForest> RandomForest::from_parameters(const Json& j) {
  try {
    auto m = std::make_unique<RandomForest>(j.at("features").get<std::size_t>(), j.at("classes").get<std::size_t>());
    for (const auto& tj : j.at("trees")) {
      Tree t;
      t.feature = tj.at("feature").get<std::vector<std::int32_t>>();
      t.threshold = decode_doubles(tj.at("threshold").get<std::string>());
      t.left = tj.at("left").get<std::vector<std::int32_t>>();
      t.right = tj.at("right").get<std::vector<std::int32_t>>();
      t.value = decode_doubles(tj.at("value").get<std::string>());
      t.importance = decode_doubles(tj.at("importance").get<std::string>());
      const std::size_t nn = t.feature.size();
      if (nn == 0 || t.threshold.size() != nn || t.left.size() != nn || t.right.size() != nn ||
          t.value.size() != nn * m->classes_ || t.importance.size() != m->features_) {
        throw ValidationError("random forest tree blocks have inconsistent sizes");
      }
      for (std::size_t i = 0; i < nn; ++i) {
        if (t.feature[i] < 0) continue;
        const auto f = static_cast<std::size_t>(t.feature[i]);
        const auto l = static_cast<std::size_t>(t.left[i]), r = static_cast<std::size_t>(t.right[i]);
        if (f >= m->features_ || t.left[i] <= static_cast<std::int32_t>(i) || t.right[i] <= static_cast<std::int32_t>(i) ||
            l >= nn || r >= nn) {
          throw ValidationError("random forest tree has an invalid node");
        }
      }
      m->trees.push_back(std::move(t));
    }
    if (m->trees.empty()) throw ValidationError("random forest has no trees");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad random forest parameters: ") + e.what());
  }
}

}  // namespace vizrec::models
