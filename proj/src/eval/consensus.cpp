#include "vizrec/eval/consensus.hpp"

#include <algorithm>
#include <numeric>

#include "vizrec/common/error.hpp"
#include "vizrec/common/numeric.hpp"
#include "vizrec/common/parallel.hpp"
#include "vizrec/common/rng.hpp"

namespace vizrec::eval {

std::size_t VoteDistribution::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

std::vector<double> VoteDistribution::shares() const {
  const double n = static_cast<double>(total());
  std::vector<double> s;
  for (auto c : counts) s.push_back(n > 0 ? static_cast<double>(c) / n : 0.0);
  return s;
}

std::size_t VoteDistribution::index_of(const std::string& choice) const {
  auto it = std::find(vocabulary.begin(), vocabulary.end(), choice);
  if (it == vocabulary.end()) {
    throw ValidationError("choice '" + choice + "' is not in the vote vocabulary of dataset " + dataset_id);
  }
  return static_cast<std::size_t>(it - vocabulary.begin());
}

namespace {

// counts-based form: shares cancel N, so the ratio of counts is exact
double effectiveness_counts(const std::vector<std::size_t>& counts, std::size_t choice) {
  const std::size_t mx = *std::max_element(counts.begin(), counts.end());
  return static_cast<double>(counts[choice]) / static_cast<double>(mx);
}

std::vector<std::size_t> scored_choices(const Predictions& predictions, const std::vector<VoteDistribution>& votes) {
  std::vector<std::string> missing;
  std::vector<std::size_t> idx;
  for (const auto& v : votes) {
    auto it = predictions.find(v.dataset_id);
    if (it == predictions.end()) {
      missing.push_back(v.dataset_id);
      continue;
    }
    idx.push_back(v.index_of(it->second));
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size(); ++i) list += (i ? ", " : "") + missing[i];
    throw ValidationError("no prediction for dataset(s): " + list);
  }
  return idx;
}

std::vector<std::size_t> adjusted_counts(const VoteDistribution& v, std::size_t choice, bool leave_one_out) {
  auto c = v.counts;
  if (leave_one_out) {
    if (c[choice] == 0 || v.total() < 2) {
      throw ValidationError("leave-one-out scoring of dataset " + v.dataset_id +
                            " needs a vote for the predicted choice and at least two votes");
    }
    --c[choice];
  }
  return c;
}

}  // namespace

double effectiveness(const VoteDistribution& votes, const std::string& choice) {
  const auto i = votes.index_of(choice);
  if (votes.total() == 0) throw ValidationError("dataset " + votes.dataset_id + " has no votes");
  return effectiveness_counts(votes.counts, i);
}

CarsReport cars(const std::string& predictor, const Predictions& predictions, const std::vector<VoteDistribution>& votes,
                const CarsOptions& options) {
  if (votes.empty()) throw EmptyInputError("no vote distributions to score");
  const auto idx = scored_choices(predictions, votes);
  CarsReport rep;
  rep.predictor = predictor;
  rep.leave_one_out = options.leave_one_out;
  double sum = 0;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    if (votes[i].total() == 0) throw ValidationError("dataset " + votes[i].dataset_id + " has no votes");
    const double e = effectiveness_counts(adjusted_counts(votes[i], idx[i], options.leave_one_out), idx[i]);
    rep.effectiveness.emplace_back(votes[i].dataset_id, e);
    sum += e;
  }
  rep.cars = 100.0 * sum / static_cast<double>(votes.size());
  return rep;
}

BootstrapCi bootstrap_ci(const std::vector<VoteDistribution>& votes, const Predictions& predictions,
                         std::size_t replicates, double level, std::uint64_t seed, const CarsOptions& options) {
  if (replicates == 0) throw UsageError("bootstrap needs at least one replicate");
  if (!(level > 0 && level < 1)) throw UsageError("confidence level must be in (0, 1)");
  if (votes.empty()) throw EmptyInputError("no vote distributions to resample");
  const auto idx = scored_choices(predictions, votes);
  // cumulative shares per dataset
  std::vector<std::vector<double>> cum(votes.size());
  for (std::size_t i = 0; i < votes.size(); ++i) {
    if (votes[i].total() == 0) throw ValidationError("dataset " + votes[i].dataset_id + " has no votes");
    const auto s = votes[i].shares();
    std::partial_sum(s.begin(), s.end(), std::back_inserter(cum[i]));
  }
  std::vector<double> stats(replicates);
  parallel_for(replicates, [&](std::size_t b) {
    Rng rng(derive_seed(seed, "bootstrap", b));
    double sum = 0;
    std::vector<std::size_t> counts;
    for (std::size_t i = 0; i < votes.size(); ++i) {
      const auto& c = cum[i];
      counts.assign(c.size(), 0);
      const std::size_t n = votes[i].total();
      for (std::size_t draw = 0; draw < n; ++draw) {
        const double u = rng.uniform();
        std::size_t k = static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), u) - c.begin());
        // rounding can leave the last cumulative share just under 1
        if (k >= c.size()) {
          k = c.size() - 1;
          while (k > 0 && votes[i].counts[k] == 0) --k;
        }
        ++counts[k];
      }
      if (options.leave_one_out) {
        if (counts[idx[i]] > 0 && n > 1) --counts[idx[i]];
      }
      sum += effectiveness_counts(counts, idx[i]);
    }
    stats[b] = 100.0 * sum / static_cast<double>(votes.size());
  });
  std::sort(stats.begin(), stats.end());
  BootstrapCi ci;
  ci.level = level;
  ci.replicates = replicates;
  ci.low = num::percentile_sorted(stats, 100.0 * (1.0 - level) / 2.0);
  ci.high = num::percentile_sorted(stats, 100.0 * (1.0 + level) / 2.0);
  return ci;
}

double vote_gini(const VoteDistribution& votes) {
  if (votes.total() == 0) throw ValidationError("dataset " + votes.dataset_id + " has no votes");
  const auto s = votes.shares();
  return num::gini(s).value_or(0.0);
}

Predictions random_predictions(const std::vector<VoteDistribution>& votes, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "random_predictor"));
  Predictions p;
  for (const auto& v : votes) p[v.dataset_id] = v.vocabulary.at(rng.index(v.vocabulary.size()));
  return p;
}

Predictions modal_predictions(const std::vector<VoteDistribution>& votes) {
  Predictions p;
  for (const auto& v : votes) {
    const auto k = static_cast<std::size_t>(std::max_element(v.counts.begin(), v.counts.end()) - v.counts.begin());
    p[v.dataset_id] = v.vocabulary.at(k);
  }
  return p;
}

double expected_random_cars(const std::vector<VoteDistribution>& votes) {
  if (votes.empty()) throw EmptyInputError("no vote distributions");
  double sum = 0;
  for (const auto& v : votes) {
    double e = 0;
    for (std::size_t k = 0; k < v.counts.size(); ++k) e += effectiveness_counts(v.counts, k);
    sum += e / static_cast<double>(v.counts.size());
  }
  return 100.0 * sum / static_cast<double>(votes.size());
}

GiniSummary summarize_gini(const std::vector<VoteDistribution>& votes) {
  GiniSummary g;
  std::vector<double> vals;
  for (const auto& v : votes) vals.push_back(vote_gini(v));
  g.count = vals.size();
  if (vals.empty()) return g;
  std::sort(vals.begin(), vals.end());
  g.mean = num::mean(vals);
  g.min = vals.front();
  g.max = vals.back();
  g.q1 = num::percentile_sorted(vals, 25);
  g.median = num::percentile_sorted(vals, 50);
  g.q3 = num::percentile_sorted(vals, 75);
  return g;
}

Json GiniSummary::to_json() const {
  return Json{{"count", count}, {"mean", mean}, {"min", min}, {"q1", q1},
              {"median", median}, {"q3", q3}, {"max", max}};
}

Json CarsReport::to_json() const {
  Json eff = Json::array();
  for (const auto& [id, e] : effectiveness) eff.push_back(Json{{"dataset_id", id}, {"effectiveness", e}});
  Json j{{"predictor", predictor}, {"cars", cars}, {"leave_one_out", leave_one_out}};
  if (ci) {
    j["ci"] = Json{{"level", ci->level}, {"low", ci->low}, {"high", ci->high}, {"replicates", ci->replicates}};
  } else {
    j["ci"] = nullptr;
  }
  j["effectiveness"] = eff;
  return j;
}

}  // namespace vizrec::eval
