#include "vizrec/pipeline/split.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>

#include "vizrec/common/error.hpp"
#include "vizrec/common/rng.hpp"
#include "vizrec/ingest/csv.hpp"

namespace vizrec::pipeline {

std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
  }
  return "?";
}

namespace {

struct Group {
  std::string id;
  std::vector<std::size_t> rows;
  std::size_t stratum = 0;
};

// Groups rows by dataset id; a group's stratum is its most common label.
std::vector<std::vector<Group>> strata_of(const TaskDataset& d, const std::vector<std::size_t>& rows) {
  std::map<std::string, Group> groups;
  for (std::size_t r : rows) {
    auto& g = groups[d.provenance[r].dataset_id];
    g.id = d.provenance[r].dataset_id;
    g.rows.push_back(r);
  }
  std::vector<std::vector<Group>> strata(d.vocabulary.size());
  for (auto& [id, g] : groups) {
    std::vector<std::size_t> counts(d.vocabulary.size(), 0);
    for (std::size_t r : g.rows) ++counts[d.labels[r]];
    g.stratum = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    strata[g.stratum].push_back(std::move(g));
  }
  return strata;
}

std::vector<std::size_t> all_rows(const TaskDataset& d) {
  std::vector<std::size_t> r(d.size());
  std::iota(r.begin(), r.end(), 0);
  return r;
}

}  // namespace

std::vector<Split> assign_splits(const TaskDataset& d, const SplitPlan& plan, const std::vector<std::size_t>& rows,
                                 std::string_view stream) {
  const double total = plan.train + plan.validation + plan.test;
  if (plan.train <= 0 || plan.validation < 0 || plan.test < 0 || total <= 0) {
    throw UsageError("split fractions must be non-negative with a positive train share");
  }
  const double cut1 = plan.train / total;
  const double cut2 = (plan.train + plan.validation) / total;
  std::vector<Split> out(d.size(), Split::train);
  auto strata = strata_of(d, rows.empty() ? all_rows(d) : rows);
  for (std::size_t s = 0; s < strata.size(); ++s) {
    auto& groups = strata[s];
    Rng rng(derive_seed(plan.seed, stream, s));
    rng.shuffle(std::span<Group>(groups));
    const double n = static_cast<double>(groups.size());
    for (std::size_t p = 0; p < groups.size(); ++p) {
      const double q = (static_cast<double>(p) + 0.5) / n;
      const Split sp = q < cut1 ? Split::train : (q < cut2 ? Split::validation : Split::test);
      for (std::size_t r : groups[p].rows) out[r] = sp;
    }
  }
  return out;
}

std::vector<std::size_t> oversample(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& labels,
                                    std::size_t num_classes, std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t r : rows) by_class.at(labels[r]).push_back(r);
  std::size_t majority = 0;
  for (const auto& c : by_class) majority = std::max(majority, c.size());
  std::vector<std::size_t> out = rows;
  for (std::size_t k = 0; k < num_classes; ++k) {
    const auto& members = by_class[k];
    if (members.empty()) continue;
    Rng rng(derive_seed(seed, "oversample", k));
    for (std::size_t i = members.size(); i < majority; ++i) out.push_back(members[rng.index(members.size())]);
  }
  return out;
}

SplitRows split_rows(const TaskDataset& d, const std::vector<Split>& assignment) {
  SplitRows s;
  for (std::size_t r = 0; r < assignment.size(); ++r) {
    switch (assignment[r]) {
      case Split::train: s.train.push_back(r); break;
      case Split::validation: s.validation.push_back(r); break;
      case Split::test: s.test.push_back(r); break;
    }
  }
  (void)d;
  return s;
}

void check_class_coverage(const TaskDataset& d, const SplitRows& s) {
  const std::pair<const char*, const std::vector<std::size_t>*> parts[] = {
      {"train", &s.train}, {"validation", &s.validation}, {"test", &s.test}};
  const auto overall = d.class_counts();
  for (const auto& [name, rows] : parts) {
    std::vector<std::size_t> counts(d.vocabulary.size(), 0);
    for (std::size_t r : *rows) ++counts[d.labels[r]];
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (overall[k] > 0 && counts[k] == 0) {
        throw ValidationError("class '" + d.vocabulary[k] + "' (" + std::to_string(overall[k]) +
                              " rows overall) is absent from the " + name +
                              " split; add data or re-stratify with a different seed");
      }
    }
  }
}

SplitRows split_and_balance(const TaskDataset& d, const SplitPlan& plan) {
  auto s = split_rows(d, assign_splits(d, plan));
  check_class_coverage(d, s);
  const std::size_t k = d.vocabulary.size();
  s.train = oversample(s.train, d.labels, k, derive_seed(plan.seed, "oversample_train"));
  s.validation = oversample(s.validation, d.labels, k, derive_seed(plan.seed, "oversample_validation"));
  s.test = oversample(s.test, d.labels, k, derive_seed(plan.seed, "oversample_test"));
  return s;
}

std::vector<std::size_t> make_folds(const TaskDataset& d, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw UsageError("fold count must be positive");
  if (d.size() < k) {
    throw ValidationError("cannot make " + std::to_string(k) + " folds from " + std::to_string(d.size()) + " rows");
  }
  std::vector<std::size_t> fold(d.size(), 0);
  std::vector<std::size_t> size(k, 0);
  auto strata = strata_of(d, all_rows(d));
  for (std::size_t s = 0; s < strata.size(); ++s) {
    auto& groups = strata[s];
    Rng rng(derive_seed(seed, "folds", s));
    rng.shuffle(std::span<Group>(groups));
    std::vector<std::size_t> in_stratum(k, 0);
    for (const auto& g : groups) {
      std::size_t best = 0;
      for (std::size_t f = 1; f < k; ++f) {
        if (std::pair(size[f], in_stratum[f]) < std::pair(size[best], in_stratum[best])) best = f;
      }
      for (std::size_t r : g.rows) fold[r] = best;
      size[best] += g.rows.size();
      in_stratum[best] += g.rows.size();
    }
  }
  return fold;
}

void write_split_manifest(std::ostream& out, const TaskDataset& d, const std::vector<Split>& splits,
                          const std::vector<std::size_t>& folds) {
  out << ingest::write_csv_row({"row", "dataset_id", "column", "axis", "label", "split", "fold"});
  for (std::size_t r = 0; r < d.size(); ++r) {
    const auto& p = d.provenance[r];
    out << ingest::write_csv_row({std::to_string(r), p.dataset_id, p.column ? std::to_string(*p.column) : "",
                                  p.axis ? std::string(choices::to_string(*p.axis)) : "", d.vocabulary[d.labels[r]],
                                  r < splits.size() ? std::string(to_string(splits[r])) : "",
                                  r < folds.size() ? std::to_string(folds[r]) : ""});
  }
}

}  // namespace vizrec::pipeline
