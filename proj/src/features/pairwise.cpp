#include "vizrec/features/pairwise.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "vizrec/common/error.hpp"
#include "vizrec/features/single_column.hpp"
#include "vizrec/features/stat_tests.hpp"

namespace vizrec::features {

using ingest::Cell;
using ingest::Column;
using ingest::GeneralType;

namespace {

void set(PairwiseFeatures& f, pw::Index i, std::optional<double> v) { f.values[i] = v; }
void set_flag(PairwiseFeatures& f, pw::Index i, bool v) { f.values[i] = v ? 1.0 : 0.0; }

std::optional<double> numeric_at(const Column& c, std::size_t row) {
  const Cell& cell = c.parsed_values()[row];
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* b = std::get_if<bool>(&cell)) return *b ? 1.0 : 0.0;
  return std::nullopt;
}

std::set<std::string> unique_keys(const Column& c) {
  const auto k = c.present_keys();
  return {k.begin(), k.end()};
}

std::size_t intersection_size(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t n = 0;
  for (const auto& k : a) n += b.count(k);
  return n;
}

void qq_block(PairwiseFeatures& f, const Column& a, const Column& b) {
  std::vector<double> xa, xb;
  for (std::size_t r = 0; r < a.size(); ++r) {
    auto va = numeric_at(a, r);
    auto vb = numeric_at(b, r);
    if (va && vb) {
      xa.push_back(*va);
      xb.push_back(*vb);
    }
  }
  if (auto t = pearson_test(xa, xb)) {
    set(f, pw::correlation, t->statistic);
    set(f, pw::correlation_p, t->p_value);
    if (t->p_value) set_flag(f, pw::correlation_significant, *t->p_value < 0.05);
  }
  const auto va = a.numeric_values();
  const auto vb = b.numeric_values();
  if (auto t = ks_test(va, vb)) {
    set(f, pw::ks_statistic, t->statistic);
    set(f, pw::ks_p, t->p_value);
    if (t->p_value) set_flag(f, pw::ks_significant, *t->p_value < 0.05);
  }
  if (!va.empty() && !vb.empty()) {
    const auto [amin, amax] = std::minmax_element(va.begin(), va.end());
    const auto [bmin, bmax] = std::minmax_element(vb.begin(), vb.end());
    const double lo = std::max(*amin, *bmin);
    const double hi = std::min(*amax, *bmax);
    const double span = std::max(*amax, *bmax) - std::min(*amin, *bmin);
    set_flag(f, pw::has_overlapping_range, lo <= hi);
    set(f, pw::pct_overlapping_range, lo > hi ? 0.0 : (span == 0 ? 1.0 : (hi - lo) / span));
  }
}

void cc_block(PairwiseFeatures& f, const Column& a, const Column& b) {
  std::vector<std::string> ka, kb;
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (!a.missing_mask()[r] && !b.missing_mask()[r]) {
      ka.push_back(a.key_at(r));
      kb.push_back(b.key_at(r));
    }
  }
  if (auto t = chi2_test(ka, kb)) {
    set(f, pw::chi2_statistic, t->statistic);
    set(f, pw::chi2_p, t->p_value);
    if (t->p_value) set_flag(f, pw::chi2_significant, *t->p_value < 0.05);
  }
  const auto ua = unique_keys(a);
  const auto ub = unique_keys(b);
  const auto& small = ua.size() <= ub.size() ? ua : ub;
  const auto& large = ua.size() <= ub.size() ? ub : ua;
  if (!small.empty()) {
    const double nest = static_cast<double>(intersection_size(small, large)) / static_cast<double>(small.size());
    set(f, pw::nestedness, nest);
    set_flag(f, pw::nestedness_is_one, nest == 1.0);
    set_flag(f, pw::nestedness_above_95, nest > 0.95);
  }
}

void cq_block(PairwiseFeatures& f, const Column& cat, const Column& quant) {
  std::map<std::string, std::vector<double>> groups;
  for (std::size_t r = 0; r < cat.size(); ++r) {
    if (cat.missing_mask()[r]) continue;
    if (auto v = numeric_at(quant, r)) groups[cat.key_at(r)].push_back(*v);
  }
  std::vector<std::vector<double>> g;
  for (auto& [k, v] : groups) g.push_back(std::move(v));
  if (auto t = anova_test(g)) {
    set(f, pw::anova_statistic, t->statistic);
    set(f, pw::anova_p, t->p_value);
    if (t->p_value) set_flag(f, pw::anova_significant, *t->p_value < 0.05);
  }
}

void shared_values(PairwiseFeatures& f, const Column& a, const Column& b) {
  bool identical = true;
  std::size_t shared = 0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    const bool ma = a.missing_mask()[r], mb = b.missing_mask()[r];
    if (ma != mb) {
      identical = false;
      continue;
    }
    if (ma) continue;
    if (a.key_at(r) == b.key_at(r)) ++shared;
    else identical = false;
  }
  set_flag(f, pw::is_identical, identical);
  set_flag(f, pw::has_shared_values, shared > 0);
  set(f, pw::num_shared_values, static_cast<double>(shared));
  if (a.size() > 0) set(f, pw::pct_shared_values, static_cast<double>(shared) / static_cast<double>(a.size()));

  const auto ua = unique_keys(a);
  const auto ub = unique_keys(b);
  const std::size_t inter = intersection_size(ua, ub);
  const std::size_t uni = ua.size() + ub.size() - inter;
  set_flag(f, pw::unique_identical, ua == ub);
  set_flag(f, pw::has_shared_unique, inter > 0);
  set(f, pw::num_shared_unique, static_cast<double>(inter));
  if (uni > 0) set(f, pw::pct_shared_unique, static_cast<double>(inter) / static_cast<double>(uni));
}

void names(PairwiseFeatures& f, const std::string& a, const std::string& b) {
  const auto ed = edit_distance(a, b);
  set(f, pw::edit_distance, static_cast<double>(ed.raw));
  set(f, pw::edit_distance_normalized, ed.normalized);
  const auto ta = tokenize_name(a);
  const auto tb = tokenize_name(b);
  const std::set<std::string> sa(ta.begin(), ta.end()), sb(tb.begin(), tb.end());
  const std::size_t inter = intersection_size(sa, sb);
  const std::size_t uni = sa.size() + sb.size() - inter;
  set_flag(f, pw::has_shared_words, inter > 0);
  set(f, pw::num_shared_words, static_cast<double>(inter));
  if (uni > 0) set(f, pw::pct_shared_words, static_cast<double>(inter) / static_cast<double>(uni));
}

}  // namespace

PairwiseFeatures extract_pairwise_features(const Column& a, const Column& b) {
  if (a.size() != b.size()) throw ValidationError("pairwise features need equal-length columns");
  PairwiseFeatures f;
  f.level = Level::pairwise;
  f.values.assign(kPairwiseFeatureCount, std::nullopt);
  const auto ga = a.general_type(), gb = b.general_type();
  if (ga == GeneralType::quantitative && gb == GeneralType::quantitative) qq_block(f, a, b);
  if (ga == GeneralType::categorical && gb == GeneralType::categorical) cc_block(f, a, b);
  if (ga == GeneralType::categorical && gb == GeneralType::quantitative) cq_block(f, a, b);
  if (ga == GeneralType::quantitative && gb == GeneralType::categorical) cq_block(f, b, a);
  shared_values(f, a, b);
  names(f, a.name(), b.name());
  for (auto& v : f.values) {
    if (v && !std::isfinite(*v)) v.reset();
  }
  return f;
}

}  // namespace vizrec::features
