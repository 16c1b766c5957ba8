#include "vizrec/features/single_column.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>

#include "vizrec/common/numeric.hpp"
#include "vizrec/features/stat_tests.hpp"
#include "vizrec/ingest/type_inference.hpp"

namespace vizrec::features {

using ingest::Column;
using ingest::GeneralType;
using ingest::SpecificType;

FeatureValue FeatureVector::get(std::string_view name) const {
  auto idx = find_feature(level, name);
  if (!idx || *idx >= values.size()) throw std::out_of_range("unknown feature '" + std::string(name) + "'");
  return values[*idx];
}

std::vector<FeatureValue> apply_feature_mask(const FeatureVector& features, FeatureSet set) {
  std::vector<FeatureValue> out;
  for (std::size_t i : mask_indices(features.level, set)) out.push_back(features.values.at(i));
  return out;
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

namespace {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    int len = 1;
    char32_t cp = c;
    if ((c & 0xE0) == 0xC0) { len = 2; cp = c & 0x1F; }
    else if ((c & 0xF0) == 0xE0) { len = 3; cp = c & 0x0F; }
    else if ((c & 0xF8) == 0xF0) { len = 4; cp = c & 0x07; }
    for (int k = 1; k < len && i + k < s.size(); ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out.push_back(cp);
    i += static_cast<std::size_t>(len);
  }
  return out;
}

void set(SingleColumnFeatures& f, sc::Index i, std::optional<double> v) { f.values[i] = v; }
void set_flag(SingleColumnFeatures& f, sc::Index i, bool v) { f.values[i] = v ? 1.0 : 0.0; }

std::optional<double> safe_div(double a, double b) {
  if (b == 0) return std::nullopt;
  return a / b;
}

void statistical_qt(SingleColumnFeatures& f, const std::vector<double>& v) {
  if (v.empty()) return;
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  double maxabs = 0;
  for (double x : v) maxabs = std::max(maxabs, std::abs(x));
  const double mean = num::mean(v);
  const double median = num::percentile_sorted(sorted, 50);
  const double range = sorted.back() - sorted.front();
  const double var = num::variance(v);
  const double sd = std::sqrt(var);
  const double q1 = num::percentile_sorted(sorted, 25);
  const double q3 = num::percentile_sorted(sorted, 75);
  set(f, sc::mean, mean);
  set(f, sc::normalized_mean, safe_div(mean, maxabs));
  set(f, sc::median, median);
  set(f, sc::normalized_median, safe_div(median, maxabs));
  set(f, sc::range, range);
  set(f, sc::normalized_range, safe_div(range, maxabs));
  set(f, sc::variance, var);
  set(f, sc::stddev, sd);
  set(f, sc::coeff_variation, safe_div(sd, std::abs(mean)));
  set(f, sc::minimum, sorted.front());
  set(f, sc::maximum, sorted.back());
  set(f, sc::percentile_25, q1);
  set(f, sc::percentile_75, q3);
  set(f, sc::median_abs_deviation, num::median_absolute_deviation(v));
  set(f, sc::average_abs_deviation, num::average_absolute_deviation(v));
  set(f, sc::quartile_dispersion, safe_div(q3 - q1, q3 + q1));
}

void distribution_q(SingleColumnFeatures& f, const std::vector<double>& v) {
  if (v.size() < 2) return;
  set(f, sc::q_entropy, histogram_entropy(v));
  set(f, sc::gini, num::gini(v));
  const double m2 = num::central_moment(v, 2);
  if (m2 > 0) {
    const double sd = std::sqrt(m2);
    set(f, sc::skewness, num::central_moment(v, 3) / (m2 * sd));
    set(f, sc::kurtosis, num::central_moment(v, 4) / (m2 * m2) - 3.0);
    const sc::Index moments[] = {sc::moment_5, sc::moment_6, sc::moment_7, sc::moment_8, sc::moment_9, sc::moment_10};
    for (int k = 5; k <= 10; ++k) set(f, moments[k - 5], num::central_moment(v, k) / std::pow(sd, k));
  }
  if (auto t = normality_test(v)) {
    set(f, sc::normality_statistic, t->statistic);
    set(f, sc::normality_p, t->p_value);
    if (t->p_value) {
      set_flag(f, sc::is_normal_5, *t->p_value >= 0.05);
      set_flag(f, sc::is_normal_1, *t->p_value >= 0.01);
    }
  }
}

void outliers_q(SingleColumnFeatures& f, const std::vector<double>& v) {
  if (v.size() < 4) return;
  const auto o = outlier_features(v);
  const sc::Index has[] = {sc::has_outliers_15iqr, sc::has_outliers_3iqr, sc::has_outliers_99p, sc::has_outliers_3std};
  const sc::Index pct[] = {sc::pct_outliers_15iqr, sc::pct_outliers_3iqr, sc::pct_outliers_99p, sc::pct_outliers_3std};
  for (std::size_t i = 0; i < 4; ++i) {
    set_flag(f, has[i], o[i].has);
    set(f, pct[i], o[i].fraction);
  }
}

void statistical_c(SingleColumnFeatures& f, const Column& col) {
  const auto keys = col.present_keys();
  if (keys.empty()) return;
  std::map<std::string, double> counts;
  for (const auto& k : keys) counts[k] += 1;
  std::vector<double> c;
  double mode = 0;
  for (const auto& [k, n] : counts) {
    c.push_back(n);
    mode = std::max(mode, n);
  }
  set(f, sc::c_entropy, num::entropy_from_counts(c));
  set(f, sc::pct_mode, mode / static_cast<double>(keys.size()));
  std::vector<double> lengths;
  const auto& raw = col.raw_values();
  const auto& missing = col.missing_mask();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!missing[i]) lengths.push_back(static_cast<double>(utf8_length(ingest::trim(raw[i]))));
  }
  std::sort(lengths.begin(), lengths.end());
  set(f, sc::mean_value_length, num::mean(lengths));
  set(f, sc::median_value_length, num::percentile_sorted(lengths, 50));
  set(f, sc::min_value_length, lengths.front());
  set(f, sc::std_value_length, num::stddev(lengths));
  set(f, sc::max_value_length, lengths.back());
}

// Ordered representation: numeric values directly, text by lexicographic dense rank.
std::vector<double> order_values(const Column& col) {
  if (col.specific_type() != SpecificType::string) return col.numeric_values();
  const auto keys = col.present_keys();
  std::vector<std::string> uniq = keys;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  std::vector<double> out;
  out.reserve(keys.size());
  for (const auto& k : keys) {
    out.push_back(static_cast<double>(std::lower_bound(uniq.begin(), uniq.end(), k) - uniq.begin()));
  }
  return out;
}

void sequence(SingleColumnFeatures& f, const Column& col) {
  const auto v = order_values(col);
  if (v.size() >= 2) {
    bool nondec = true, noninc = true, inc = true, dec = true;
    for (std::size_t i = 1; i < v.size(); ++i) {
      nondec &= v[i] >= v[i - 1];
      noninc &= v[i] <= v[i - 1];
      inc &= v[i] > v[i - 1];
      dec &= v[i] < v[i - 1];
    }
    set_flag(f, sc::is_sorted, nondec || noninc);
    set_flag(f, sc::is_monotonic, inc || dec);
    set(f, sc::sortedness, sortedness(v));
  }
  const auto g = col.general_type();
  if (g == GeneralType::quantitative || g == GeneralType::temporal) {
    const auto s = space_sequence_coefficients(v);
    set(f, sc::lin_space_coeff, s.lin_coeff);
    set(f, sc::log_space_coeff, s.log_coeff);
    if (s.is_lin) set_flag(f, sc::is_lin_space, *s.is_lin);
    if (s.is_log) set_flag(f, sc::is_log_space, *s.is_log);
  }
}

void unique_missing(SingleColumnFeatures& f, const Column& col) {
  auto keys = col.present_keys();
  const std::size_t present = keys.size();
  std::sort(keys.begin(), keys.end());
  const auto n_unique = static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
  set(f, sc::num_unique, static_cast<double>(n_unique));
  if (present > 0) {
    set_flag(f, sc::is_unique, n_unique == present);
    set(f, sc::pct_unique, static_cast<double>(n_unique) / static_cast<double>(present));
  }
  set_flag(f, sc::has_missing, col.missing_count() > 0);
  set(f, sc::num_missing, static_cast<double>(col.missing_count()));
  if (col.size() > 0) set(f, sc::pct_missing, static_cast<double>(col.missing_count()) / static_cast<double>(col.size()));
}

void name_features(SingleColumnFeatures& f, const std::string& name) {
  set(f, sc::name_length, static_cast<double>(utf8_length(name)));
  set(f, sc::num_words, static_cast<double>(tokenize_name(name).size()));
  std::size_t upper = 0;
  bool digit = false, space = false;
  std::string lower;
  for (char ch : name) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isupper(c)) ++upper;
    if (std::isdigit(c)) digit = true;
    if (std::isspace(c)) space = true;
    lower.push_back(static_cast<char>(std::tolower(c)));
  }
  auto contains = [&](std::string_view needle) { return lower.find(needle) != std::string::npos; };
  set(f, sc::num_uppercase, static_cast<double>(upper));
  set_flag(f, sc::starts_uppercase, !name.empty() && std::isupper(static_cast<unsigned char>(name[0])));
  set_flag(f, sc::x_in_name, contains("x"));
  set_flag(f, sc::y_in_name, contains("y"));
  set_flag(f, sc::id_in_name, contains("id"));
  set_flag(f, sc::time_in_name, contains("time"));
  set_flag(f, sc::digit_in_name, digit);
  set_flag(f, sc::whitespace_in_name, space);
  set_flag(f, sc::dollar_in_name, contains("$"));
  set_flag(f, sc::euro_in_name, contains("\xE2\x82\xAC"));
  set_flag(f, sc::pound_in_name, contains("\xC2\xA3"));
  set_flag(f, sc::yen_in_name, contains("\xC2\xA5"));
}

}  // namespace

std::optional<double> sortedness(std::span<const double> values) {
  if (values.size() < 2) return std::nullopt;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  auto r = num::pearson(values, sorted);
  if (!r) return std::nullopt;
  return std::min(1.0, std::abs(*r));
}

SpaceSequence space_sequence_coefficients(std::span<const double> values) {
  SpaceSequence out;
  if (values.size() < 3) return out;
  std::vector<double> diffs;
  for (std::size_t i = 1; i < values.size(); ++i) diffs.push_back(values[i] - values[i - 1]);
  const double md = num::mean(diffs);
  if (md != 0) {
    out.lin_coeff = num::stddev(diffs) / std::abs(md);
    out.is_lin = *out.lin_coeff <= kSpaceThreshold;
  } else {
    out.is_lin = false;
  }
  const bool positive = std::all_of(values.begin(), values.end(), [](double x) { return x > 0; });
  if (positive) {
    std::vector<double> ratios;
    for (std::size_t i = 1; i < values.size(); ++i) ratios.push_back(values[i] / values[i - 1]);
    const double mr = num::mean(ratios);
    out.log_coeff = num::stddev(ratios) / mr;
    out.is_log = *out.log_coeff <= kSpaceThreshold;
  }
  return out;
}

double histogram_entropy(std::span<const double> values, int bins) {
  if (values.empty()) return 0;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  std::vector<double> counts(static_cast<std::size_t>(bins), 0);
  for (double x : values) {
    int b = 0;
    if (hi > lo) b = std::min(bins - 1, static_cast<int>(std::floor((x - lo) / (hi - lo) * bins)));
    counts[static_cast<std::size_t>(b)] += 1;
  }
  return num::entropy_from_counts(counts);
}

std::vector<Outliers> outlier_features(std::span<const double> values) {
  std::vector<Outliers> out(4);
  if (values.empty()) return out;
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  const double q1 = num::percentile_sorted(s, 25);
  const double q3 = num::percentile_sorted(s, 75);
  const double iqr = q3 - q1;
  const double p1 = num::percentile_sorted(s, 1);
  const double p99 = num::percentile_sorted(s, 99);
  const double mean = num::mean(values);
  const double sd = num::stddev(values);
  std::size_t c[4] = {0, 0, 0, 0};
  for (double x : values) {
    if (x < q1 - 1.5 * iqr || x > q3 + 1.5 * iqr) ++c[0];
    if (x < q1 - 3 * iqr || x > q3 + 3 * iqr) ++c[1];
    if (x < p1 || x > p99) ++c[2];
    if (std::abs(x - mean) > 3 * sd) ++c[3];
  }
  for (int i = 0; i < 4; ++i) {
    out[i].has = c[i] > 0;
    out[i].fraction = static_cast<double>(c[i]) / static_cast<double>(values.size());
  }
  return out;
}

EditDistance edit_distance(std::string_view a, std::string_view b) {
  const auto x = decode_utf8(a);
  const auto y = decode_utf8(b);
  std::vector<std::size_t> prev(y.size() + 1), cur(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  EditDistance out;
  out.raw = prev[y.size()];
  const std::size_t longest = std::max(x.size(), y.size());
  out.normalized = longest == 0 ? 0.0 : static_cast<double>(out.raw) / static_cast<double>(longest);
  return out;
}

std::vector<std::string> tokenize_name(std::string_view name) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  auto cls = [](unsigned char c) {
    if (std::islower(c)) return 1;
    if (std::isupper(c)) return 2;
    if (std::isdigit(c)) return 3;
    if (c >= 0x80) return 1;  // non-ASCII letters stay inside their word
    return 0;
  };
  for (std::size_t i = 0; i < name.size(); ++i) {
    const auto c = static_cast<unsigned char>(name[i]);
    const int k = cls(c);
    if (k == 0) {
      flush();
      continue;
    }
    if (!cur.empty()) {
      const auto p = static_cast<unsigned char>(name[i - 1]);
      const int pk = cls(p);
      const bool next_lower = i + 1 < name.size() && std::islower(static_cast<unsigned char>(name[i + 1]));
      if ((pk == 1 && k == 2) || (pk == 2 && k == 2 && next_lower) || (pk == 3) != (k == 3)) flush();
    }
    cur.push_back(static_cast<char>(std::tolower(c)));
  }
  flush();
  return out;
}

SingleColumnFeatures extract_single_column_features(const Column& column) {
  SingleColumnFeatures f;
  f.level = Level::single_column;
  f.values.assign(kSingleColumnFeatureCount, std::nullopt);

  set(f, sc::length, static_cast<double>(column.size()));
  const auto g = column.general_type();
  const auto s = column.specific_type();
  set_flag(f, sc::is_categorical, g == GeneralType::categorical);
  set_flag(f, sc::is_quantitative, g == GeneralType::quantitative);
  set_flag(f, sc::is_temporal, g == GeneralType::temporal);
  set_flag(f, sc::is_string, s == SpecificType::string);
  set_flag(f, sc::is_boolean, s == SpecificType::boolean);
  set_flag(f, sc::is_integer, s == SpecificType::integer);
  set_flag(f, sc::is_decimal, s == SpecificType::decimal);
  set_flag(f, sc::is_datetime, s == SpecificType::datetime);

  if (g == GeneralType::quantitative || g == GeneralType::temporal) {
    const auto v = column.numeric_values();
    statistical_qt(f, v);
    if (g == GeneralType::quantitative) {
      distribution_q(f, v);
      outliers_q(f, v);
    }
  } else {
    statistical_c(f, column);
  }
  sequence(f, column);
  unique_missing(f, column);
  name_features(f, column.name());

  for (auto& v : f.values) {
    if (v && !std::isfinite(*v)) v.reset();
  }
  return f;
}

}  // namespace vizrec::features
