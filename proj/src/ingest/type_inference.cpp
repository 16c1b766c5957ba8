#include "vizrec/ingest/type_inference.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <set>

namespace vizrec::ingest {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Reads exactly `count` digits at `pos`.
std::optional<int> read_digits(std::string_view s, std::size_t& pos, std::size_t count) {
  if (pos + count > s.size()) return std::nullopt;
  int v = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const char c = s[pos + i];
    if (!is_digit(c)) return std::nullopt;
    v = v * 10 + (c - '0');
  }
  pos += count;
  return v;
}

std::optional<double> civil_seconds(int y, int m, int d, int hh, int mm, double ss) {
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || hh < 0 || hh > 23 || mm < 0 || mm > 59 || ss < 0.0 || ss >= 61.0) return std::nullopt;
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<double>(days) * 86400.0 + hh * 3600.0 + mm * 60.0 + ss;
}

// Parses "HH:MM[:SS[.fff]]" starting at pos.
bool read_time(std::string_view s, std::size_t& pos, int& hh, int& mm, double& ss) {
  auto h = read_digits(s, pos, 2);
  if (!h || pos >= s.size() || s[pos] != ':') return false;
  ++pos;
  auto m = read_digits(s, pos, 2);
  if (!m) return false;
  hh = *h;
  mm = *m;
  ss = 0.0;
  if (pos < s.size() && s[pos] == ':') {
    ++pos;
    auto sec = read_digits(s, pos, 2);
    if (!sec) return false;
    ss = *sec;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      double scale = 0.1;
      std::size_t digits = 0;
      while (pos < s.size() && is_digit(s[pos])) {
        ss += (s[pos] - '0') * scale;
        scale /= 10.0;
        ++pos;
        ++digits;
      }
      if (digits == 0) return false;
    }
  }
  return true;
}

// Optional "Z", "+HH:MM", "-HH:MM", "+HHMM"; returns offset seconds to subtract.
std::optional<double> read_zone(std::string_view s, std::size_t& pos) {
  if (pos == s.size()) return 0.0;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
    return 0.0;
  }
  if (s[pos] != '+' && s[pos] != '-') return std::nullopt;
  const double sign = s[pos] == '-' ? -1.0 : 1.0;
  ++pos;
  auto h = read_digits(s, pos, 2);
  if (!h) return std::nullopt;
  if (pos < s.size() && s[pos] == ':') ++pos;
  auto m = read_digits(s, pos, 2);
  if (!m || *h > 23 || *m > 59) return std::nullopt;
  return sign * (*h * 3600.0 + *m * 60.0);
}

}  // namespace

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool is_missing_token(std::string_view cell) {
  const auto t = trim(cell);
  return t.empty() || iequals(t, "na") || iequals(t, "nan") || iequals(t, "null");
}

std::optional<bool> parse_boolean_token(std::string_view cell, bool allow_binary_digits) {
  const auto t = trim(cell);
  if (iequals(t, "true") || iequals(t, "yes")) return true;
  if (iequals(t, "false") || iequals(t, "no")) return false;
  if (allow_binary_digits) {
    if (t == "1") return true;
    if (t == "0") return false;
  }
  return std::nullopt;
}

std::optional<std::int64_t> parse_integer(std::string_view cell) {
  auto t = trim(cell);
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  if (t.empty()) return std::nullopt;
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_decimal(std::string_view cell) {
  auto t = trim(cell);
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  if (t.empty()) return std::nullopt;
  // from_chars also accepts inf/nan spellings; only plain numerals are numbers here.
  const char first = t.front() == '-' && t.size() > 1 ? t[1] : t.front();
  if (!is_digit(first) && first != '.') return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<double> parse_datetime(std::string_view cell) {
  const auto s = trim(cell);
  if (s.size() < 7) return std::nullopt;
  std::size_t pos = 0;
  int y = 0, m = 0, d = 1;
  bool iso = false;
  if (s.size() >= 7 && is_digit(s[0]) && is_digit(s[3]) && (s[4] == '-' || s[4] == '/')) {
    const char sep = s[4];
    auto yy = read_digits(s, pos, 4);
    if (!yy) return std::nullopt;
    y = *yy;
    ++pos;
    auto mo = read_digits(s, pos, 2);
    if (!mo) return std::nullopt;
    m = *mo;
    if (pos < s.size() && s[pos] == sep) {
      ++pos;
      auto dd = read_digits(s, pos, 2);
      if (!dd) return std::nullopt;
      d = *dd;
    } else if (sep == '/') {
      return std::nullopt;  // YYYY/MM alone is not accepted
    }
    iso = sep == '-';
  } else if (s.size() >= 10 && s[2] == '/' && s[5] == '/') {
    auto mo = read_digits(s, pos, 2);
    ++pos;
    auto dd = read_digits(s, pos, 2);
    ++pos;
    auto yy = read_digits(s, pos, 4);
    if (!mo || !dd || !yy) return std::nullopt;
    m = *mo;
    d = *dd;
    y = *yy;
  } else {
    return std::nullopt;
  }
  int hh = 0, mm = 0;
  double ss = 0.0;
  double zone = 0.0;
  if (pos < s.size()) {
    if (s[pos] != 'T' && s[pos] != ' ') return std::nullopt;
    if (s[pos] == 'T' && !iso) return std::nullopt;
    ++pos;
    if (!read_time(s, pos, hh, mm, ss)) return std::nullopt;
    if (iso) {
      auto z = read_zone(s, pos);
      if (!z) return std::nullopt;
      zone = *z;
    }
    if (pos != s.size()) return std::nullopt;
  }
  auto secs = civil_seconds(y, m, d, hh, mm, ss);
  if (!secs) return std::nullopt;
  return *secs - zone;
}

ColumnType infer_column_type(std::span<const std::string> raw_values) {
  std::vector<std::string_view> present;
  present.reserve(raw_values.size());
  for (const auto& c : raw_values)
    if (!is_missing_token(c)) present.push_back(trim(c));
  if (present.empty()) return {GeneralType::categorical, SpecificType::string};

  const double n = static_cast<double>(present.size());
  auto passes = [&](auto&& accepts) {
    std::size_t ok = 0;
    for (auto v : present)
      if (accepts(v)) ++ok;
    return static_cast<double>(ok) >= kTypeThreshold * n;
  };

  std::set<std::string_view> distinct(present.begin(), present.end());
  const bool binary_digits = distinct == std::set<std::string_view>{"0", "1"};

  if (passes([&](std::string_view v) { return parse_boolean_token(v, binary_digits).has_value(); }))
    return {GeneralType::categorical, SpecificType::boolean};
  if (passes([](std::string_view v) { return parse_integer(v).has_value(); }))
    return {GeneralType::quantitative, SpecificType::integer};
  if (passes([](std::string_view v) { return parse_decimal(v).has_value(); }))
    return {GeneralType::quantitative, SpecificType::decimal};
  if (passes([](std::string_view v) { return parse_datetime(v).has_value(); }))
    return {GeneralType::temporal, SpecificType::datetime};
  return {GeneralType::categorical, SpecificType::string};
}

}  // namespace vizrec::ingest
