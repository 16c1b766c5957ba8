#include "vizrec/eval/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "vizrec/choices/emit.hpp"
#include "vizrec/common/encoding.hpp"
#include "vizrec/common/error.hpp"
#include "vizrec/common/parallel.hpp"
#include "vizrec/common/rng.hpp"

namespace vizrec::eval {

std::string_view to_string(SynthRule r) {
  switch (r) {
    case SynthRule::string_bar_else_line: return "string_bar_else_line";
    case SynthRule::string_bar_date_line_else_scatter: return "string_bar_date_line_else_scatter";
  }
  return "?";
}

SynthRule parse_synth_rule(std::string_view text) {
  if (text == "string_bar_else_line") return SynthRule::string_bar_else_line;
  if (text == "string_bar_date_line_else_scatter") return SynthRule::string_bar_date_line_else_scatter;
  throw UsageError("unknown synthetic rule '" + std::string(text) + "'");
}

std::vector<std::string> rule_vocabulary(SynthRule r) {
  if (r == SynthRule::string_bar_else_line) return {"line", "bar"};
  return {"scatter", "line", "bar"};
}

namespace {

enum class Kind { normal, uniform_int, sequence, exponential, string, date };

constexpr std::array<const char*, 16> kWords = {"north", "south", "east",  "west",  "alpha", "beta",
                                                "gamma", "delta", "red",   "green", "blue",  "amber",
                                                "oak",   "pine",  "maple", "cedar"};
constexpr std::array<const char*, 12> kNumericNames = {"value", "count", "price", "score",  "amount", "rate",
                                                       "total", "size",  "level", "weight", "height", "index"};
constexpr std::array<const char*, 6> kStringNames = {"category", "region", "group", "label", "type", "name"};
constexpr std::array<const char*, 4> kDateNames = {"date", "day", "period", "when"};

std::string fmt(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string civil_date(std::int64_t days) {
  // days since 1970-01-01 to y-m-d (Howard Hinnant's algorithm)
  days += 719468;
  const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
  const auto doe = static_cast<unsigned>(days - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y0 = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  const std::int64_t y = y0 + (m <= 2);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02u", static_cast<long long>(y), m, d);
  return buf;
}

std::vector<std::string> make_values(Kind k, std::size_t rows, Rng& rng) {
  std::vector<std::string> v(rows);
  switch (k) {
    case Kind::normal: {
      const double mu = rng.uniform() * 200 - 100, sd = 0.5 + rng.uniform() * 20;
      for (auto& s : v) s = fmt(mu + sd * rng.normal(), 3);
      break;
    }
    case Kind::uniform_int: {
      const auto hi = 5 + rng.index(500);
      for (auto& s : v) s = std::to_string(rng.index(hi));
      break;
    }
    case Kind::sequence: {
      const double start = std::floor(rng.uniform() * 100), step = 1 + std::floor(rng.uniform() * 5);
      for (std::size_t i = 0; i < rows; ++i) v[i] = fmt(start + step * static_cast<double>(i), 0);
      break;
    }
    case Kind::exponential: {
      const double scale = 1 + rng.uniform() * 50;
      for (auto& s : v) s = fmt(-std::log(1.0 - rng.uniform()) * scale, 2);
      break;
    }
    case Kind::string: {
      const std::size_t levels = 2 + rng.index(8);  // at most 9, below the word count
      const std::size_t offset = rng.index(kWords.size());
      for (auto& s : v) {
        const std::size_t w = rng.index(levels);
        s = kWords[(offset + w) % kWords.size()];
      }
      break;
    }
    case Kind::date: {
      std::int64_t day = 10000 + static_cast<std::int64_t>(rng.index(8000));
      const std::int64_t step = 1 + static_cast<std::int64_t>(rng.index(30));
      for (auto& s : v) {
        s = civil_date(day);
        day += step;
      }
      break;
    }
  }
  return v;
}

const char* name_for(Kind k, Rng& rng) {
  switch (k) {
    case Kind::string: return kStringNames[rng.index(kStringNames.size())];
    case Kind::date: return kDateNames[rng.index(kDateNames.size())];
    default: return kNumericNames[rng.index(kNumericNames.size())];
  }
}

std::string apply_rule(SynthRule rule, bool has_string, bool has_date) {
  if (has_string) return "bar";
  if (rule == SynthRule::string_bar_else_line) return "line";
  return has_date ? "line" : "scatter";
}

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SynthOptions& o) {
  if (o.min_columns < 2 || o.max_columns < o.min_columns) throw UsageError("synthetic tables need 2 or more columns");
  if (o.min_rows < 3 || o.max_rows < o.min_rows) throw UsageError("synthetic tables need 3 or more rows");
  if (o.noise < 0 || o.noise > 1) throw UsageError("noise must be in [0, 1]");
  const auto vocab = rule_vocabulary(o.rule);

  SyntheticCorpus out;
  out.corpus.provenance = "synthetic:" + std::string(to_string(o.rule)) + ":seed=" + std::to_string(o.seed);
  out.corpus.records.resize(o.datasets);
  out.planted.resize(o.datasets);
  out.labels.resize(o.datasets);

  parallel_for(o.datasets, [&](std::size_t i) {
    Rng rng(derive_seed(o.seed, "synth_record", i));
    const std::size_t rows = o.min_rows + rng.index(o.max_rows - o.min_rows + 1);
    const std::size_t cols = o.min_columns + rng.index(o.max_columns - o.min_columns + 1);
    const bool want_string = rng.bernoulli(0.5);
    const bool want_date = o.rule == SynthRule::string_bar_date_line_else_scatter && rng.bernoulli(0.5);

    std::vector<Kind> kinds;
    if (want_string) kinds.push_back(Kind::string);
    if (want_date) kinds.push_back(Kind::date);
    static constexpr Kind numeric[] = {Kind::normal, Kind::uniform_int, Kind::sequence, Kind::exponential};
    while (kinds.size() < cols) kinds.push_back(numeric[rng.index(4)]);
    // extra string columns only where the rule already says bar
    if (want_string && cols > 2 && rng.bernoulli(0.3)) kinds.back() = Kind::string;
    std::vector<std::size_t> perm(kinds.size());
    for (std::size_t c = 0; c < perm.size(); ++c) perm[c] = c;
    rng.shuffle(std::span<std::size_t>(perm));

    std::vector<ingest::Column> columns;
    std::vector<Kind> placed(kinds.size());
    for (std::size_t c = 0; c < kinds.size(); ++c) {
      const Kind k = kinds[perm[c]];
      placed[c] = k;
      std::string name = std::string(name_for(k, rng)) + "_" + std::to_string(c);
      columns.emplace_back(std::move(name), make_values(k, rows, rng));
    }
    char fid[32];
    std::snprintf(fid, sizeof fid, "synth-%06zu", i);
    ingest::Dataset data(fid, std::move(columns));

    bool has_string = false, has_date = false;
    for (const auto& col : data.columns()) {
      has_string |= col.general_type() == ingest::GeneralType::categorical;
      has_date |= col.general_type() == ingest::GeneralType::temporal;
    }
    const std::string planted = apply_rule(o.rule, has_string, has_date);
    std::string label = planted;
    if (o.noise > 0 && rng.bernoulli(o.noise)) {
      std::vector<std::string> others;
      for (const auto& v : vocab) {
        if (v != planted) others.push_back(v);
      }
      label = others[rng.index(others.size())];
    }

    // x: first string column for bars, else first date, else first column
    std::size_t x = 0;
    for (std::size_t c = 0; c < placed.size(); ++c) {
      if (placed[c] == Kind::date) {
        x = c;
        break;
      }
    }
    for (std::size_t c = 0; c < placed.size(); ++c) {
      if (placed[c] == Kind::string) {
        x = c;
        break;
      }
    }
    std::vector<std::size_t> ys;
    for (std::size_t c = 0; c < placed.size(); ++c) {
      if (c != x) ys.push_back(c);
    }
    const auto choices = choices::choices_from_axes(label, {x}, ys);
    const auto doc = choices::emit_chart_spec(data, choices);

    ingest::CorpusRecord rec;
    rec.fid = fid;
    rec.user_id = "user-" + std::to_string(rng.index(std::max<std::size_t>(1, o.datasets / 5)));
    rec.data = std::move(data);
    rec.specification = doc.at("traces");
    rec.layout = ingest::Json{{"title", std::string("chart ") + fid}};
    out.corpus.records[i] = std::move(rec);
    out.planted[i] = planted;
    out.labels[i] = label;
  });
  return out;
}

}  // namespace vizrec::eval
