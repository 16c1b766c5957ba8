#include "vizrec/pipeline/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "vizrec/common/encoding.hpp"
#include "vizrec/common/error.hpp"
#include "vizrec/common/numeric.hpp"
#include "vizrec/common/parallel.hpp"

namespace vizrec::pipeline {

std::uint64_t RawMatrix::manifest_hash() const {
  std::string buf;
  for (const auto& c : columns) {
    buf += c.categorical ? "c:" : "n:";
    buf += c.name;
    buf += '\n';
  }
  return fnv1a64(buf);
}

std::size_t PreprocessorParams::output_width() const {
  std::size_t w = 0;
  for (const auto& f : features) w += f.categorical ? f.categories.size() : 1;
  return w;
}

std::vector<std::string> PreprocessorParams::output_names() const {
  std::vector<std::string> out;
  for (const auto& f : features) {
    if (f.categorical) {
      for (const auto& c : f.categories) out.push_back(f.name + "=" + c);
    } else {
      out.push_back(f.name);
    }
  }
  return out;
}

namespace {

FeatureParams fit_categorical(const RawFeatureColumn& col, std::span<const std::size_t> rows) {
  FeatureParams p;
  p.name = col.name;
  p.categorical = true;
  std::map<std::string, std::size_t> counts;
  for (std::size_t r : rows) {
    if (col.labels[r]) ++counts[*col.labels[r]];
  }
  std::size_t best = 0;
  for (const auto& [label, n] : counts) {
    p.categories.push_back(label);
    if (n > best) {  // ties keep the first label in sorted order
      best = n;
      p.impute_label = label;
    }
  }
  p.all_missing = counts.empty();
  return p;
}

FeatureParams fit_numeric(const RawFeatureColumn& col, std::span<const std::size_t> rows) {
  FeatureParams p;
  p.name = col.name;
  std::vector<double> present;
  present.reserve(rows.size());
  for (std::size_t r : rows) {
    if (col.numeric[r] && std::isfinite(*col.numeric[r])) present.push_back(*col.numeric[r]);
  }
  if (present.empty()) {
    p.all_missing = true;
    return p;
  }
  std::vector<double> sorted = present;
  std::sort(sorted.begin(), sorted.end());
  p.clip_low = num::percentile_sorted(sorted, 1);
  p.clip_high = num::percentile_sorted(sorted, 99);
  for (double& v : present) v = std::clamp(v, p.clip_low, p.clip_high);
  p.impute_value = num::mean(present);
  // Standardisation sees every fitted row: clipped values plus imputed ones.
  std::vector<double> full;
  full.reserve(rows.size());
  std::size_t k = 0;
  for (std::size_t r : rows) {
    const bool has = col.numeric[r] && std::isfinite(*col.numeric[r]);
    full.push_back(has ? present[k++] : p.impute_value);
  }
  p.mean = num::mean(full);
  const double sd = num::stddev(full);
  p.scale = sd > 0 ? sd : 1.0;
  return p;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> r(n);
  std::iota(r.begin(), r.end(), 0);
  return r;
}

}  // namespace

PreprocessorParams fit_preprocessor(const RawMatrix& m, std::span<const std::size_t> rows, FitAudit* audit) {
  if (rows.size() < 2) throw ValidationError("preprocessor needs at least two rows to fit");
  for (std::size_t r : rows) {
    if (r >= m.rows) throw InternalError("preprocessor fit row out of range");
  }
  PreprocessorParams p;
  p.manifest_hash = m.manifest_hash();
  p.fitted_rows = rows.size();
  p.features.resize(m.columns.size());
  parallel_for(m.columns.size(), [&](std::size_t c) {
    const auto& col = m.columns[c];
    p.features[c] = col.categorical ? fit_categorical(col, rows) : fit_numeric(col, rows);
  });
  if (audit) audit->rows_read.assign(rows.begin(), rows.end());
  return p;
}

PreprocessorParams fit_preprocessor(const RawMatrix& m) {
  const auto rows = all_rows(m.rows);
  return fit_preprocessor(m, rows);
}

Matrix apply_preprocessor(const PreprocessorParams& params, const RawMatrix& m, std::span<const std::size_t> rows) {
  if (m.manifest_hash() != params.manifest_hash || m.columns.size() != params.features.size()) {
    throw ValidationError("feature manifest does not match the fitted preprocessor");
  }
  std::vector<std::size_t> owned;
  if (rows.empty()) {
    owned = all_rows(m.rows);
    rows = owned;
  }
  Matrix out;
  out.rows = rows.size();
  out.cols = params.output_width();
  out.data.assign(out.rows * out.cols, 0.0);
  std::vector<std::size_t> offsets;
  std::size_t off = 0;
  for (const auto& f : params.features) {
    offsets.push_back(off);
    off += f.categorical ? f.categories.size() : 1;
  }
  parallel_for(out.rows, [&](std::size_t i) {
    const std::size_t r = rows[i];
    double* dst = out.data.data() + i * out.cols;
    for (std::size_t c = 0; c < params.features.size(); ++c) {
      const auto& f = params.features[c];
      const auto& col = m.columns[c];
      if (f.categorical) {
        const std::string& label = col.labels[r] ? *col.labels[r] : f.impute_label;
        auto it = std::lower_bound(f.categories.begin(), f.categories.end(), label);
        if (it != f.categories.end() && *it == label) dst[offsets[c] + static_cast<std::size_t>(it - f.categories.begin())] = 1.0;
        continue;
      }
      double v;
      if (f.all_missing) {
        v = 0.0;
      } else {
        const bool has = col.numeric[r] && std::isfinite(*col.numeric[r]);
        v = has ? std::clamp(*col.numeric[r], f.clip_low, f.clip_high) : f.impute_value;
        v = (v - f.mean) / f.scale;
      }
      dst[offsets[c]] = v;
    }
  });
  return out;
}

Matrix apply_preprocessor(const PreprocessorParams& params, const RawMatrix& m) {
  return apply_preprocessor(params, m, std::span<const std::size_t>{});
}

nlohmann::ordered_json to_json(const PreprocessorParams& p) {
  using J = nlohmann::ordered_json;
  J feats = J::array();
  for (const auto& f : p.features) {
    J e{{"name", f.name}, {"categorical", f.categorical}, {"all_missing", f.all_missing}};
    if (f.categorical) {
      e["categories"] = f.categories;
      e["impute"] = f.impute_label;
    } else {
      e["clip"] = encode_doubles(std::vector<double>{f.clip_low, f.clip_high});
      e["impute"] = encode_doubles(std::vector<double>{f.impute_value});
      e["standardize"] = encode_doubles(std::vector<double>{f.mean, f.scale});
    }
    feats.push_back(std::move(e));
  }
  return J{{"format", "vizrec-preprocessor"},
           {"version", PreprocessorParams::kVersion},
           {"manifest_hash", hex64(p.manifest_hash)},
           {"fitted_rows", p.fitted_rows},
           {"stages", {"one_hot", "clip_p1_p99", "impute", "standardize"}},
           {"features", feats}};
}

PreprocessorParams preprocessor_from_json(const nlohmann::ordered_json& j) {
  try {
    if (j.at("format") != "vizrec-preprocessor") throw ValidationError("not a preprocessor document");
    if (j.at("version").get<int>() != PreprocessorParams::kVersion) {
      throw ValidationError("unsupported preprocessor version " + j.at("version").dump());
    }
    PreprocessorParams p;
    p.manifest_hash = std::stoull(j.at("manifest_hash").get<std::string>(), nullptr, 16);
    p.fitted_rows = j.at("fitted_rows").get<std::size_t>();
    for (const auto& e : j.at("features")) {
      FeatureParams f;
      f.name = e.at("name").get<std::string>();
      f.categorical = e.at("categorical").get<bool>();
      f.all_missing = e.at("all_missing").get<bool>();
      if (f.categorical) {
        f.categories = e.at("categories").get<std::vector<std::string>>();
        f.impute_label = e.at("impute").get<std::string>();
      } else {
        const auto clip = decode_doubles(e.at("clip").get<std::string>());
        const auto imp = decode_doubles(e.at("impute").get<std::string>());
        const auto st = decode_doubles(e.at("standardize").get<std::string>());
        if (clip.size() != 2 || imp.size() != 1 || st.size() != 2) throw ValidationError("bad numeric block");
        f.clip_low = clip[0];
        f.clip_high = clip[1];
        f.impute_value = imp[0];
        f.mean = st[0];
        f.scale = st[1];
      }
      p.features.push_back(std::move(f));
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed preprocessor document: ") + e.what());
  }
}

}  // namespace vizrec::pipeline
