#include "vizrec/choices/emit.hpp"

#include <algorithm>
#include <set>

namespace vizrec::choices {

namespace {

Json reference_for(const ingest::Dataset& d, std::size_t col) {
  const auto& name = d.column(col).name();
  std::size_t same = 0;
  for (const auto& c : d.columns()) same += c.name() == name;
  if (same == 1) return name;
  return col;
}

}  // namespace

std::vector<TraceSpec> build_traces(const ingest::Dataset& dataset, const DesignChoices& choices) {
  const auto& vis = choices.visualization;
  if (!vis.is_homogeneous || !vis.visualization_type) {
    throw ValidationError("chart specs can only be emitted for a single visualization type");
  }
  const std::string& type = *vis.visualization_type;
  if (choices.encodings.empty()) throw ValidationError("no encodings to emit");
  std::vector<std::size_t> xs, ys;
  std::set<std::pair<std::size_t, Axis>> seen;
  for (const auto& e : choices.encodings) {
    if (e.column >= dataset.column_count()) {
      throw ValidationError("encoding references column " + std::to_string(e.column) + " of " +
                            std::to_string(dataset.column_count()));
    }
    if (e.mark_type != type) {
      throw ValidationError("column " + std::to_string(e.column) + " has mark '" + e.mark_type +
                            "' in a homogeneous '" + type + "' chart");
    }
    if (!seen.insert({e.column, e.axis}).second) throw ValidationError("duplicate encoding instance");
    (e.axis == Axis::x ? xs : ys).push_back(e.column);
  }
  for (const auto& e : choices.encodings) {
    const std::size_t n = e.axis == Axis::x ? xs.size() : ys.size();
    if (e.is_single_axis != (n == 1)) {
      throw ValidationError("contradictory single-axis flag for column " + std::to_string(e.column) + " on " +
                            std::string(to_string(e.axis)) + " (axis holds " + std::to_string(n) + " columns)");
    }
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());

  std::vector<std::pair<std::optional<std::size_t>, std::optional<std::size_t>>> slots;
  if (vis.has_shared_axis) {
    if (!xs.empty() && !ys.empty()) {
      slots.push_back({xs[0], ys[0]});
      for (std::size_t j = 1; j < ys.size(); ++j) slots.push_back({xs[0], ys[j]});
      for (std::size_t i = 1; i < xs.size(); ++i) slots.push_back({xs[i], ys[0]});
      if (xs.size() == 1 && ys.size() == 1) slots.push_back({xs[0], ys[0]});
    } else {
      const auto& only = xs.empty() ? ys : xs;
      const bool on_x = !xs.empty();
      auto slot = [&](std::size_t c) {
        return on_x ? std::make_pair(std::optional<std::size_t>(c), std::optional<std::size_t>())
                    : std::make_pair(std::optional<std::size_t>(), std::optional<std::size_t>(c));
      };
      slots.push_back(slot(only[0]));
      for (std::size_t c : only) slots.push_back(slot(c));
    }
  } else {
    const std::size_t n = std::max(xs.size(), ys.size());
    for (std::size_t k = 0; k < n; ++k) {
      slots.push_back({k < xs.size() ? std::optional<std::size_t>(xs[k]) : std::nullopt,
                       k < ys.size() ? std::optional<std::size_t>(ys[k]) : std::nullopt});
    }
  }

  std::vector<TraceSpec> traces;
  for (const auto& [x, y] : slots) {
    TraceSpec t;
    t.trace_type = type;
    t.supported = is_supported_trace_type(type);
    if (x) t.x = ColumnRef{reference_for(dataset, *x), *x};
    if (y) t.y = ColumnRef{reference_for(dataset, *y), *y};
    if (type == "scatter") t.extra["mode"] = "markers";
    traces.push_back(std::move(t));
  }
  return traces;
}

Json emit_chart_spec(const ingest::Dataset& dataset, const DesignChoices& choices) {
  const auto traces = build_traces(dataset, choices);
  Json doc = to_json(traces);
  const auto back = extract_design_choices(parse_chart_spec(doc, dataset));
  if (!equivalent(back, choices)) throw InternalError("emitted chart spec does not reproduce its choices");
  return doc;
}

DesignChoices choices_from_axes(const std::string& visualization_type, const std::vector<std::size_t>& x_columns,
                                const std::vector<std::size_t>& y_columns) {
  DesignChoices c;
  c.visualization.is_homogeneous = true;
  c.visualization.visualization_type = visualization_type;
  c.visualization.has_shared_axis =
      (x_columns.size() == 1 && y_columns.size() >= 2) || (y_columns.size() == 1 && x_columns.size() >= 2);
  for (std::size_t col : x_columns) {
    c.encodings.push_back({col, Axis::x, visualization_type, x_columns.size() == 1, y_columns.empty()});
  }
  for (std::size_t col : y_columns) {
    c.encodings.push_back({col, Axis::y, visualization_type, y_columns.size() == 1, x_columns.empty()});
  }
  std::sort(c.encodings.begin(), c.encodings.end(), [](const EncodingChoice& a, const EncodingChoice& b) {
    return std::pair(a.column, a.axis) < std::pair(b.column, b.axis);
  });
  return c;
}

DesignChoices default_choices(const ingest::Dataset& dataset, const std::string& visualization_type) {
  if (dataset.column_count() == 0) throw ValidationError("dataset has no columns");
  std::size_t x = 0;
  bool found = false;
  for (auto want : {ingest::GeneralType::temporal, ingest::GeneralType::categorical}) {
    for (std::size_t i = 0; i < dataset.column_count() && !found; ++i) {
      if (dataset.column(i).general_type() == want) {
        x = i;
        found = true;
      }
    }
    if (found) break;
  }
  std::vector<std::size_t> ys;
  for (std::size_t i = 0; i < dataset.column_count(); ++i) {
    if (i != x) ys.push_back(i);
  }
  return choices_from_axes(visualization_type, {x}, ys);
}

bool equivalent(const DesignChoices& a, const DesignChoices& b) {
  if (!(a.visualization == b.visualization)) return false;
  if (a.encodings.size() != b.encodings.size()) return false;
  auto sorted = [](std::vector<EncodingChoice> v) {
    std::sort(v.begin(), v.end(), [](const EncodingChoice& p, const EncodingChoice& q) {
      return std::pair(p.column, p.axis) < std::pair(q.column, q.axis);
    });
    return v;
  };
  const auto ea = sorted(a.encodings);
  const auto eb = sorted(b.encodings);
  for (std::size_t i = 0; i < ea.size(); ++i) {
    const auto& x = ea[i];
    const auto& y = eb[i];
    if (x.column != y.column || x.axis != y.axis || x.mark_type != y.mark_type ||
        x.is_single_axis != y.is_single_axis) {
      return false;
    }
  }
  return true;
}

}  // namespace vizrec::choices
