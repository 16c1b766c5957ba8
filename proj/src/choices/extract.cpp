#include "vizrec/choices/extract.hpp"

#include <map>
#include <set>

namespace vizrec::choices {

VisualizationChoices extract_visualization_choices(const std::vector<TraceSpec>& traces) {
  VisualizationChoices v;
  std::set<std::string> types;
  std::map<std::pair<int, std::size_t>, int> uses;
  for (const auto& t : traces) {
    types.insert(t.trace_type);
    if (t.x) ++uses[{0, t.x->column}];
    if (t.y) ++uses[{1, t.y->column}];
  }
  v.is_homogeneous = types.size() == 1;
  if (v.is_homogeneous) v.visualization_type = *types.begin();
  for (const auto& [key, n] : uses) v.has_shared_axis |= n >= 2;
  return v;
}

std::vector<EncodingChoice> extract_encoding_choices(const std::vector<TraceSpec>& traces) {
  struct Acc {
    std::set<std::string> types;
    bool single_slot = true;
  };
  std::map<std::pair<std::size_t, int>, Acc> inst;
  std::set<std::size_t> on_axis[2];
  for (const auto& t : traces) {
    const bool both = t.x && t.y;
    if (t.x) {
      auto& a = inst[{t.x->column, 0}];
      a.types.insert(t.trace_type);
      a.single_slot &= !both;
      on_axis[0].insert(t.x->column);
    }
    if (t.y) {
      auto& a = inst[{t.y->column, 1}];
      a.types.insert(t.trace_type);
      a.single_slot &= !both;
      on_axis[1].insert(t.y->column);
    }
  }
  std::vector<EncodingChoice> out;
  for (const auto& [key, acc] : inst) {
    EncodingChoice e;
    e.column = key.first;
    e.axis = key.second == 0 ? Axis::x : Axis::y;
    e.mark_type = acc.types.size() == 1 ? *acc.types.begin() : std::string(kMixedMark);
    e.is_single_axis = on_axis[key.second].size() == 1;
    e.single_slot = acc.single_slot;
    out.push_back(std::move(e));
  }
  return out;
}

DesignChoices extract_design_choices(const std::vector<TraceSpec>& traces) {
  return {extract_visualization_choices(traces), extract_encoding_choices(traces)};
}

DesignChoices extract_record_choices(const ingest::CorpusRecord& record) {
  return extract_design_choices(parse_chart_spec(record.specification, record.data));
}

Json to_json(const DesignChoices& c, const ingest::Dataset& dataset) {
  Json enc = Json::array();
  for (const auto& e : c.encodings) {
    enc.push_back(Json{{"column", e.column},
                       {"name", dataset.column(e.column).name()},
                       {"axis", std::string(to_string(e.axis))},
                       {"mark_type", e.mark_type},
                       {"is_single_axis", e.is_single_axis},
                       {"single_slot", e.single_slot}});
  }
  Json vis{{"visualization_type", c.visualization.visualization_type ? Json(*c.visualization.visualization_type)
                                                                      : Json(nullptr)},
           {"has_shared_axis", c.visualization.has_shared_axis},
           {"is_homogeneous", c.visualization.is_homogeneous}};
  return Json{{"visualization", vis}, {"encodings", enc}};
}

}  // namespace vizrec::choices
