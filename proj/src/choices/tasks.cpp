#include "vizrec/choices/tasks.hpp"

#include <algorithm>
#include <cctype>

#include "vizrec/common/error.hpp"

namespace vizrec::choices {

std::string_view to_string(Task t) {
  switch (t) {
    case Task::vt2: return "VT2";
    case Task::vt3: return "VT3";
    case Task::vt6: return "VT6";
    case Task::hsa: return "HSA";
    case Task::mt2: return "MT2";
    case Task::mt3: return "MT3";
    case Task::mt6: return "MT6";
    case Task::isa: return "ISA";
    case Task::xy: return "XY";
  }
  return "?";
}

Task parse_task(std::string_view text) {
  std::string up;
  for (char c : text) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  for (Task t : kAllTasks) {
    if (to_string(t) == up) return t;
  }
  throw UsageError("unknown task '" + std::string(text) + "' (expected VT2, VT3, VT6, HSA, MT2, MT3, MT6, ISA or XY)");
}

const std::vector<std::string>& vocabulary(Task t) {
  static const std::vector<std::string> two = {"line", "bar"};
  static const std::vector<std::string> three = {"scatter", "line", "bar"};
  static const std::vector<std::string> vt6 = {"scatter", "line", "bar", "box", "histogram", "pie"};
  static const std::vector<std::string> mt6 = {"scatter", "line", "bar", "box", "histogram", "heatmap"};
  static const std::vector<std::string> boolean = {"false", "true"};
  static const std::vector<std::string> axes = {"x", "y"};
  switch (t) {
    case Task::vt2:
    case Task::mt2: return two;
    case Task::vt3:
    case Task::mt3: return three;
    case Task::vt6: return vt6;
    case Task::mt6: return mt6;
    case Task::hsa:
    case Task::isa: return boolean;
    case Task::xy: return axes;
  }
  return boolean;
}

bool is_visualization_level(Task t) { return t == Task::vt2 || t == Task::vt3 || t == Task::vt6 || t == Task::hsa; }

std::optional<std::size_t> class_index(Task t, std::string_view label) {
  const auto& v = vocabulary(t);
  auto it = std::find(v.begin(), v.end(), label);
  if (it == v.end()) return std::nullopt;
  return static_cast<std::size_t>(it - v.begin());
}

std::optional<std::size_t> visualization_label(Task t, const DesignChoices& choices) {
  const auto& vis = choices.visualization;
  switch (t) {
    case Task::vt2:
    case Task::vt3:
    case Task::vt6:
      if (!vis.is_homogeneous || !vis.visualization_type) return std::nullopt;
      return class_index(t, *vis.visualization_type);
    case Task::hsa: return vis.has_shared_axis ? 1 : 0;
    default: return std::nullopt;
  }
}

std::optional<std::size_t> encoding_label(Task t, const EncodingChoice& e) {
  switch (t) {
    case Task::mt2:
    case Task::mt3:
    case Task::mt6: return class_index(t, e.mark_type);
    case Task::isa: return e.is_single_axis ? 1 : 0;
    case Task::xy: return e.axis == Axis::x ? 0 : 1;
    default: return std::nullopt;
  }
}

}  // namespace vizrec::choices
