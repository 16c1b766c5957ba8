#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vizrec/choices/chart_spec.hpp"
#include "vizrec/ingest/corpus.hpp"

namespace vizrec::choices {

inline constexpr std::string_view kMixedMark = "mixed";

/// Choices for one (column, axis) instance. A column on both axes has two.
struct EncodingChoice {
  std::size_t column = 0;
  Axis axis = Axis::x;
  std::string mark_type;      // trace type, or "mixed" when its traces disagree
  bool is_single_axis = false;  // the only column encoded on that axis
  bool single_slot = false;     // every referencing trace fills only this slot
  bool operator==(const EncodingChoice&) const = default;
};

struct VisualizationChoices {
  std::optional<std::string> visualization_type;  // present iff homogeneous
  bool has_shared_axis = false;
  bool is_homogeneous = false;
  bool operator==(const VisualizationChoices&) const = default;
};

struct DesignChoices {
  VisualizationChoices visualization;
  std::vector<EncodingChoice> encodings;  // sorted by (column, axis)
  bool operator==(const DesignChoices&) const = default;
};

VisualizationChoices extract_visualization_choices(const std::vector<TraceSpec>& traces);
std::vector<EncodingChoice> extract_encoding_choices(const std::vector<TraceSpec>& traces);
DesignChoices extract_design_choices(const std::vector<TraceSpec>& traces);

/// Parses the record's specification against its data and extracts its choices.
DesignChoices extract_record_choices(const ingest::CorpusRecord& record);

Json to_json(const DesignChoices& c, const ingest::Dataset& dataset);

}  // namespace vizrec::choices
