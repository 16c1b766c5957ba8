#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vizrec/choices/extract.hpp"

namespace vizrec::choices {

enum class Task { vt2, vt3, vt6, hsa, mt2, mt3, mt6, isa, xy };
inline constexpr Task kAllTasks[] = {Task::vt2, Task::vt3, Task::vt6, Task::hsa, Task::mt2,
                                     Task::mt3, Task::mt6, Task::isa, Task::xy};

std::string_view to_string(Task t);
/// Accepts the ids case-insensitively ("VT2", "mt6", ...). Throws UsageError otherwise.
Task parse_task(std::string_view text);

/// Class vocabulary in label-index order.
const std::vector<std::string>& vocabulary(Task t);

/// Visualization-level tasks label a whole chart; the rest label (column, axis) instances.
bool is_visualization_level(Task t);

/// Class index of a chart for a visualization-level task, or nullopt when the chart
/// falls outside the task (heterogeneous, or a type missing from the vocabulary).
std::optional<std::size_t> visualization_label(Task t, const DesignChoices& choices);

/// Class index of one encoding instance for an encoding-level task, or nullopt.
std::optional<std::size_t> encoding_label(Task t, const EncodingChoice& e);

std::optional<std::size_t> class_index(Task t, std::string_view label);

}  // namespace vizrec::choices
