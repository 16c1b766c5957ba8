#pragma once

#include <string>
#include <vector>

#include "vizrec/choices/extract.hpp"

namespace vizrec::choices {

/// Builds traces realising the choices. Requires a homogeneous visualization type,
/// every encoding's mark equal to it, and single-axis flags that agree with how
/// many columns each axis holds; otherwise throws ValidationError.
std::vector<TraceSpec> build_traces(const ingest::Dataset& dataset, const DesignChoices& choices);

/// Document form of build_traces; validated by re-extraction before returning.
Json emit_chart_spec(const ingest::Dataset& dataset, const DesignChoices& choices);

/// Axis heuristic for a bare mark type: first temporal column on X, else the first
/// categorical, else the first column; every other column on Y.
DesignChoices default_choices(const ingest::Dataset& dataset, const std::string& visualization_type);

/// Choices from explicit axis assignments; single-axis and shared-axis flags follow
/// from the assignment (shared when an axis holds one column and the other several).
DesignChoices choices_from_axes(const std::string& visualization_type, const std::vector<std::size_t>& x_columns,
                                const std::vector<std::size_t>& y_columns);

/// Equality on the fields emit controls: type, shared axis, and per-instance mark,
/// axis and single-axis flag.
bool equivalent(const DesignChoices& a, const DesignChoices& b);

}  // namespace vizrec::choices
