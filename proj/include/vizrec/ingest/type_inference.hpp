#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "vizrec/ingest/dataset.hpp"

namespace vizrec::ingest {

/// Fraction of non-missing cells that must parse as a type for it to win.
inline constexpr double kTypeThreshold = 0.8;

/// Empty, "NA", "NaN", "null" (case-insensitive, surrounding whitespace ignored).
bool is_missing_token(std::string_view cell);

/// Precedence boolean -> integer -> decimal -> datetime -> string; the first type that
/// parses at least kTypeThreshold of the non-missing cells wins. All-missing input is
/// (categorical, string).
ColumnType infer_column_type(std::span<const std::string> raw_values);

std::optional<bool> parse_boolean_token(std::string_view cell, bool allow_binary_digits);
std::optional<std::int64_t> parse_integer(std::string_view cell);
std::optional<double> parse_decimal(std::string_view cell);

/// Accepted layouts (no locale guessing):
///   YYYY-MM-DD, YYYY-MM, YYYY/MM/DD, MM/DD/YYYY,
///   each date optionally followed by [T or space]HH:MM[:SS[.fff]],
///   ISO forms additionally accept a trailing Z or +HH:MM / -HH:MM / +HHMM offset.
/// Returns seconds since 1970-01-01T00:00:00Z.
std::optional<double> parse_datetime(std::string_view cell);

std::string_view trim(std::string_view s);

}  // namespace vizrec::ingest
