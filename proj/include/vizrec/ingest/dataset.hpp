#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vizrec::ingest {

enum class GeneralType { categorical, quantitative, temporal };
enum class SpecificType { string, boolean, integer, decimal, datetime };

std::string_view to_string(GeneralType t);
std::string_view to_string(SpecificType t);
GeneralType general_type_of(SpecificType t);

/// Typed cell. Datetimes are stored as epoch seconds (double).
using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct ColumnType {
  GeneralType general = GeneralType::categorical;
  SpecificType specific = SpecificType::string;
  friend bool operator==(const ColumnType&, const ColumnType&) = default;
};

/// One column of a table: the raw text cells plus their typed parse.
/// Immutable after construction.
class Column {
 public:
  /// Infers the type from the raw cells and parses them.
  Column(std::string name, std::vector<std::string> raw_values);
  /// Parses with a fixed type (cells that fail to parse become missing).
  Column(std::string name, std::vector<std::string> raw_values, SpecificType type);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& raw_values() const noexcept { return raw_; }
  const std::vector<Cell>& parsed_values() const noexcept { return parsed_; }
  const std::vector<bool>& missing_mask() const noexcept { return missing_; }
  GeneralType general_type() const noexcept { return type_.general; }
  SpecificType specific_type() const noexcept { return type_.specific; }
  ColumnType type() const noexcept { return type_; }
  std::size_t size() const noexcept { return raw_.size(); }
  std::size_t missing_count() const noexcept { return missing_count_; }
  std::size_t present_count() const noexcept { return raw_.size() - missing_count_; }

  /// Present values as doubles in row order. Quantitative and temporal columns map
  /// directly (datetimes as epoch seconds), booleans map to 0/1, strings yield nothing.
  std::vector<double> numeric_values() const;
  /// Present cells as canonical text in row order (trimmed raw text for strings,
  /// shortest round-trip form for numbers).
  std::vector<std::string> present_keys() const;
  /// Canonical key of row i; empty optional-like result ("") is never produced for present cells.
  std::string key_at(std::size_t row) const;

  friend bool operator==(const Column& a, const Column& b);

 private:
  void parse();

  std::string name_;
  std::vector<std::string> raw_;
  std::vector<Cell> parsed_;
  std::vector<bool> missing_;
  ColumnType type_;
  std::size_t missing_count_ = 0;
};

/// A table; column positions are the identity (names may repeat).
class Dataset {
 public:
  Dataset() = default;
  /// Throws ValidationError if column lengths disagree.
  Dataset(std::string id, std::vector<Column> columns);

  const std::string& id() const noexcept { return id_; }
  const std::vector<Column>& columns() const noexcept { return columns_; }
  const Column& column(std::size_t i) const { return columns_.at(i); }
  std::size_t column_count() const noexcept { return columns_.size(); }
  std::size_t row_count() const noexcept { return rows_; }

  /// First column with the given name, or npos.
  std::size_t find_column(std::string_view name) const noexcept;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Stable content fingerprint over names and raw cells (id excluded).
  std::uint64_t content_hash() const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  std::string id_;
  std::vector<Column> columns_;
  std::size_t rows_ = 0;
};

}  // namespace vizrec::ingest
