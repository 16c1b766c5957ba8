#include "vizrec/ingest/dataset.hpp"

#include <set>

#include "vizrec/common/encoding.hpp"
#include "vizrec/common/error.hpp"
#include "vizrec/ingest/type_inference.hpp"

namespace vizrec::ingest {

std::string_view to_string(GeneralType t) {
  switch (t) {
    case GeneralType::categorical: return "categorical";
    case GeneralType::quantitative: return "quantitative";
    case GeneralType::temporal: return "temporal";
  }
  return "categorical";
}

std::string_view to_string(SpecificType t) {
  switch (t) {
    case SpecificType::string: return "string";
    case SpecificType::boolean: return "boolean";
    case SpecificType::integer: return "integer";
    case SpecificType::decimal: return "decimal";
    case SpecificType::datetime: return "datetime";
  }
  return "string";
}

GeneralType general_type_of(SpecificType t) {
  switch (t) {
    case SpecificType::integer:
    case SpecificType::decimal: return GeneralType::quantitative;
    case SpecificType::datetime: return GeneralType::temporal;
    case SpecificType::string:
    case SpecificType::boolean: return GeneralType::categorical;
  }
  return GeneralType::categorical;
}

Column::Column(std::string name, std::vector<std::string> raw_values)
    : name_(std::move(name)), raw_(std::move(raw_values)) {
  type_ = infer_column_type(raw_);
  parse();
}

Column::Column(std::string name, std::vector<std::string> raw_values, SpecificType type)
    : name_(std::move(name)), raw_(std::move(raw_values)), type_{general_type_of(type), type} {
  parse();
}

void Column::parse() {
  parsed_.assign(raw_.size(), std::monostate{});
  missing_.assign(raw_.size(), true);
  bool binary_digits = false;
  if (type_.specific == SpecificType::boolean) {
    std::set<std::string_view> distinct;
    for (const auto& c : raw_)
      if (!is_missing_token(c)) distinct.insert(trim(c));
    binary_digits = distinct == std::set<std::string_view>{"0", "1"};
  }
  for (std::size_t i = 0; i < raw_.size(); ++i) {
    const std::string& c = raw_[i];
    if (is_missing_token(c)) continue;
    Cell cell;
    switch (type_.specific) {
      case SpecificType::string: cell = std::string(trim(c)); break;
      case SpecificType::boolean:
        if (auto v = parse_boolean_token(c, binary_digits)) cell = *v;
        break;
      case SpecificType::integer:
        if (auto v = parse_integer(c)) cell = *v;
        break;
      case SpecificType::decimal:
        if (auto v = parse_decimal(c)) cell = *v;
        break;
      case SpecificType::datetime:
        if (auto v = parse_datetime(c)) cell = *v;
        break;
    }
    if (!std::holds_alternative<std::monostate>(cell)) {
      parsed_[i] = std::move(cell);
      missing_[i] = false;
    }
  }
  missing_count_ = 0;
  for (bool m : missing_) missing_count_ += m ? 1 : 0;
}

std::vector<double> Column::numeric_values() const {
  std::vector<double> out;
  if (type_.specific == SpecificType::string) return out;
  out.reserve(present_count());
  for (const auto& cell : parsed_) {
    if (const auto* b = std::get_if<bool>(&cell)) out.push_back(*b ? 1.0 : 0.0);
    else if (const auto* i = std::get_if<std::int64_t>(&cell)) out.push_back(static_cast<double>(*i));
    else if (const auto* d = std::get_if<double>(&cell)) out.push_back(*d);
  }
  return out;
}

std::string Column::key_at(std::size_t row) const {
  const Cell& cell = parsed_.at(row);
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* b = std::get_if<bool>(&cell)) return *b ? "true" : "false";
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return {};
}

std::vector<std::string> Column::present_keys() const {
  std::vector<std::string> out;
  out.reserve(present_count());
  for (std::size_t i = 0; i < parsed_.size(); ++i)
    if (!missing_[i]) out.push_back(key_at(i));
  return out;
}

bool operator==(const Column& a, const Column& b) {
  return a.name_ == b.name_ && a.raw_ == b.raw_ && a.type_ == b.type_ && a.parsed_ == b.parsed_ &&
         a.missing_ == b.missing_;
}

Dataset::Dataset(std::string id, std::vector<Column> columns) : id_(std::move(id)), columns_(std::move(columns)) {
  rows_ = columns_.empty() ? 0 : columns_.front().size();
  for (const auto& c : columns_) {
    if (c.size() != rows_) {
      throw ValidationError("column '" + c.name() + "' has " + std::to_string(c.size()) + " cells, expected " +
                            std::to_string(rows_));
    }
  }
}

std::size_t Dataset::find_column(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name() == name) return i;
  return npos;
}

std::uint64_t Dataset::content_hash() const {
  std::string buf;
  for (const auto& c : columns_) {
    buf += std::to_string(c.name().size());
    buf += ':';
    buf += c.name();
    for (const auto& cell : c.raw_values()) {
      buf += std::to_string(cell.size());
      buf += ':';
      buf += cell;
    }
    buf += '|';
  }
  return fnv1a64(buf);
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.id_ == b.id_ && a.rows_ == b.rows_ && a.columns_ == b.columns_;
}

}  // namespace vizrec::ingest
