#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vizrec/ingest/dataset.hpp"

namespace vizrec::ingest {

/// RFC 4180 records: quoted fields, doubled-quote escapes, CRLF or LF line ends,
/// embedded newlines inside quotes. A leading UTF-8 BOM is skipped.
/// Throws ParseError (with line and byte offset) on malformed input.
std::vector<std::vector<std::string>> parse_csv_records(std::string_view text);

struct CsvPosition {
  std::size_t line = 1;    // 1-based line where the record starts
  std::size_t offset = 0;  // byte offset of the record start
};
std::vector<std::vector<std::string>> parse_csv_records(std::string_view text, std::vector<CsvPosition>* positions);

std::string escape_csv_field(std::string_view field);
std::string write_csv_row(const std::vector<std::string>& fields);

/// Header row plus raw cells of every column.
std::string write_csv(const Dataset& dataset);

enum class TableFormat { csv, corpus_record };

/// Parses a table. Ragged rows are parse errors; no header cells is EmptyInputError.
Dataset parse_table(std::string_view bytes, TableFormat format, std::string id = {});

}  // namespace vizrec::ingest
