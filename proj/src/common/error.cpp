#include "vizrec/common/error.hpp"

namespace vizrec {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t offset)
    : DataError(what + " (line " + std::to_string(line) + ", offset " + std::to_string(offset) + ")"),
      line_(line),
      offset_(offset) {}

}  // namespace vizrec
