#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vizrec {

/// Broad failure classes; each maps to a stable CLI exit code.
enum class ErrorKind { usage = 1, data = 2, internal = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class ValidationError : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

class EmptyInputError : public DataError {
 public:
  using DataError::DataError;
};

/// Malformed input; line is 1-based, offset is the byte offset into the input.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t offset);
  std::size_t line() const noexcept { return line_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t line_;
  std::size_t offset_;
};

/// Transport-level failure that a caller may retry.
class NetworkError : public Error {
 public:
  NetworkError(const std::string& what, bool retryable)
      : Error(ErrorKind::data, what), retryable_(retryable) {}
  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorKind::internal, what) {}
};

}  // namespace vizrec
