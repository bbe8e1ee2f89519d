#pragma once

#include <stdexcept>
#include <string>

namespace eigencoprime {

// Exit-code classes at the CLI boundary: usage 1, data 2, network 3.
enum class ErrorClass { usage = 1, data = 2, network = 3, internal = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what)
      : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorClass::usage, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorClass::data, what) {}
};

/// Requested index or bound lies beyond the coefficients we hold.
class InsufficientDataError : public DataError {
 public:
  explicit InsufficientDataError(const std::string& what) : DataError(what) {}
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public DataError {
 public:
  explicit ValidationError(const std::string& what) : DataError(what) {}
};

class CacheCorruptionError : public DataError {
 public:
  explicit CacheCorruptionError(const std::string& what) : DataError(what) {}
};

class NetworkError : public Error {
 public:
  explicit NetworkError(const std::string& what) : Error(ErrorClass::network, what) {}
};

/// Broken arithmetic invariant; indicates a bug, never bad input.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorClass::internal, what) {}
};

}  // namespace eigencoprime
