#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace settag {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data (corpus files, model files, split records).
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : DataError(source + ":" + std::to_string(line) + ": " + what),
        source_(source),
        line_(line) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

// A serialized artifact was written by an incompatible format version.
class FormatVersionError : public DataError {
 public:
  using DataError::DataError;
};

// Numerical failure while fitting a model.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace settag
