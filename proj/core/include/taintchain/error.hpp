#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace taintchain {

// Base class for every failure the library throws. Chain validation findings
// are returned as data and never thrown.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. Carries the 1-based line the problem was found on.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Taint sources that are malformed, conflicting, or do not resolve.
class SourceError : public Error {
 public:
  using Error::Error;
};

// A query that does not fit the chain: unknown txid, bad interval, empty range.
class QueryError : public Error {
 public:
  using Error::Error;
};

class GeneratorError : public Error {
 public:
  using Error::Error;
};

}  // namespace taintchain
