#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wfg {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed model text. Carries a 1-based source position.
class ParseError : public Error {
public:
  ParseError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  int line_;
  int column_;
};

class SortError : public Error {
public:
  using Error::Error;
};

class EvalError : public Error {
public:
  using Error::Error;
};

class BackendError : public Error {
public:
  using Error::Error;
};

/// An enumeration query hit its value budget, so the result set is partial.
class NotTotalError : public Error {
public:
  NotTotalError(const std::string& node, std::size_t num)
      : Error("enumeration not total at node " + node + " (num = " + std::to_string(num) +
              "); the abstraction is too large for the query budget"),
        node_(node), num_(num) {}

  const std::string& node() const noexcept { return node_; }
  std::size_t num() const noexcept { return num_; }

private:
  std::string node_;
  std::size_t num_;
};

/// A runtime monitor observed a measure that failed to decrease.
class MonitorError : public Error {
public:
  using Error::Error;
};

} // namespace wfg
