#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qk {

/// Caller passed something outside an operation's domain (bad vertex id,
/// non-independent set, digraph with a sink where none is allowed, ...).
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition that cannot be checked cheaply up front failed
/// during the computation (e.g. a required kernel does not exist).
class precondition_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exhaustive search was asked to run beyond its size budget.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A proven invariant was observed to fail. Always a bug or a finding.
class invariant_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class parse_error : public std::runtime_error {
 public:
  parse_error(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace qk
