#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stallings {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::string const& message, std::size_t line, std::size_t column)
      : Error("parse error at " + std::to_string(line) + ":" +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class NotAutomorphism : public Error {
 public:
  using Error::Error;
};

class NotMember : public Error {
 public:
  using Error::Error;
};

class NotASubgroup : public Error {
 public:
  using Error::Error;
};

class InvalidAutomaton : public Error {
 public:
  using Error::Error;
};

class InvalidMorphism : public Error {
 public:
  using Error::Error;
};

// Thrown when an enumeration would exceed a configured cap.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string const& cap_name, std::string const& message)
      : Error(message), cap_name_(cap_name) {}

  std::string const& cap_name() const noexcept { return cap_name_; }

 private:
  std::string cap_name_;
};

class PartitionBudgetExceeded : public BudgetExceeded {
 public:
  PartitionBudgetExceeded(std::size_t vertices, unsigned long long cap)
      : BudgetExceeded("bell_cap",
                       "fringe needs Bell(" + std::to_string(vertices) +
                           ") partitions, above bell_cap=" +
                           std::to_string(cap)) {}
};

class ElementMissingBase : public Error {
 public:
  using Error::Error;
};

class ResultOutsideLattice : public Error {
 public:
  using Error::Error;
};

}  // namespace stallings
