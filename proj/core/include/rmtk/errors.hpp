#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rmtk {

// One violated invariant: where it happened and which rule broke.
struct Violation {
  std::string path;  // e.g. "products[1].frat5[3]"
  std::string rule;  // e.g. "frat5 > 1"
};

std::string describe(const std::vector<Violation>& violations);

// Malformed input document (bad syntax, wrong types, missing fields).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally well-formed input that breaks one or more invariants.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : std::runtime_error(describe(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Numerical failure: non-convergence, empty demand, exhausted node budget.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No price assignment can satisfy the capacity constraint.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rmtk
