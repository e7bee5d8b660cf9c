#pragma once

#include <stdexcept>
#include <string>

namespace rotacover {

// A computation ran out of its configured budget (points, candidates,
// frequencies, subdivisions). Callers may retry with a larger budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs violate a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A construction finished but its own recheck disagrees with what it claims.
class InvariantFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rotacover
