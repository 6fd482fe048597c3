#pragma once

#include <stdexcept>
#include <string>

namespace cfnn {

// Precondition violations: bad dimensions, probabilities outside their
// domain, empty inputs. The CLI maps these to exit code 2.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Failures that only show up while running: divergence during training,
// exceeded wall-clock budgets, unreadable files. CLI exit code 3.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace cfnn
