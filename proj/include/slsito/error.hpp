#pragma once

#include <stdexcept>
#include <string>

namespace slsito {

/// Precondition violated by a caller-supplied value (grid sizes, epsilon, indices).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Missing callback, unknown experiment/function id, malformed config.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A user callback or quadrature produced a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slsito
