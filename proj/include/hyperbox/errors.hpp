#ifndef HYPERBOX_ERRORS_HPP
#define HYPERBOX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hyperbox {

/// Broken precondition inside the library (wrong dimension, bad box, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid user-facing configuration (epsilon, problem name, flags).
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or out-of-sequence message on the solver wire protocol.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalarization result that violates the solution contract
/// (e.g. lambda negative beyond tolerance, s below z).
class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The search line of a scalarization query misses the feasible set.
class NoIntersection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleProblem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedProblem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SessionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& what) {
  if (!condition) {
    throw ContractViolation(what);
  }
}

}  // namespace detail
}  // namespace hyperbox

#endif  // HYPERBOX_ERRORS_HPP
