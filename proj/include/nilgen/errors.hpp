#ifndef NILGEN_ERRORS_HPP
#define NILGEN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nilgen {

/// Raised when an enumeration or construction would exceed a configured size guard.
/// CLI maps this to exit code 1 with a machine-readable reason.
class guard_error : public std::runtime_error {
 public:
  explicit guard_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on malformed user input (bad field spec, unparsable identity, ...).
/// CLI maps this to exit code 2.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a documented precondition is violated (distinct from guard/input).
class precondition_error : public std::runtime_error {
 public:
  explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nilgen

#endif
