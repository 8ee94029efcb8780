#ifndef RICHARDSON_ERRORS_HPP
#define RICHARDSON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace richardson {

// Precondition violations: bad parameters, malformed inputs, rejected configs.
// The CLI maps these to exit code 1.
class InvalidInputError : public std::runtime_error {
 public:
  explicit InvalidInputError(const std::string& what) : std::runtime_error(what) {}
};

// Problem size exceeds a hard implementation cap (e.g. oracle vertex limit).
// The CLI maps these to exit code 2.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace richardson

#endif
