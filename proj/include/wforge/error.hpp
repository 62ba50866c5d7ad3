#pragma once

#include <stdexcept>
#include <string>

namespace wforge {

// Malformed arguments, shapes or labels.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Request exceeds a configured size limit (e.g. too many qubits for a dense operator).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An optimization diverged or produced non-finite values. `diagnostics` carries
// whatever state was available at the failure point.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, std::string diagnostics = {})
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

// Pipeline configuration problems, reported with the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wforge
