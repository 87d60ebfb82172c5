#pragma once

#include <stdexcept>
#include <string>

namespace iontrap {

// Retained Fock-space mass fell below 1 - tail_tol.
class TruncationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class OutOfRangeError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

// Carrier-RWA constructors need omega0 == omega.
class ResonanceError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// eta^2 (1 + 2m) / 2 >= 1: the second-order cosine expansion no longer
// gives a positive effective coupling.
class ExpansionInvalidError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class DimensionMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class NumericalIntegrityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Envelope window does not hold enough samples of the trace.
class ResolutionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Bad run configuration. `path` names the offending key.
class ConfigError : public std::invalid_argument {
public:
  ConfigError(std::string path, const std::string& what)
      : std::invalid_argument(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

} // namespace iontrap
