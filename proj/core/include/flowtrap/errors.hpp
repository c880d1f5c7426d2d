#ifndef FLOWTRAP_ERRORS_HPP
#define FLOWTRAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace flowtrap {

// Error taxonomy. The CLI maps each type to a distinct exit code, so library
// code should throw the most specific type that applies.

// Invalid user-supplied configuration (bad dimensions, non-positive
// tolerances, malformed flags). CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A requested computation exceeds a hard budget (net size cap, round budget,
// integer overflow in a schedule). CLI exit code 3.
class ResourceLimitError : public std::runtime_error {
 public:
  explicit ResourceLimitError(const std::string& what)
      : std::runtime_error(what) {}
};

// An oracle or algorithm contract was broken at runtime: non-finite values,
// negative values where nonnegativity is required, queries outside the
// declared domain, or a certified guarantee that failed to materialize
// (which indicates the objective violated its smoothness contract).
// CLI exit code 4.
class ContractError : public std::runtime_error {
 public:
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

// A self-check / verification suite failed. CLI exit code 5.
class VerifyError : public std::runtime_error {
 public:
  explicit VerifyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace flowtrap

#endif  // FLOWTRAP_ERRORS_HPP
