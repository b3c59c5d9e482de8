#pragma once

#include <stdexcept>
#include <string>

// Invalid inputs are reported with std::invalid_argument throughout the
// library. The types below cover the remaining failure classes the CLI maps
// to distinct exit codes.

namespace cinf {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when brute-force enumeration would exceed its budget.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a conditional distribution is requested on a zero-mass event.
class UndefinedConditionalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace cinf
