#pragma once

#include <stdexcept>
#include <string>

namespace bicarleman {

// Error taxonomy used across the library.  The CLI maps these onto exit
// codes, so new error sites should pick the closest existing class.

// Mismatched vector/matrix dimensions or indices outside a structure.
struct dimension_error : std::invalid_argument {
  explicit dimension_error(const std::string& what) : std::invalid_argument(what) {}
};

// An iterative routine failed to reach its target residual.
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// A requested derivative order or option exceeds the configured limits.
struct config_error : std::invalid_argument {
  explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

// No admissible subsequence/assignment exists for the given data.
struct infeasible_error : std::runtime_error {
  explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration or pool ran out of indices.
struct range_error : std::out_of_range {
  explicit range_error(const std::string& what) : std::out_of_range(what) {}
};

// Malformed input document.
struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bicarleman
