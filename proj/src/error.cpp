#include "magnify/error.hpp"

namespace magnify {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "InvalidInput";
    case ErrorKind::duplicate_points: return "DuplicatePoints";
    case ErrorKind::zero_diameter: return "ZeroDiameter";
    case ErrorKind::invalid_scale: return "InvalidScale";
    case ErrorKind::degenerate_space: return "DegenerateSpace";
    case ErrorKind::degenerate_input: return "DegenerateInput";
    case ErrorKind::grid_mismatch: return "GridMismatch";
    case ErrorKind::cardinality_mismatch: return "CardinalityMismatch";
    case ErrorKind::not_positive_definite: return "NotPositiveDefinite";
    case ErrorKind::singular_matrix: return "SingularMatrix";
    case ErrorKind::no_convergence: return "NoConvergence";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

bool is_numerical(ErrorKind kind) noexcept {
  return kind == ErrorKind::not_positive_definite || kind == ErrorKind::singular_matrix ||
         kind == ErrorKind::no_convergence;
}

}  // namespace magnify
