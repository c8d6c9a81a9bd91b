#pragma once

#include <stdexcept>
#include <string>

namespace magnify {

enum class ErrorKind {
  invalid_input,
  duplicate_points,
  zero_diameter,
  invalid_scale,
  degenerate_space,
  degenerate_input,
  grid_mismatch,
  cardinality_mismatch,
  not_positive_definite,
  singular_matrix,
  no_convergence,
};

const char* to_string(ErrorKind kind);

// Failures of the numerics (factorization, root bracketing) rather than of
// the inputs.
bool is_numerical(ErrorKind kind) noexcept;

// Single exception type for the library; `kind()` says what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

  bool is_numerical() const noexcept { return magnify::is_numerical(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace magnify
