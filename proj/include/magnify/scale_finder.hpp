#pragma once

#include "magnify/magnitude_kernel.hpp"

namespace magnify {

struct ConvergenceSpec {
  double epsilon_prop = 0.05;  // target magnitude is (1 - epsilon_prop) * n
  double t_tolerance = 1e-6;   // relative bracket width at which bisection stops
  int max_bracket_doublings = 64;
  int max_bisections = 200;

  void validate() const;
};

struct ConvergencePoint {
  double t_conv = 0.0;
  double achieved_magnitude = 0.0;
  int evaluations_used = 0;
};

/// Scale at which the magnitude function reaches (1 - epsilon_prop) * n.
///
/// Starts at t = 1, doubles (or halves) until the target is bracketed and
/// then bisects. The returned t_conv is the upper end of the final bracket,
/// so M(t_conv) >= target always holds.
ConvergencePoint find_convergence_scale(const DistanceMatrix& d, const ConvergenceSpec& spec = {},
                                        const KernelOptions& options = {});

}  // namespace magnify
