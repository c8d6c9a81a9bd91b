#pragma once

#include "magnify/metric_core.hpp"

#include <span>
#include <vector>

namespace magnify {

/// zeta(i, j) = exp(-t * d(i, j)).
struct SimilarityMatrix {
  Matrix zeta;
  double scale_t = 0.0;
};

enum class SolverNote { cholesky, cholesky_jittered };

const char* to_string(SolverNote note);

struct MagnitudeResult {
  double magnitude = 0.0;  // sum of weights
  Vector weights;          // solution of zeta * w = 1
  double scale_t = 0.0;
  SolverNote solver_note = SolverNote::cholesky;
  // ||x||^2 for L x = 1 with zeta = L L^T; a second route to the magnitude.
  double quadratic_form = 0.0;
};

struct KernelOptions {
  // Retry a failed factorization once with 1e-12 * n added to the diagonal.
  bool jitter = false;
};

SimilarityMatrix similarity_matrix(const DistanceMatrix& d, double t);

/// Magnitude and weighting vector of the space scaled by t, via a Cholesky
/// factorization of the similarity matrix and two triangular solves.
MagnitudeResult magnitude_and_weights(const DistanceMatrix& d, double t,
                                      const KernelOptions& options = {});

/// One result per scale, in input order. Scales are evaluated independently
/// and in parallel when OpenMP is available.
std::vector<MagnitudeResult> magnitude_function(const DistanceMatrix& d, std::span<const double> ts,
                                                const KernelOptions& options = {});

// Magnitude only; same factorization path, weights discarded.
double magnitude_at(const DistanceMatrix& d, double t, const KernelOptions& options = {});

}  // namespace magnify
