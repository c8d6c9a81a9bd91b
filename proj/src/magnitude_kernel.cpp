#include "magnify/magnitude_kernel.hpp"

#include "magnify/error.hpp"

#include <cmath>
#include <exception>
#include <optional>
#include <sstream>

#if defined(__SSE__) || defined(_M_X64)
#include <xmmintrin.h>
#define MAGNIFY_HAS_MXCSR 1
#endif

namespace magnify {

namespace {

// At large t most similarities underflow into the subnormal range, where
// arithmetic is an order of magnitude slower. Their size is far below the
// rounding error of the unit diagonal, so flushing them to zero is harmless.
class FlushDenormals {
 public:
#ifdef MAGNIFY_HAS_MXCSR
  FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040); }  // FTZ | DAZ
  ~FlushDenormals() { _mm_setcsr(saved_); }

 private:
  unsigned int saved_;
#endif
};

void check_scale(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    std::ostringstream os;
    os << "scale must be positive and finite, got " << t;
    throw Error(ErrorKind::invalid_scale, os.str());
  }
}

std::string at_scale(double t) {
  std::ostringstream os;
  os.precision(17);
  os << " (t = " << t << ")";
  return os.str();
}

}  // namespace

const char* to_string(SolverNote note) {
  return note == SolverNote::cholesky ? "cholesky" : "cholesky_jittered";
}

SimilarityMatrix similarity_matrix(const DistanceMatrix& d, double t) {
  check_scale(t);
  d.require_magnitude_ready();
  const Eigen::Index n = d.size();
  Matrix zeta(n, n);
  const Matrix& dist = d.values();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double v = std::exp(-t * dist(i, j));
      zeta(i, j) = v;
      zeta(j, i) = v;
    }
    zeta(j, j) = 1.0;
  }
  return {std::move(zeta), t};
}

MagnitudeResult magnitude_and_weights(const DistanceMatrix& d, double t, const KernelOptions& options) {
  const FlushDenormals flush;
  SimilarityMatrix sim = similarity_matrix(d, t);
  const Eigen::Index n = d.size();

  SolverNote note = SolverNote::cholesky;
  Eigen::LLT<Matrix, Eigen::Lower> llt(sim.zeta);
  if (llt.info() != Eigen::Success) {
    if (!options.jitter) {
      throw Error(ErrorKind::not_positive_definite,
                  "Cholesky factorization of the similarity matrix failed" + at_scale(t));
    }
    sim.zeta.diagonal().array() += 1e-12 * static_cast<double>(n);
    llt.compute(sim.zeta);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorKind::not_positive_definite,
                  "Cholesky factorization failed after diagonal jitter" + at_scale(t));
    }
    note = SolverNote::cholesky_jittered;
  }

  Vector x = Vector::Ones(n);
  llt.matrixL().solveInPlace(x);
  const double quadratic_form = x.squaredNorm();
  llt.matrixU().solveInPlace(x);

  MagnitudeResult result;
  result.magnitude = x.sum();
  result.weights = std::move(x);
  result.scale_t = t;
  result.solver_note = note;
  result.quadratic_form = quadratic_form;
  if (!std::isfinite(result.magnitude) || !(result.magnitude > 0.0)) {
    throw Error(ErrorKind::not_positive_definite, "non-positive magnitude" + at_scale(t));
  }
  return result;
}

std::vector<MagnitudeResult> magnitude_function(const DistanceMatrix& d, std::span<const double> ts,
                                                const KernelOptions& options) {
  if (ts.empty()) throw Error(ErrorKind::invalid_scale, "no scales given");
  for (double t : ts) check_scale(t);
  d.require_magnitude_ready();

  const auto count = static_cast<std::ptrdiff_t>(ts.size());
  std::vector<MagnitudeResult> results(ts.size());
  std::vector<std::optional<Error>> errors(ts.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    try {
      results[k] = magnitude_and_weights(d, ts[k], options);
    } catch (const Error& e) {
      errors[k] = e;
    }
  }
  for (const auto& e : errors) {
    if (e) throw *e;
  }
  return results;
}

double magnitude_at(const DistanceMatrix& d, double t, const KernelOptions& options) {
  return magnitude_and_weights(d, t, options).magnitude;
}

}  // namespace magnify
