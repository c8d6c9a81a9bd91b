#include <doctest.h>

#include "magnify/error.hpp"
#include "magnify/scale_finder.hpp"
#include "support/generators.hpp"

#include <cmath>
#include <random>

using namespace magnify;
using magnify::testing::rel_diff;

namespace {

DistanceMatrix unit_pair() {
  Matrix d(2, 2);
  d << 0, 1, 1, 0;
  return DistanceMatrix(d, MetricTag::precomputed);
}

DistanceMatrix random_normalized(std::mt19937_64& rng, Eigen::Index n, Eigen::Index dims) {
  return normalize_by_diameter(pairwise_distances(PointCloud(testing::random_points(rng, n, dims)), MetricKind::euclidean));
}

}  // namespace

TEST_CASE("two points: t_conv solves 2 / (1 + exp(-t)) = (1 - eps) * 2") {
  // 2/(1+e^-t) = 2(1-eps)  =>  t = ln((1-eps)/eps)
  ConvergenceSpec spec;
  const auto p = find_convergence_scale(unit_pair(), spec);
  CHECK(rel_diff(p.t_conv, std::log(19.0)) <= 1e-5);
  CHECK(p.achieved_magnitude >= 1.9);
  CHECK(p.achieved_magnitude - 1.9 <= 1e-6 * 2);

  // 2/(1+e^-t) = 1.5 is the target for epsilon 0.25, giving ln 3.
  spec.epsilon_prop = 0.25;
  const auto q = find_convergence_scale(unit_pair(), spec);
  CHECK(rel_diff(q.t_conv, std::log(3.0)) <= 1e-5);
}

TEST_CASE("target below the t -> 0 limit cannot be bracketed") {
  ConvergenceSpec spec;
  spec.epsilon_prop = 0.5;
  CHECK_THROWS_AS(find_convergence_scale(unit_pair(), spec), Error);
}

TEST_CASE("errors: degenerate space and invalid spec") {
  Matrix one = Matrix::Zero(1, 1);
  try {
    find_convergence_scale(DistanceMatrix(one, MetricTag::precomputed));
    FAIL("expected DegenerateSpace");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_space);
  }
  ConvergenceSpec bad;
  bad.epsilon_prop = 1.5;
  CHECK_THROWS_AS(find_convergence_scale(unit_pair(), bad), Error);
  bad.epsilon_prop = 0.05;
  bad.t_tolerance = 0.0;
  CHECK_THROWS_AS(find_convergence_scale(unit_pair(), bad), Error);
}

TEST_CASE("bracket search gives up after max_bracket_doublings") {
  ConvergenceSpec spec;
  spec.max_bracket_doublings = 2;  // t can reach only 4
  std::mt19937_64 rng(3);
  const auto d = random_normalized(rng, 50, 2);
  try {
    find_convergence_scale(d, spec);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_convergence);
  }
}

TEST_CASE("halving branch when M(1) already exceeds the target") {
  // Two far-apart clusters scaled up: magnitude at t = 1 is already ~n.
  Matrix d(3, 3);
  d << 0, 50, 60, 50, 0, 40, 60, 40, 0;
  const DistanceMatrix big(d, MetricTag::precomputed);
  const auto p = find_convergence_scale(big);
  CHECK(p.t_conv < 1.0);
  CHECK(magnitude_at(big, p.t_conv) >= 0.95 * 3);
  CHECK(magnitude_at(big, p.t_conv * (1.0 - 2e-6)) < 0.95 * 3);
}

TEST_CASE("target hit, post-bracket check and determinism on random spaces") {
  std::mt19937_64 rng(19);
  const ConvergenceSpec spec;
  for (int trial = 0; trial < 15; ++trial) {
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng() % 40);
    const auto d = random_normalized(rng, n, 1 + static_cast<Eigen::Index>(rng() % 4));
    const auto p = find_convergence_scale(d, spec);
    const double target = 0.95 * static_cast<double>(n);
    CHECK(p.achieved_magnitude >= target);
    // bracket width 1e-6 relative bounds how far past the crossing we are
    CHECK(magnitude_at(d, p.t_conv * (1.0 - 2e-6)) < target + 1e-6 * static_cast<double>(n));
    CHECK(magnitude_at(d, p.t_conv * (1.0 + 10 * spec.t_tolerance)) >= target);
    CHECK(p.evaluations_used > 0);
    const auto again = find_convergence_scale(d, spec);
    CHECK(again.t_conv == p.t_conv);
  }
}

TEST_CASE("scale equivariance: t_conv(c d) = t_conv(d) / c") {
  std::mt19937_64 rng(23);
  const ConvergenceSpec spec;
  for (int trial = 0; trial < 5; ++trial) {
    const auto d = random_normalized(rng, 25, 3);
    const double base = find_convergence_scale(d, spec).t_conv;
    for (double c : {0.1, 2.0, 10.0}) {
      const double scaled_t = find_convergence_scale(scaled(d, c), spec).t_conv;
      CHECK(rel_diff(scaled_t * c, base) <= 2 * spec.t_tolerance);
    }
  }
}

TEST_CASE("larger epsilon gives smaller or equal t_conv") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    const auto d = random_normalized(rng, 30, 2);
    double prev = INFINITY;
    for (double eps : {0.01, 0.05, 0.1, 0.3, 0.6}) {
      ConvergenceSpec spec;
      spec.epsilon_prop = eps;
      const double t = find_convergence_scale(d, spec).t_conv;
      CHECK(t <= prev);
      prev = t;
    }
  }
}
