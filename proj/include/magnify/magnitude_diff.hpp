#pragma once

#include "magnify/scale_finder.hpp"

#include <optional>
#include <string>
#include <vector>

namespace magnify {

/// Scales s_j = j / m for j = 1..m. s = 0 is never evaluated; integration
/// uses an analytic anchor there instead.
class EvaluationGrid {
 public:
  explicit EvaluationGrid(int m = 64);

  // 64 steps up to 1000 points, 32 beyond.
  static EvaluationGrid default_for(Eigen::Index n);

  int steps() const noexcept { return m_; }
  const std::vector<double>& s_values() const noexcept { return s_; }

  bool operator==(const EvaluationGrid& other) const { return m_ == other.m_; }

 private:
  int m_;
  std::vector<double> s_;
};

struct MagnitudeProfile {
  EvaluationGrid grid;
  std::vector<double> values;  // M(s_j * t_conv)
  double t_conv = 0.0;
  Eigen::Index n = 0;
};

struct WeightProfile {
  EvaluationGrid grid;
  Matrix weights;  // n x m, column j holds w(s_j * t_conv)
  double t_conv = 0.0;
  Eigen::Index n = 0;
  std::optional<std::vector<std::string>> ids;
};

struct RescaledProfiles {
  MagnitudeProfile magnitude;
  WeightProfile weights;
  ConvergencePoint convergence;
};

enum class IntegrationMethod { riemann_sum, trapezoid, romberg };

const char* to_string(IntegrationMethod method);
IntegrationMethod parse_integration_method(const std::string& name);

/// Integrates samples f(0), f(1/m), ..., f(1) over [0, 1]. Romberg needs
/// m to be a power of two.
double integrate_unit_interval(const std::vector<double>& nodes, IntegrationMethod method);

/// Finds t_conv and evaluates magnitude and weights along the grid. The
/// distances must already be diameter-normalized.
RescaledProfiles rescaled_profile(const DistanceMatrix& d, const ConvergenceSpec& spec,
                                  const EvaluationGrid& grid, const KernelOptions& options = {});

/// Area between the cardinality-normalized re-scaled magnitude functions.
/// riemann_sum is (1/m) * sum_j |.|; the other methods integrate with the
/// s = 0 node anchored at |1/n_x - 1/n_y|.
double magnitude_profile_difference(const MagnitudeProfile& px, const MagnitudeProfile& py,
                                    IntegrationMethod method = IntegrationMethod::trapezoid);

/// Per-scale mean absolute weight deviation w_XY(j) for aligned spaces.
std::vector<double> weight_difference_function(const WeightProfile& wx, const WeightProfile& wy);

/// Aggregate of w_XY over the grid: riemann_sum is the plain sum over j;
/// trapezoid and romberg integrate over [0, 1] with the s = 0 node set to
/// the j = 1 value.
double magnitude_weight_difference(const WeightProfile& wx, const WeightProfile& wy,
                                   IntegrationMethod method = IntegrationMethod::trapezoid);

/// Same aggregation as magnitude_weight_difference applied to each point;
/// the mean of the result equals the weight difference.
Vector per_point_weight_deviation(const WeightProfile& wx, const WeightProfile& wy,
                                  IntegrationMethod method = IntegrationMethod::trapezoid);

}  // namespace magnify
