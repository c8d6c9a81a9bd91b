#include "magnify/magnitude_diff.hpp"

#include "magnify/error.hpp"

#include <cmath>
#include <sstream>

namespace magnify {

namespace {

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

double trapezoid_with_stride(const std::vector<double>& f, std::size_t stride) {
  const std::size_t last = f.size() - 1;
  const double h = static_cast<double>(stride) / static_cast<double>(last);
  double acc = 0.5 * (f.front() + f.back());
  for (std::size_t i = stride; i < last; i += stride) acc += f[i];
  return h * acc;
}

double romberg(const std::vector<double>& f) {
  const std::size_t m = f.size() - 1;
  int levels = 0;
  while ((std::size_t{1} << levels) < m) ++levels;

  // row k uses 2^k panels; only the previous row is kept.
  std::vector<double> prev{trapezoid_with_stride(f, m)};
  for (int k = 1; k <= levels; ++k) {
    std::vector<double> row(static_cast<std::size_t>(k) + 1);
    row[0] = trapezoid_with_stride(f, m >> k);
    double factor = 1.0;
    for (int j = 1; j <= k; ++j) {
      factor *= 4.0;
      row[j] = row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0);
    }
    prev = std::move(row);
  }
  return prev.back();
}

void require_same_grid(const EvaluationGrid& a, const EvaluationGrid& b) {
  if (!(a == b)) {
    std::ostringstream os;
    os << "profiles evaluated on different grids (m = " << a.steps() << " vs " << b.steps() << ")";
    throw Error(ErrorKind::grid_mismatch, os.str());
  }
}

void require_aligned(const WeightProfile& wx, const WeightProfile& wy) {
  require_same_grid(wx.grid, wy.grid);
  if (wx.n != wy.n || wx.weights.rows() != wy.weights.rows()) {
    std::ostringstream os;
    os << "weight difference needs aligned spaces of equal size (" << wx.n << " vs " << wy.n << ")";
    throw Error(ErrorKind::cardinality_mismatch, os.str());
  }
}

// Aggregates per-scale values f_1..f_m in the weight-difference convention.
double aggregate_weight_series(const std::vector<double>& series, IntegrationMethod method) {
  if (method == IntegrationMethod::riemann_sum) {
    double acc = 0.0;
    for (double v : series) acc += v;
    return acc;
  }
  std::vector<double> nodes;
  nodes.reserve(series.size() + 1);
  nodes.push_back(series.front());
  nodes.insert(nodes.end(), series.begin(), series.end());
  return integrate_unit_interval(nodes, method);
}

}  // namespace

EvaluationGrid::EvaluationGrid(int m) : m_(m) {
  if (m < 1) throw Error(ErrorKind::invalid_input, "grid needs at least one step");
  s_.reserve(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) s_.push_back(static_cast<double>(j) / static_cast<double>(m));
}

EvaluationGrid EvaluationGrid::default_for(Eigen::Index n) { return EvaluationGrid(n <= 1000 ? 64 : 32); }

const char* to_string(IntegrationMethod method) {
  switch (method) {
    case IntegrationMethod::riemann_sum: return "riemann_sum";
    case IntegrationMethod::trapezoid: return "trapezoid";
    case IntegrationMethod::romberg: return "romberg";
  }
  return "unknown";
}

IntegrationMethod parse_integration_method(const std::string& name) {
  if (name == "riemann_sum" || name == "riemann" || name == "sum") return IntegrationMethod::riemann_sum;
  if (name == "trapezoid" || name == "trapz") return IntegrationMethod::trapezoid;
  if (name == "romberg") return IntegrationMethod::romberg;
  throw Error(ErrorKind::invalid_input, "unknown integration method '" + name + "'");
}

double integrate_unit_interval(const std::vector<double>& nodes, IntegrationMethod method) {
  if (nodes.size() < 2) throw Error(ErrorKind::invalid_input, "integration needs at least two nodes");
  const auto m = static_cast<int>(nodes.size() - 1);
  switch (method) {
    case IntegrationMethod::riemann_sum: {
      double acc = 0.0;
      for (std::size_t j = 1; j < nodes.size(); ++j) acc += nodes[j];
      return acc / static_cast<double>(m);
    }
    case IntegrationMethod::trapezoid:
      return trapezoid_with_stride(nodes, 1);
    case IntegrationMethod::romberg:
      if (!is_power_of_two(m)) {
        throw Error(ErrorKind::grid_mismatch, "Romberg integration needs a grid of 2^k steps");
      }
      return romberg(nodes);
  }
  return 0.0;
}

RescaledProfiles rescaled_profile(const DistanceMatrix& d, const ConvergenceSpec& spec,
                                  const EvaluationGrid& grid, const KernelOptions& options) {
  if (std::abs(d.diameter() - 1.0) > 1e-12) {
    throw Error(ErrorKind::invalid_input, "re-scaled profiles need diameter-normalized distances");
  }
  const ConvergencePoint conv = find_convergence_scale(d, spec, options);

  std::vector<double> ts;
  ts.reserve(grid.s_values().size());
  for (double s : grid.s_values()) ts.push_back(s * conv.t_conv);
  const auto results = magnitude_function(d, ts, options);

  const Eigen::Index n = d.size();
  MagnitudeProfile mp{grid, {}, conv.t_conv, n};
  WeightProfile wp{grid, Matrix(n, grid.steps()), conv.t_conv, n, std::nullopt};
  mp.values.reserve(results.size());
  for (std::size_t j = 0; j < results.size(); ++j) {
    mp.values.push_back(results[j].magnitude);
    wp.weights.col(static_cast<Eigen::Index>(j)) = results[j].weights;
  }
  return {std::move(mp), std::move(wp), conv};
}

double magnitude_profile_difference(const MagnitudeProfile& px, const MagnitudeProfile& py,
                                    IntegrationMethod method) {
  require_same_grid(px.grid, py.grid);
  if (px.values.size() != py.values.size() || px.n < 1 || py.n < 1) {
    throw Error(ErrorKind::grid_mismatch, "profile lengths differ from their grids");
  }
  const double nx = static_cast<double>(px.n);
  const double ny = static_cast<double>(py.n);
  std::vector<double> nodes;
  nodes.reserve(px.values.size() + 1);
  nodes.push_back(std::abs(1.0 / nx - 1.0 / ny));
  for (std::size_t j = 0; j < px.values.size(); ++j) {
    nodes.push_back(std::abs(px.values[j] / nx - py.values[j] / ny));
  }
  return integrate_unit_interval(nodes, method);
}

std::vector<double> weight_difference_function(const WeightProfile& wx, const WeightProfile& wy) {
  require_aligned(wx, wy);
  const Eigen::Index m = wx.weights.cols();
  std::vector<double> series(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) {
    series[static_cast<std::size_t>(j)] =
        (wx.weights.col(j) - wy.weights.col(j)).cwiseAbs().sum() / static_cast<double>(wx.n);
  }
  return series;
}

double magnitude_weight_difference(const WeightProfile& wx, const WeightProfile& wy,
                                   IntegrationMethod method) {
  return aggregate_weight_series(weight_difference_function(wx, wy), method);
}

Vector per_point_weight_deviation(const WeightProfile& wx, const WeightProfile& wy,
                                  IntegrationMethod method) {
  require_aligned(wx, wy);
  const Eigen::Index n = wx.n;
  const Eigen::Index m = wx.weights.cols();
  Vector out(n);
  std::vector<double> series(static_cast<std::size_t>(m));
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < m; ++j) {
      series[static_cast<std::size_t>(j)] = std::abs(wx.weights(k, j) - wy.weights(k, j));
    }
    out(k) = aggregate_weight_series(series, method);
  }
  return out;
}

}  // namespace magnify
