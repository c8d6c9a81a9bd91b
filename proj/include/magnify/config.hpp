#pragma once

#include "magnify/datasets.hpp"
#include "magnify/magnitude_diff.hpp"
#include "magnify/metric_core.hpp"

#include <map>
#include <optional>
#include <string>

namespace magnify {

/// Effective settings of one run. Serializes to a flat key=value form that
/// every output file embeds.
struct RunConfig {
  MetricKind metric = MetricKind::euclidean;
  double epsilon_prop = 0.05;
  // 0 selects 64 steps up to 1000 points and 32 beyond.
  int grid_m = 0;
  IntegrationMethod integration = IntegrationMethod::trapezoid;
  int k = 30;
  bool dedup = false;
  bool jitter = false;
  std::optional<std::uint64_t> seed;
  int threads = 0;  // 0 = library default

  void validate() const;

  EvaluationGrid grid_for(Eigen::Index n) const;
  ConvergenceSpec convergence() const;
  KernelOptions kernel() const { return KernelOptions{jitter}; }

  std::map<std::string, std::string> to_map() const;
  static RunConfig from_map(const std::map<std::string, std::string>& values);

  // Lines of "key=value"; '#' starts a comment.
  std::string to_text() const;
  static RunConfig from_text(const std::string& text);
  // Lines of "#config key=value", prepended to every CSV output.
  std::string to_comment_block() const;
  // Reads the "#config" lines of a previous output; nullopt when there are none.
  static std::optional<RunConfig> from_comment_block(const std::string& text);

  // Accepts a plain config file or any CSV output carrying a comment block.
  static RunConfig load(const std::string& path);
};

/// Shortest round-trip representation with 17 significant digits.
std::string format_real(double v);

}  // namespace magnify
