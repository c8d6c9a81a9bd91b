#pragma once

#include "magnify/config.hpp"
#include "magnify/error.hpp"
#include "magnify/quality_baselines.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace magnify {

struct StabilityRow {
  std::string dataset;
  Eigen::Index n = 0;
  double b = 0.0;
  int repetitions = 0;
  double mean_profile_diff = 0.0;
  double std_profile_diff = 0.0;  // population std over repetitions
};

struct StabilityRun {
  Eigen::Index n = 0;
  double b = 0.0;
  int rep = 0;
  double profile_diff = 0.0;
  double t_conv_clean = 0.0;
  double t_conv_noisy = 0.0;
};

struct StabilityResult {
  std::string dataset;
  std::vector<StabilityRow> rows;  // ordered by n, then b, as given
  std::vector<StabilityRun> runs;  // ordered by n, then b, then rep
};

/// For every (n, b, rep): sample the dataset, add Laplace(0, b) noise in
/// coordinate space, diameter-normalize both distance matrices and compute
/// the magnitude profile difference between the clean and noisy profiles.
StabilityResult stability_experiment(const std::string& dataset, const std::vector<Eigen::Index>& ns,
                                     const std::vector<double>& bs, int reps, Seed seed,
                                     const RunConfig& config = {});

/// Drops every row index that repeats an earlier row in any of the clouds.
/// All clouds must have the same number of rows.
std::vector<PointCloud> shared_deduplicate(const std::vector<PointCloud>& clouds,
                                           std::vector<Eigen::Index>* dropped = nullptr);

struct RankedReport {
  QualityReport report;
  std::optional<std::string> error;  // set when this embedding could not be scored
  std::optional<ErrorKind> error_kind;
  Vector point_deviation;            // per-point weight deviation, when scored
};

/// Scores each embedding against the original with the magnitude weight and
/// profile differences and the baseline measures, then orders them by
/// ascending weight difference. Embeddings that fail (e.g. misaligned row
/// counts) are reported individually after the scored ones.
std::vector<RankedReport> ranking_experiment(const PointCloud& original,
                                             const std::vector<std::pair<std::string, PointCloud>>& embeddings,
                                             const RunConfig& config = {});

}  // namespace magnify
