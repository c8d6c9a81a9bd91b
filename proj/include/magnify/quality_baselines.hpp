#pragma once

#include "magnify/metric_core.hpp"

#include <map>
#include <string>
#include <vector>

namespace magnify {

struct NeighborhoodSpec {
  int k = 30;
};

/// Named measures plus every parameter that produced them.
struct QualityReport {
  std::string name;
  std::map<std::string, double> measures;
  std::map<std::string, std::string> params;
};

/// Average (fractional) ranks starting at 1; ties share their mean rank.
std::vector<double> average_ranks(const std::vector<double>& values);

/// Spearman correlation of the upper-triangle distances of both matrices.
double spearman_distance_correlation(const DistanceMatrix& dx, const DistanceMatrix& dy);

double rmse_distances(const DistanceMatrix& dx, const DistanceMatrix& dy);

/// Row i holds the other points ordered by distance from i, ties broken by
/// ascending index.
std::vector<std::vector<Eigen::Index>> neighbor_order(const DistanceMatrix& d);

// Venna-Kaski normalization 2 / (n k (2n - 3k - 1)); needs 2n - 3k - 1 > 0.
double trustworthiness(const DistanceMatrix& dx, const DistanceMatrix& dy, const NeighborhoodSpec& spec = {});
double continuity(const DistanceMatrix& dx, const DistanceMatrix& dy, const NeighborhoodSpec& spec = {});

/// Mean fraction of each point's original k nearest neighbours missing
/// from its embedding neighbourhood.
double neighbourhood_loss(const DistanceMatrix& dx, const DistanceMatrix& dy, const NeighborhoodSpec& spec = {});

}  // namespace magnify
