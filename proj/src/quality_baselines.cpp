#include "magnify/quality_baselines.hpp"

#include "magnify/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace magnify {

namespace {

void require_same_size(const DistanceMatrix& dx, const DistanceMatrix& dy) {
  if (dx.size() != dy.size()) {
    std::ostringstream os;
    os << "distance matrices differ in size (" << dx.size() << " vs " << dy.size() << ")";
    throw Error(ErrorKind::cardinality_mismatch, os.str());
  }
}

void require_valid_k(Eigen::Index n, int k) {
  if (k < 1 || k > n - 1) {
    std::ostringstream os;
    os << "k = " << k << " outside [1, " << n - 1 << "]";
    throw Error(ErrorKind::invalid_input, os.str());
  }
}

std::vector<double> upper_triangle(const DistanceMatrix& d) {
  const Eigen::Index n = d.size();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) out.push_back(d(i, j));
  }
  return out;
}

// rank[i][j] = 1-based position of j in i's neighbour order (0 on the diagonal).
std::vector<std::vector<int>> rank_table(const DistanceMatrix& d) {
  const auto order = neighbor_order(d);
  const auto n = static_cast<std::size_t>(d.size());
  std::vector<std::vector<int>> rank(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < order[i].size(); ++r) {
      rank[i][static_cast<std::size_t>(order[i][r])] = static_cast<int>(r) + 1;
    }
  }
  return rank;
}

// Sum over points of the rank excess (in `reference`) of neighbours that are
// among the k nearest in `other` but not in `reference`.
double intrusion_penalty(const DistanceMatrix& reference, const DistanceMatrix& other, int k) {
  const auto ref_rank = rank_table(reference);
  const auto other_order = neighbor_order(other);
  double total = 0.0;
  for (std::size_t i = 0; i < other_order.size(); ++i) {
    for (int r = 0; r < k; ++r) {
      const int rank = ref_rank[i][static_cast<std::size_t>(other_order[i][static_cast<std::size_t>(r)])];
      if (rank > k) total += rank - k;
    }
  }
  return total;
}

double rank_preservation(const DistanceMatrix& reference, const DistanceMatrix& other,
                         const NeighborhoodSpec& spec) {
  require_same_size(reference, other);
  const Eigen::Index n = reference.size();
  require_valid_k(n, spec.k);
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(spec.k);
  const double denom = nd * kd * (2.0 * nd - 3.0 * kd - 1.0);
  if (!(denom > 0.0)) {
    std::ostringstream os;
    os << "trustworthiness/continuity need 2n - 3k - 1 > 0 (n = " << n << ", k = " << spec.k << ")";
    throw Error(ErrorKind::invalid_input, os.str());
  }
  return 1.0 - 2.0 / denom * intrusion_penalty(reference, other, spec.k);
}

}  // namespace

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t start = 0;
  while (start < idx.size()) {
    std::size_t end = start + 1;
    while (end < idx.size() && values[idx[end]] == values[idx[start]]) ++end;
    // positions start..end-1 hold ranks start+1..end
    const double mean_rank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t p = start; p < end; ++p) ranks[idx[p]] = mean_rank;
    start = end;
  }
  return ranks;
}

double spearman_distance_correlation(const DistanceMatrix& dx, const DistanceMatrix& dy) {
  require_same_size(dx, dy);
  if (dx.size() < 3) throw Error(ErrorKind::invalid_input, "Spearman correlation needs n >= 3");
  const auto rx = average_ranks(upper_triangle(dx));
  const auto ry = average_ranks(upper_triangle(dy));
  // Average ranks always have mean (N + 1) / 2.
  const double mean = 0.5 * static_cast<double>(rx.size() + 1);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t p = 0; p < rx.size(); ++p) {
    const double a = rx[p] - mean;
    const double b = ry[p] - mean;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorKind::degenerate_input, "constant distances, Spearman correlation undefined");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double rmse_distances(const DistanceMatrix& dx, const DistanceMatrix& dy) {
  require_same_size(dx, dy);
  const Eigen::Index n = dx.size();
  if (n < 2) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double diff = dx(i, j) - dy(i, j);
      acc += diff * diff;
    }
  }
  return std::sqrt(acc / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1)));
}

std::vector<std::vector<Eigen::Index>> neighbor_order(const DistanceMatrix& d) {
  const Eigen::Index n = d.size();
  std::vector<std::vector<Eigen::Index>> order(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& row = order[static_cast<std::size_t>(i)];
    row.reserve(static_cast<std::size_t>(n - 1));
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) row.push_back(j);
    }
    std::sort(row.begin(), row.end(), [&](Eigen::Index a, Eigen::Index b) {
      const double da = d(i, a);
      const double db = d(i, b);
      return da < db || (da == db && a < b);
    });
  }
  return order;
}

double trustworthiness(const DistanceMatrix& dx, const DistanceMatrix& dy, const NeighborhoodSpec& spec) {
  return rank_preservation(dx, dy, spec);
}

double continuity(const DistanceMatrix& dx, const DistanceMatrix& dy, const NeighborhoodSpec& spec) {
  return rank_preservation(dy, dx, spec);
}

double neighbourhood_loss(const DistanceMatrix& dx, const DistanceMatrix& dy, const NeighborhoodSpec& spec) {
  require_same_size(dx, dy);
  const Eigen::Index n = dx.size();
  require_valid_k(n, spec.k);
  const auto ox = neighbor_order(dx);
  const auto oy = neighbor_order(dy);
  const auto k = static_cast<std::size_t>(spec.k);
  double total = 0.0;
  std::vector<char> in_x(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < ox.size(); ++i) {
    for (std::size_t r = 0; r < k; ++r) in_x[static_cast<std::size_t>(ox[i][r])] = 1;
    std::size_t shared = 0;
    for (std::size_t r = 0; r < k; ++r) shared += in_x[static_cast<std::size_t>(oy[i][r])];
    for (std::size_t r = 0; r < k; ++r) in_x[static_cast<std::size_t>(ox[i][r])] = 0;
    total += 1.0 - static_cast<double>(shared) / static_cast<double>(k);
  }
  return total / static_cast<double>(n);
}

}  // namespace magnify
