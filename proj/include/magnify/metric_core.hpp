#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace magnify {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// An n x D matrix of finite coordinates, optionally with unique row ids.
class PointCloud {
 public:
  PointCloud(Matrix points, std::optional<std::vector<std::string>> ids = std::nullopt);

  Eigen::Index size() const noexcept { return points_.rows(); }
  Eigen::Index dims() const noexcept { return points_.cols(); }
  const Matrix& points() const noexcept { return points_; }
  const std::optional<std::vector<std::string>>& ids() const noexcept { return ids_; }

  PointCloud select_rows(const std::vector<Eigen::Index>& rows) const;

 private:
  Matrix points_;
  std::optional<std::vector<std::string>> ids_;
};

enum class MetricKind { euclidean, manhattan };
enum class MetricTag { euclidean, manhattan, precomputed };

const char* to_string(MetricKind kind);
const char* to_string(MetricTag tag);
MetricKind parse_metric_kind(const std::string& name);

enum class ViolationKind { asymmetric, negative, non_finite, nonzero_diagonal, duplicate_point, not_square };

struct Violation {
  ViolationKind kind;
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  double value = 0.0;
};

const char* to_string(ViolationKind kind);

struct ValidationReport {
  std::vector<Violation> violations;

  bool magnitude_ready() const noexcept { return violations.empty(); }
  // True when duplicates are the only problem.
  bool only_duplicates() const noexcept;
  std::string summary(std::size_t max_items = 5) const;
};

ValidationReport validate_distance_matrix(const Matrix& d);

/// Symmetric, zero-diagonal, nonnegative n x n matrix. Constructing one
/// validates the data; duplicate points are only admitted when the matrix
/// is explicitly flagged degenerate.
class DistanceMatrix {
 public:
  DistanceMatrix(Matrix d, MetricTag tag, bool allow_duplicates = false);

  Eigen::Index size() const noexcept { return d_.rows(); }
  const Matrix& values() const noexcept { return d_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return d_(i, j); }
  MetricTag tag() const noexcept { return tag_; }
  bool degenerate() const noexcept { return degenerate_; }

  double diameter() const;
  // Smallest off-diagonal entry; +inf for n == 1.
  double min_offdiag() const;

  // Throws DuplicatePoints when the matrix is degenerate.
  void require_magnitude_ready() const;

 private:
  struct Unchecked {};
  DistanceMatrix(Unchecked, Matrix d, MetricTag tag, bool degenerate);

  friend DistanceMatrix pairwise_distances(const PointCloud&, MetricKind);
  friend DistanceMatrix normalize_by_diameter(const DistanceMatrix&);
  friend DistanceMatrix scaled(const DistanceMatrix&, double);

  Matrix d_;
  MetricTag tag_;
  bool degenerate_ = false;
};

/// Upper triangle computed once and mirrored; diagonal exactly zero.
/// Duplicate rows yield a degenerate matrix rather than an error.
DistanceMatrix pairwise_distances(const PointCloud& pc, MetricKind metric);

struct DedupResult {
  PointCloud cloud;
  std::vector<Eigen::Index> dropped;
};

/// Removes exact-duplicate rows, keeping first occurrences in order.
DedupResult deduplicate(const PointCloud& pc);

struct DistanceDedupResult {
  DistanceMatrix distances;
  std::vector<Eigen::Index> dropped;
};

/// Drops every point at distance zero from an earlier kept point.
DistanceDedupResult deduplicate(const DistanceMatrix& d);

/// Divides every entry by the largest one. Throws ZeroDiameter when all
/// entries vanish.
DistanceMatrix normalize_by_diameter(const DistanceMatrix& d);

/// c * d for c > 0.
DistanceMatrix scaled(const DistanceMatrix& d, double c);

}  // namespace magnify
