#include "magnify/metric_core.hpp"

#include "magnify/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace magnify {

namespace {

// Lexicographic row order over exact values; -0.0 and 0.0 compare equal.
struct RowLess {
  const Matrix* m;
  bool operator()(Eigen::Index a, Eigen::Index b) const {
    for (Eigen::Index c = 0; c < m->cols(); ++c) {
      const double x = (*m)(a, c);
      const double y = (*m)(b, c);
      if (x < y) return true;
      if (y < x) return false;
    }
    return false;
  }
};

}  // namespace

PointCloud::PointCloud(Matrix points, std::optional<std::vector<std::string>> ids)
    : points_(std::move(points)), ids_(std::move(ids)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw Error(ErrorKind::invalid_input, "point cloud must have at least one row and one column");
  }
  if (!points_.allFinite()) {
    throw Error(ErrorKind::invalid_input, "point cloud contains non-finite coordinates");
  }
  if (ids_) {
    if (static_cast<Eigen::Index>(ids_->size()) != points_.rows()) {
      throw Error(ErrorKind::invalid_input, "id column length does not match number of rows");
    }
    std::set<std::string> seen;
    for (const auto& id : *ids_) {
      if (!seen.insert(id).second) {
        throw Error(ErrorKind::invalid_input, "duplicate id '" + id + "'");
      }
    }
  }
}

PointCloud PointCloud::select_rows(const std::vector<Eigen::Index>& rows) const {
  Matrix out(static_cast<Eigen::Index>(rows.size()), dims());
  std::optional<std::vector<std::string>> out_ids;
  if (ids_) out_ids.emplace();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = points_.row(rows[r]);
    if (ids_) out_ids->push_back((*ids_)[static_cast<std::size_t>(rows[r])]);
  }
  return PointCloud(std::move(out), std::move(out_ids));
}

const char* to_string(MetricKind kind) {
  return kind == MetricKind::euclidean ? "euclidean" : "manhattan";
}

const char* to_string(MetricTag tag) {
  switch (tag) {
    case MetricTag::euclidean: return "euclidean";
    case MetricTag::manhattan: return "manhattan";
    case MetricTag::precomputed: return "precomputed";
  }
  return "unknown";
}

MetricKind parse_metric_kind(const std::string& name) {
  if (name == "euclidean" || name == "l2") return MetricKind::euclidean;
  if (name == "manhattan" || name == "l1" || name == "cityblock") return MetricKind::manhattan;
  throw Error(ErrorKind::invalid_input, "unknown metric '" + name + "'");
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::asymmetric: return "asymmetric";
    case ViolationKind::negative: return "negative";
    case ViolationKind::non_finite: return "non_finite";
    case ViolationKind::nonzero_diagonal: return "nonzero_diagonal";
    case ViolationKind::duplicate_point: return "duplicate_point";
    case ViolationKind::not_square: return "not_square";
  }
  return "unknown";
}

bool ValidationReport::only_duplicates() const noexcept {
  return std::all_of(violations.begin(), violations.end(),
                     [](const Violation& v) { return v.kind == ViolationKind::duplicate_point; });
}

std::string ValidationReport::summary(std::size_t max_items) const {
  if (violations.empty()) return "magnitude-ready";
  std::ostringstream os;
  os << violations.size() << " violation(s): ";
  for (std::size_t k = 0; k < std::min(max_items, violations.size()); ++k) {
    const auto& v = violations[k];
    if (k) os << "; ";
    os << to_string(v.kind) << " at (" << v.i << ", " << v.j << ")";
    if (v.kind != ViolationKind::duplicate_point && v.kind != ViolationKind::not_square) {
      os << " value " << v.value;
    }
  }
  if (violations.size() > max_items) os << "; ...";
  return os.str();
}

ValidationReport validate_distance_matrix(const Matrix& d) {
  ValidationReport report;
  if (d.rows() != d.cols() || d.rows() == 0) {
    report.violations.push_back({ViolationKind::not_square, d.rows(), d.cols(), 0.0});
    return report;
  }
  const Eigen::Index n = d.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double diag = d(i, i);
    if (!std::isfinite(diag)) {
      report.violations.push_back({ViolationKind::non_finite, i, i, diag});
    } else if (diag != 0.0) {
      report.violations.push_back({ViolationKind::nonzero_diagonal, i, i, diag});
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double a = d(i, j);
      const double b = d(j, i);
      if (!std::isfinite(a) || !std::isfinite(b)) {
        report.violations.push_back({ViolationKind::non_finite, i, j, std::isfinite(a) ? b : a});
        continue;
      }
      if (a != b) report.violations.push_back({ViolationKind::asymmetric, i, j, a - b});
      if (a < 0.0 || b < 0.0) {
        report.violations.push_back({ViolationKind::negative, i, j, std::min(a, b)});
      } else if (a == 0.0 || b == 0.0) {
        report.violations.push_back({ViolationKind::duplicate_point, i, j, 0.0});
      }
    }
  }
  return report;
}

DistanceMatrix::DistanceMatrix(Matrix d, MetricTag tag, bool allow_duplicates)
    : d_(std::move(d)), tag_(tag) {
  const auto report = validate_distance_matrix(d_);
  if (!report.magnitude_ready()) {
    if (!(allow_duplicates && report.only_duplicates())) {
      throw Error(report.only_duplicates() ? ErrorKind::duplicate_points : ErrorKind::invalid_input,
                  "invalid distance matrix: " + report.summary());
    }
    degenerate_ = true;
  }
}

DistanceMatrix::DistanceMatrix(Unchecked, Matrix d, MetricTag tag, bool degenerate)
    : d_(std::move(d)), tag_(tag), degenerate_(degenerate) {}

double DistanceMatrix::diameter() const { return d_.maxCoeff(); }

double DistanceMatrix::min_offdiag() const {
  double best = std::numeric_limits<double>::infinity();
  const Eigen::Index n = size();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) best = std::min(best, d_(i, j));
  }
  return best;
}

void DistanceMatrix::require_magnitude_ready() const {
  if (degenerate_) {
    const auto report = validate_distance_matrix(d_);
    throw Error(ErrorKind::duplicate_points,
                "space has duplicate points (deduplicate first): " + report.summary());
  }
}

DistanceMatrix pairwise_distances(const PointCloud& pc, MetricKind metric) {
  const Matrix& x = pc.points();
  const Eigen::Index n = x.rows();
  const Eigen::Index dim = x.cols();
  Matrix d = Matrix::Zero(n, n);
  bool has_zero = false;

#pragma omp parallel for schedule(dynamic, 16) reduction(|| : has_zero)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double acc = 0.0;
      if (metric == MetricKind::euclidean) {
        for (Eigen::Index c = 0; c < dim; ++c) {
          const double diff = x(i, c) - x(j, c);
          acc += diff * diff;
        }
        acc = std::sqrt(acc);
      } else {
        for (Eigen::Index c = 0; c < dim; ++c) acc += std::abs(x(i, c) - x(j, c));
      }
      d(i, j) = acc;
      d(j, i) = acc;
      has_zero = has_zero || acc == 0.0;
    }
  }
  if (!d.allFinite()) {
    throw Error(ErrorKind::invalid_input, "distances overflow to non-finite values");
  }
  const MetricTag tag = metric == MetricKind::euclidean ? MetricTag::euclidean : MetricTag::manhattan;
  return DistanceMatrix(DistanceMatrix::Unchecked{}, std::move(d), tag, has_zero);
}

DedupResult deduplicate(const PointCloud& pc) {
  const Matrix& x = pc.points();
  std::set<Eigen::Index, RowLess> seen(RowLess{&x});
  std::vector<Eigen::Index> keep;
  std::vector<Eigen::Index> dropped;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    if (seen.insert(r).second) {
      keep.push_back(r);
    } else {
      dropped.push_back(r);
    }
  }
  if (dropped.empty()) return {pc, {}};
  return {pc.select_rows(keep), std::move(dropped)};
}

DistanceDedupResult deduplicate(const DistanceMatrix& d) {
  const Eigen::Index n = d.size();
  std::vector<Eigen::Index> keep;
  std::vector<Eigen::Index> dropped;
  for (Eigen::Index j = 0; j < n; ++j) {
    const bool repeat = std::any_of(keep.begin(), keep.end(), [&](Eigen::Index i) { return d(i, j) == 0.0; });
    (repeat ? dropped : keep).push_back(j);
  }
  if (dropped.empty()) return {d, {}};
  const auto m = static_cast<Eigen::Index>(keep.size());
  Matrix out(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) out(a, b) = d(keep[static_cast<std::size_t>(a)], keep[static_cast<std::size_t>(b)]);
  }
  return {DistanceMatrix(std::move(out), d.tag()), std::move(dropped)};
}

DistanceMatrix normalize_by_diameter(const DistanceMatrix& d) {
  const double diam = d.diameter();
  if (!(diam > 0.0)) {
    throw Error(ErrorKind::zero_diameter, "all pairwise distances are zero");
  }
  Matrix out = d.values() / diam;
  return DistanceMatrix(DistanceMatrix::Unchecked{}, std::move(out), d.tag(), d.degenerate());
}

DistanceMatrix scaled(const DistanceMatrix& d, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorKind::invalid_scale, "scale factor must be positive and finite");
  }
  Matrix out = d.values() * c;
  if (!out.allFinite()) throw Error(ErrorKind::invalid_input, "scaled distances overflow");
  return DistanceMatrix(DistanceMatrix::Unchecked{}, std::move(out), d.tag(), d.degenerate());
}

}  // namespace magnify
