#include "magnify/datasets.hpp"

#include "magnify/error.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <set>

namespace magnify {

namespace {

struct RowVectorLess {
  bool operator()(const std::vector<double>& a, const std::vector<double>& b) const { return a < b; }
};

// Fills n rows from `draw`, redrawing any row that exactly repeats an earlier one.
Matrix unique_rows(Eigen::Index n, Eigen::Index dims, const std::function<void(Eigen::Index, std::vector<double>&)>& draw) {
  Matrix out(n, dims);
  std::set<std::vector<double>, RowVectorLess> seen;
  std::vector<double> row(static_cast<std::size_t>(dims));
  for (Eigen::Index i = 0; i < n; ++i) {
    do {
      draw(i, row);
    } while (!seen.insert(row).second);
    for (Eigen::Index c = 0; c < dims; ++c) out(i, c) = row[static_cast<std::size_t>(c)];
  }
  return out;
}

const std::vector<std::string>& planet_names() {
  static const std::vector<std::string> names{"Mercury", "Venus",  "Earth",  "Mars",
                                              "Jupiter", "Saturn", "Uranus", "Neptune"};
  return names;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(Seed seed, std::uint64_t stream_id)
    : engine_(splitmix64(splitmix64(seed.value) ^ splitmix64(stream_id + 0x5DEECE66DULL))) {}

double RandomStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double RandomStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

double RandomStream::laplace(double b) {
  // Inverse CDF on u in (-1/2, 1/2).
  double u = uniform() - 0.5;
  while (u == -0.5) u = uniform() - 0.5;
  const double magnitude = -b * std::log1p(-2.0 * std::abs(u));
  return u < 0.0 ? -magnitude : magnitude;
}

SwissRoll swiss_roll(Eigen::Index n, Seed seed) {
  if (n < 1) throw Error(ErrorKind::invalid_input, "swiss_roll needs n >= 1");
  RandomStream u_stream(seed, 1);
  RandomStream v_stream(seed, 2);
  const double pi = std::numbers::pi;
  Matrix truth = unique_rows(n, 2, [&](Eigen::Index, std::vector<double>& row) {
    row[0] = u_stream.uniform(1.5 * pi, 4.5 * pi);
    row[1] = v_stream.uniform(0.0, 21.0);
  });
  Matrix rolled(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = truth(i, 0);
    rolled(i, 0) = u * std::cos(u);
    rolled(i, 1) = truth(i, 1);
    rolled(i, 2) = u * std::sin(u);
  }
  return {PointCloud(std::move(rolled)), PointCloud(std::move(truth))};
}

PointCloud circles(Eigen::Index n, Seed seed) {
  if (n < 2) throw Error(ErrorKind::invalid_input, "circles needs n >= 2");
  RandomStream angle_stream(seed, 1);
  RandomStream jitter_stream(seed, 2);
  const Eigen::Index outer = n / 2;
  Matrix pts = unique_rows(n, 2, [&](Eigen::Index i, std::vector<double>& row) {
    const double radius = i < outer ? 1.0 : 0.5;
    const double r = radius + jitter_stream.uniform(-kCircleJitter, kCircleJitter);
    const double theta = angle_stream.uniform(0.0, 2.0 * std::numbers::pi);
    row[0] = r * std::cos(theta);
    row[1] = r * std::sin(theta);
  });
  return PointCloud(std::move(pts));
}

PointCloud gaussian_blobs(Eigen::Index n, const Matrix& centers, double sigma, Seed seed) {
  if (centers.rows() < 1 || centers.cols() < 1) {
    throw Error(ErrorKind::invalid_input, "gaussian_blobs needs at least one center");
  }
  if (n < 1 || !(sigma >= 0.0)) throw Error(ErrorKind::invalid_input, "gaussian_blobs needs n >= 1, sigma >= 0");
  const Eigen::Index dims = centers.cols();
  const Eigen::Index blobs = centers.rows();
  std::vector<RandomStream> streams;
  for (Eigen::Index c = 0; c < dims; ++c) streams.emplace_back(seed, 100 + static_cast<std::uint64_t>(c));

  Matrix pts(n, dims);
  std::set<std::vector<double>, RowVectorLess> seen;
  std::vector<double> row(static_cast<std::size_t>(dims));
  for (Eigen::Index i = 0; i < n; ++i) {
    // contiguous blocks whose sizes differ by at most one
    const Eigen::Index blob = (i * blobs) / n;
    do {
      for (Eigen::Index c = 0; c < dims; ++c) {
        row[static_cast<std::size_t>(c)] = centers(blob, c) + sigma * streams[static_cast<std::size_t>(c)].normal();
      }
    } while (!seen.insert(row).second);
    for (Eigen::Index c = 0; c < dims; ++c) pts(i, c) = row[static_cast<std::size_t>(c)];
  }
  return PointCloud(std::move(pts));
}

Matrix default_blob_centers() {
  Matrix centers(3, 2);
  centers << -5.0, 0.0,
              5.0, 0.0,
              0.0, 8.0;
  return centers;
}

PointCloud laplace_noise(const PointCloud& pc, double b, Seed seed) {
  if (!(b > 0.0) || !std::isfinite(b)) throw Error(ErrorKind::invalid_input, "Laplace scale b must be positive");
  Matrix out = pc.points();
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    RandomStream stream(seed, 200 + static_cast<std::uint64_t>(c));
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, c) += stream.laplace(b);
  }
  return PointCloud(std::move(out), pc.ids());
}

PointCloud planets_table() {
  Matrix table(8, 3);
  table << 4879, 5429, 3.7,
           12104, 5243, 8.9,
           12756, 5514, 9.8,
           6792, 3934, 3.7,
           142984, 1326, 23.1,
           120536, 687, 9.0,
           51118, 1270, 8.7,
           49528, 1638, 11.0;
  return PointCloud(std::move(table), planet_names());
}

PointCloud planets_dataset() { return standard_scale(planets_table()); }

PointCloud planets_mass_table() {
  // Mass from the NASA planetary fact sheet, same source as the table above.
  Matrix table(8, 3);
  table << 0.330, 4879, 5429,
           4.87, 12104, 5243,
           5.97, 12756, 5514,
           0.642, 6792, 3934,
           1898, 142984, 1326,
           568, 120536, 687,
           86.8, 51118, 1270,
           102, 49528, 1638;
  return PointCloud(std::move(table), planet_names());
}

PointCloud planets_mass_dataset() { return standard_scale(planets_mass_table()); }

PointCloud standard_scale(const PointCloud& pc) {
  Matrix x = pc.points();
  const double n = static_cast<double>(x.rows());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double mean = x.col(c).sum() / n;
    x.col(c).array() -= mean;
    const double sd = std::sqrt(x.col(c).squaredNorm() / n);
    if (sd > 0.0) x.col(c) /= sd;
  }
  return PointCloud(std::move(x), pc.ids());
}

PointCloud drop_axis(const PointCloud& pc, Eigen::Index axis) {
  if (axis < 0 || axis >= pc.dims() || pc.dims() < 2) {
    throw Error(ErrorKind::invalid_input, "cannot drop that axis");
  }
  Matrix out(pc.size(), pc.dims() - 1);
  for (Eigen::Index c = 0, k = 0; c < pc.dims(); ++c) {
    if (c != axis) out.col(k++) = pc.points().col(c);
  }
  return PointCloud(std::move(out), pc.ids());
}

PointCloud make_dataset(const std::string& name, Eigen::Index n, Seed seed) {
  if (name == "circles") return circles(n, seed);
  if (name == "swiss_roll") return swiss_roll(n, seed).rolled;
  if (name == "gaussian_blobs") return gaussian_blobs(n, default_blob_centers(), 1.0, seed);
  throw Error(ErrorKind::invalid_input, "unknown dataset '" + name + "'");
}

}  // namespace magnify
