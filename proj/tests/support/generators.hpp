#pragma once

#include "magnify/metric_core.hpp"

#include <cmath>
#include <random>

namespace magnify::testing {

inline Matrix random_points(std::mt19937_64& rng, Eigen::Index n, Eigen::Index dims, double spread = 1.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  Matrix x(n, dims);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < dims; ++c) x(i, c) = u(rng);
  }
  return x;
}

// Random orthogonal matrix from the QR factorization of a Gaussian matrix.
inline Matrix random_rotation(std::mt19937_64& rng, Eigen::Index dims) {
  std::normal_distribution<double> g;
  Matrix a(dims, dims);
  for (Eigen::Index i = 0; i < dims; ++i) {
    for (Eigen::Index j = 0; j < dims; ++j) a(i, j) = g(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(dims, dims);
}

inline Matrix rigid_motion(std::mt19937_64& rng, const Matrix& x) {
  const Matrix q = random_rotation(rng, x.cols());
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Eigen::RowVectorXd shift(x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) shift(c) = u(rng);
  return (x * q.transpose()).rowwise() + shift;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace magnify::testing
