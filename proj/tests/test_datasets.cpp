#include <doctest.h>

#include "magnify/datasets.hpp"
#include "magnify/error.hpp"
#include "magnify/magnitude_kernel.hpp"

#include <cmath>
#include <numbers>
#include <set>

using namespace magnify;

namespace {

bool has_duplicate_rows(const Matrix& m) {
  std::set<std::vector<double>> seen;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    if (!seen.insert(row).second) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("random streams are reproducible and independent") {
  RandomStream a(Seed{42}, 1), b(Seed{42}, 1), c(Seed{42}, 2), d(Seed{43}, 1);
  bool differs_stream = false;
  bool differs_seed = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    differs_stream |= x != c.uniform();
    differs_seed |= x != d.uniform();
  }
  CHECK(differs_stream);
  CHECK(differs_seed);
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("swiss roll construction") {
  const auto sr = swiss_roll(300, Seed{7});
  REQUIRE(sr.rolled.size() == 300);
  REQUIRE(sr.rolled.dims() == 3);
  REQUIRE(sr.truth.dims() == 2);
  const double pi = std::numbers::pi;
  for (Eigen::Index i = 0; i < 300; ++i) {
    const double u = sr.truth.points()(i, 0);
    CHECK(sr.rolled.points()(i, 1) == sr.truth.points()(i, 1));
    CHECK(std::hypot(sr.rolled.points()(i, 0), sr.rolled.points()(i, 2)) == doctest::Approx(u).epsilon(1e-14));
    CHECK(u >= 1.5 * pi);
    CHECK(u <= 4.5 * pi);
    CHECK(sr.truth.points()(i, 1) >= 0.0);
    CHECK(sr.truth.points()(i, 1) <= 21.0);
  }
  CHECK(swiss_roll(300, Seed{7}).rolled.points() == sr.rolled.points());
  CHECK(swiss_roll(300, Seed{8}).rolled.points() != sr.rolled.points());
  CHECK_THROWS_AS(swiss_roll(0, Seed{1}), Error);
}

TEST_CASE("circles") {
  for (Eigen::Index n : {2, 7, 500}) {
    const auto pc = circles(n, Seed{3});
    Eigen::Index outer = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r = pc.points().row(i).norm();
      const bool on_outer = std::abs(r - 1.0) <= kCircleJitter + 1e-12;
      const bool on_inner = std::abs(r - 0.5) <= kCircleJitter + 1e-12;
      CHECK((on_outer || on_inner));
      outer += on_outer ? 1 : 0;
    }
    CHECK(std::abs(static_cast<double>(outer) - static_cast<double>(n) / 2.0) <= 1.0);
    CHECK_FALSE(has_duplicate_rows(pc.points()));
  }
  CHECK(circles(100, Seed{3}).points() == circles(100, Seed{3}).points());
  CHECK(circles(100, Seed{3}).points() != circles(100, Seed{4}).points());
  CHECK_THROWS_AS(circles(1, Seed{1}), Error);
}

TEST_CASE("gaussian blobs: balance and per-blob means") {
  const Matrix centers = default_blob_centers();
  const Eigen::Index n = 10000;
  const double sigma = 1.0;
  const auto pc = gaussian_blobs(n, centers, sigma, Seed{11});
  CHECK(pc.size() == n);
  for (Eigen::Index b = 0; b < 3; ++b) {
    const Eigen::Index begin = b * n / 3;
    const Eigen::Index end = (b + 1) * n / 3;
    const Eigen::Index count = end - begin;
    CHECK(std::abs(static_cast<double>(count) - n / 3.0) <= 1.0);
    const Eigen::RowVectorXd mean = pc.points().middleRows(begin, count).colwise().mean();
    CHECK((mean - centers.row(b)).cwiseAbs().maxCoeff() <= 4.0 * sigma / std::sqrt(static_cast<double>(count)));
  }
  CHECK(gaussian_blobs(50, centers, sigma, Seed{11}).points() == gaussian_blobs(50, centers, sigma, Seed{11}).points());
  CHECK_THROWS_AS(gaussian_blobs(10, Matrix(0, 2), 1.0, Seed{1}), Error);
}

TEST_CASE("laplace noise moments") {
  const Eigen::Index draws = 1000000;
  const double b = 0.3;
  const PointCloud zeros(Matrix::Zero(draws, 1));
  const auto noisy = laplace_noise(zeros, b, Seed{5});
  const auto& v = noisy.points().col(0);
  const double mean = v.mean();
  const double var = (v.array() - mean).square().mean();
  CHECK(std::abs(mean) <= 4.0 * b / std::sqrt(static_cast<double>(draws)));
  CHECK(std::abs(var - 2.0 * b * b) <= 0.1 * 2.0 * b * b);

  const PointCloud small(Matrix::Zero(10, 3));
  CHECK(laplace_noise(small, b, Seed{5}).points() == laplace_noise(small, b, Seed{5}).points());
  CHECK(laplace_noise(small, b, Seed{5}).points().rows() == 10);
  CHECK(laplace_noise(small, b, Seed{5}).points().cols() == 3);
  CHECK_THROWS_AS(laplace_noise(small, 0.0, Seed{5}), Error);
}

TEST_CASE("planets") {
  const auto raw = planets_table();
  CHECK(raw.points()(0, 0) == 4879);
  CHECK(raw.points()(0, 1) == 5429);
  CHECK(raw.points()(0, 2) == 3.7);
  CHECK(raw.ids()->at(0) == "Mercury");
  CHECK(raw.ids()->at(7) == "Neptune");

  for (const auto& scaled : {planets_dataset(), planets_mass_dataset()}) {
    for (Eigen::Index c = 0; c < 3; ++c) {
      const auto col = scaled.points().col(c);
      CHECK(std::abs(col.mean()) <= 1e-12);
      CHECK(std::abs(std::sqrt(col.squaredNorm() / 8.0) - 1.0) <= 1e-12);
    }
  }

  // Reference values are reached by the mass/diameter/density features after
  // diameter normalization.
  const auto d = normalize_by_diameter(pairwise_distances(planets_mass_dataset(), MetricKind::euclidean));
  const double ts[] = {0.1, 1.0, 10.0, 100.0};
  const double expected[] = {1.05, 1.57, 4.87, 7.78};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(magnitude_at(d, ts[i]) - expected[i]) <= 0.05);
}

TEST_CASE("helpers") {
  Matrix x(3, 2);
  x << 1, 5, 2, 5, 3, 5;
  const auto s = standard_scale(PointCloud(x));
  CHECK(s.points().col(1).isZero(0.0));
  CHECK(drop_axis(PointCloud(x), 0).points() == x.col(1));
  CHECK_THROWS_AS(drop_axis(PointCloud(x), 2), Error);
  CHECK(make_dataset("circles", 20, Seed{1}).dims() == 2);
  CHECK(make_dataset("swiss_roll", 20, Seed{1}).dims() == 3);
  CHECK(make_dataset("gaussian_blobs", 20, Seed{1}).dims() == 2);
  CHECK_THROWS_AS(make_dataset("mnist", 20, Seed{1}), Error);
}
