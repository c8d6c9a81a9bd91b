#include <doctest.h>

#include "magnify/error.hpp"
#include "magnify/quality_baselines.hpp"
#include "support/generators.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace magnify;

namespace {

DistanceMatrix euclid(const Matrix& x) { return pairwise_distances(PointCloud(x), MetricKind::euclidean); }

DistanceMatrix line(std::initializer_list<double> xs) {
  Matrix m(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return euclid(m);
}

DistanceMatrix transformed(const DistanceMatrix& d, double (*f)(double)) {
  Matrix m = d.values().unaryExpr(f);
  m.diagonal().setZero();
  return DistanceMatrix(m, MetricTag::precomputed);
}

DistanceMatrix permuted(const DistanceMatrix& d, const std::vector<Eigen::Index>& perm) {
  const Eigen::Index n = d.size();
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = d(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  return DistanceMatrix(m, MetricTag::precomputed);
}

}  // namespace

TEST_CASE("average ranks share ties") {
  CHECK(average_ranks({3.0, 1.0, 2.0}) == std::vector<double>{3, 1, 2});
  CHECK(average_ranks({5.0, 1.0, 5.0, 0.0}) == std::vector<double>{3.5, 2, 3.5, 1});
  CHECK(average_ranks({2.0, 2.0, 2.0}) == std::vector<double>{2, 2, 2});
}

TEST_CASE("spearman distance correlation") {
  std::mt19937_64 rng(1);
  const auto dx = euclid(testing::random_points(rng, 12, 3));
  CHECK(spearman_distance_correlation(dx, dx) == 1.0);
  CHECK(spearman_distance_correlation(dx, scaled(dx, 4.5)) == doctest::Approx(1.0).epsilon(1e-15));
  // 1 / d reverses every rank
  const auto inv = transformed(dx, [](double v) { return 1.0 / v; });
  CHECK(spearman_distance_correlation(dx, inv) == doctest::Approx(-1.0).epsilon(1e-15));

  Matrix flat = Matrix::Ones(3, 3);
  flat.diagonal().setZero();
  CHECK_THROWS_AS(spearman_distance_correlation(DistanceMatrix(flat, MetricTag::precomputed), line({0, 1, 3})), Error);
  CHECK_THROWS_AS(spearman_distance_correlation(line({0, 1, 3}), line({0, 1, 3, 4})), Error);
}

TEST_CASE("rmse of distances") {
  Matrix a(2, 2), b(2, 2);
  a << 0, 1, 1, 0;
  b << 0, 3, 3, 0;
  const DistanceMatrix da(a, MetricTag::precomputed), db(b, MetricTag::precomputed);
  CHECK(rmse_distances(da, da) == 0.0);
  CHECK(rmse_distances(da, db) == 2.0);

  std::mt19937_64 rng(2);
  const auto dx = euclid(testing::random_points(rng, 15, 2));
  const auto dy = euclid(testing::random_points(rng, 15, 4));
  double sum = 0.0;
  int count = 0;
  for (Eigen::Index i = 0; i < 15; ++i) {
    for (Eigen::Index j = i + 1; j < 15; ++j, ++count) sum += std::pow(dx(i, j) - dy(i, j), 2);
  }
  CHECK(rmse_distances(dx, dy) == doctest::Approx(std::sqrt(sum / count)).epsilon(1e-14));
}

TEST_CASE("neighbour order breaks ties by index") {
  // point 1 is equidistant from 0 and 2
  const auto d = line({0, 1, 2, 5});
  const auto order = neighbor_order(d);
  CHECK(order[1] == std::vector<Eigen::Index>{0, 2, 3});
  CHECK(order[3] == std::vector<Eigen::Index>{2, 1, 0});
}

TEST_CASE("trustworthiness and continuity: hand-computed instances") {
  // Swapping the positions 7 and 12 intrudes two neighbours with rank excess 1.
  const auto dx = line({0, 1, 3, 7, 12, 20});
  const auto dy = line({0, 1, 3, 12, 7, 20});
  const NeighborhoodSpec k2{2};
  CHECK(std::abs(trustworthiness(dx, dy, k2) - 13.0 / 15.0) <= 1e-12);
  CHECK(std::abs(continuity(dx, dy, k2) - 13.0 / 15.0) <= 1e-12);

  Matrix x(6, 2), y(6, 2);
  x << 0, 0, 1, 0, 0, 2, 3, 1, 5, 5, 2, 4;
  y << 0, 0, 2, 1, 1, 0, 3, 3, 4, 4, 0, 5;
  CHECK(std::abs(trustworthiness(euclid(x), euclid(y), k2) - 0.8) <= 1e-12);
  CHECK(std::abs(continuity(euclid(x), euclid(y), k2) - 0.7666666666666666) <= 1e-12);
  CHECK(std::abs(neighbourhood_loss(euclid(x), euclid(y), k2) - 0.25) <= 1e-12);
}

TEST_CASE("neighbourhood loss") {
  const NeighborhoodSpec k2{2};
  const auto a = line({0, 1, 2, 4, 8});
  const auto b = line({0, 8, 2, 4, 1});
  CHECK(neighbourhood_loss(a, a, k2) == 0.0);
  CHECK(neighbourhood_loss(a, b, k2) == doctest::Approx(0.5).epsilon(1e-15));
  // 4 points, k = 1: X pairs {0,1},{2,3}; Y pairs {0,2},{1,3}
  const auto x4 = line({0, 1, 10, 11});
  const auto y4 = line({0, 10, 1, 11});
  CHECK(neighbourhood_loss(x4, y4, NeighborhoodSpec{1}) == 1.0);
}

TEST_CASE("baseline identities, ranges and invariances") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> noise(-0.3, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = testing::random_points(rng, 25, 3);
    Matrix y = x.leftCols(2);
    for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] += noise(rng);
    const auto dx = euclid(x);
    const auto dy = euclid(y);
    const NeighborhoodSpec spec{5};

    CHECK(trustworthiness(dx, dx, spec) == 1.0);
    CHECK(continuity(dx, dx, spec) == 1.0);
    CHECK(neighbourhood_loss(dx, dx, spec) == 0.0);
    CHECK(rmse_distances(dx, dx) == 0.0);
    CHECK(spearman_distance_correlation(dx, dx) == 1.0);

    const double tw = trustworthiness(dx, dy, spec);
    const double co = continuity(dx, dy, spec);
    const double nl = neighbourhood_loss(dx, dy, spec);
    const double dc = spearman_distance_correlation(dx, dy);
    CHECK(tw >= 0.0);
    CHECK(tw <= 1.0);
    CHECK(co >= 0.0);
    CHECK(co <= 1.0);
    CHECK(nl >= 0.0);
    CHECK(nl <= 1.0);
    CHECK(dc >= -1.0);
    CHECK(dc <= 1.0);
    CHECK(co == trustworthiness(dy, dx, spec));

    // strictly increasing transforms leave the rank measures unchanged
    const auto ty = transformed(dy, [](double v) { return std::log1p(v * v); });
    CHECK(trustworthiness(dx, ty, spec) == tw);
    CHECK(continuity(dx, ty, spec) == co);
    CHECK(neighbourhood_loss(dx, ty, spec) == nl);
    CHECK(trustworthiness(dx, ty, spec) == trustworthiness(dx, dy, spec));

    std::vector<Eigen::Index> perm(25);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto px = permuted(dx, perm);
    const auto py = permuted(dy, perm);
    CHECK(std::abs(trustworthiness(px, py, spec) - tw) <= 1e-12);
    CHECK(std::abs(continuity(px, py, spec) - co) <= 1e-12);
    CHECK(std::abs(neighbourhood_loss(px, py, spec) - nl) <= 1e-12);
    CHECK(std::abs(spearman_distance_correlation(px, py) - dc) <= 1e-12);
    CHECK(std::abs(rmse_distances(px, py) - rmse_distances(dx, dy)) <= 1e-12);
  }
}

TEST_CASE("neighbourhood size validation") {
  const auto d = line({0, 1, 2, 3});
  CHECK_THROWS_AS(trustworthiness(d, d, NeighborhoodSpec{0}), Error);
  CHECK_THROWS_AS(trustworthiness(d, d, NeighborhoodSpec{4}), Error);
  // 2n - 3k - 1 < 0 for n = 4, k = 3
  CHECK_THROWS_AS(trustworthiness(d, d, NeighborhoodSpec{3}), Error);
  CHECK(trustworthiness(d, d, NeighborhoodSpec{2}) == 1.0);
  CHECK(neighbourhood_loss(d, d, NeighborhoodSpec{3}) == 0.0);
}
