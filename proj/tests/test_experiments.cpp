#include <doctest.h>

#include "magnify/error.hpp"
#include "magnify/experiments.hpp"
#include "support/generators.hpp"

#include <random>

using namespace magnify;

namespace {

RunConfig small_config() {
  RunConfig cfg;
  cfg.grid_m = 16;
  cfg.k = 5;
  return cfg;
}

const RankedReport& by_name(const std::vector<RankedReport>& reports, const std::string& name) {
  for (const auto& r : reports) {
    if (r.report.name == name) return r;
  }
  throw std::runtime_error("missing report " + name);
}

}  // namespace

TEST_CASE("stability: vanishing noise and determinism") {
  const auto cfg = small_config();
  const auto tiny = stability_experiment("circles", {40, 60}, {1e-12}, 3, Seed{1}, cfg);
  REQUIRE(tiny.rows.size() == 2);
  REQUIRE(tiny.runs.size() == 6);
  for (const auto& row : tiny.rows) {
    CHECK(row.mean_profile_diff <= 1e-9);
    CHECK(row.repetitions == 3);
  }

  const auto a = stability_experiment("gaussian_blobs", {30, 50}, {1e-3, 5e-2}, 4, Seed{9}, cfg);
  const auto b = stability_experiment("gaussian_blobs", {30, 50}, {1e-3, 5e-2}, 4, Seed{9}, cfg);
  REQUIRE(a.runs.size() == b.runs.size());
  for (std::size_t i = 0; i < a.runs.size(); ++i) CHECK(a.runs[i].profile_diff == b.runs[i].profile_diff);
  // ordering: n, then b, then rep
  CHECK(a.runs[0].n == 30);
  CHECK(a.runs[0].b == 1e-3);
  CHECK(a.runs[3].rep == 3);
  CHECK(a.runs[4].b == 5e-2);
  CHECK(a.rows[2].n == 50);

  // aggregate uses the population std
  const auto& row = a.rows[0];
  double mean = 0.0;
  for (int r = 0; r < 4; ++r) mean += a.runs[static_cast<std::size_t>(r)].profile_diff / 4.0;
  double var = 0.0;
  for (int r = 0; r < 4; ++r) var += std::pow(a.runs[static_cast<std::size_t>(r)].profile_diff - mean, 2) / 4.0;
  CHECK(row.mean_profile_diff == doctest::Approx(mean).epsilon(1e-14));
  CHECK(row.std_profile_diff == doctest::Approx(std::sqrt(var)).epsilon(1e-12));

  const auto c = stability_experiment("gaussian_blobs", {30}, {1e-3}, 2, Seed{10}, cfg);
  CHECK(c.runs[0].profile_diff != a.runs[0].profile_diff);
}

TEST_CASE("stability: input validation") {
  CHECK_THROWS_AS(stability_experiment("mnist", {10}, {1e-3}, 1, Seed{1}), Error);
  CHECK_THROWS_AS(stability_experiment("circles", {10}, {0.0}, 1, Seed{1}), Error);
  CHECK_THROWS_AS(stability_experiment("circles", {10}, {1e-3}, 0, Seed{1}), Error);
  CHECK_THROWS_AS(stability_experiment("circles", {}, {1e-3}, 1, Seed{1}), Error);
}

TEST_CASE("shared deduplication drops a row everywhere") {
  Matrix a(4, 1), b(4, 1);
  a << 1, 2, 3, 4;
  b << 1, 2, 1, 5;
  std::vector<Eigen::Index> dropped;
  const auto out = shared_deduplicate({PointCloud(a), PointCloud(b)}, &dropped);
  CHECK(dropped == std::vector<Eigen::Index>{2});
  CHECK(out[0].size() == 3);
  CHECK(out[0].points()(2, 0) == 4);
  CHECK(out[1].points()(2, 0) == 5);
  CHECK_THROWS_AS(shared_deduplicate({PointCloud(a), PointCloud(Matrix(a.topRows(3)))}), Error);
}

TEST_CASE("ranking experiment") {
  std::mt19937_64 rng(31);
  const Matrix x = testing::random_points(rng, 40, 3);
  Matrix shuffled = x;
  for (Eigen::Index i = 0; i < 40; ++i) shuffled.row(i) = x.row((i * 7 + 3) % 40);
  Matrix noisy = x;
  std::normal_distribution<double> noise(0.0, 0.05);
  for (Eigen::Index i = 0; i < noisy.size(); ++i) noisy.data()[i] += noise(rng);

  const auto reports = ranking_experiment(PointCloud(x),
                                          {{"shuffled", PointCloud(shuffled)},
                                           {"short", PointCloud(Matrix(x.topRows(10)))},
                                           {"noisy", PointCloud(noisy)},
                                           {"identity", PointCloud(x)},
                                           {"scaled_noisy", PointCloud(noisy * 250.0)}},
                                          small_config());
  REQUIRE(reports.size() == 5);
  CHECK(reports[0].report.name == "identity");
  CHECK(reports.back().report.name == "short");
  CHECK(reports.back().error.has_value());
  CHECK(reports.back().error_kind == ErrorKind::cardinality_mismatch);
  for (std::size_t i = 1; i + 1 < reports.size(); ++i) {
    CHECK(reports[i - 1].report.measures.at("delta_w") <= reports[i].report.measures.at("delta_w"));
  }

  const auto& id = by_name(reports, "identity").report.measures;
  CHECK(id.at("delta_w") == 0.0);
  CHECK(id.at("delta_M") == 0.0);
  CHECK(id.at("spearman_dc") == 1.0);
  CHECK(id.at("rmse") == 0.0);
  CHECK(id.at("trustworthiness") == 1.0);
  CHECK(id.at("continuity") == 1.0);
  CHECK(id.at("neighbourhood_loss") == 0.0);

  CHECK(by_name(reports, "shuffled").report.measures.at("delta_w") > 0.0);
  const double dn = by_name(reports, "noisy").report.measures.at("delta_w");
  const double ds = by_name(reports, "scaled_noisy").report.measures.at("delta_w");
  CHECK(std::abs(dn - ds) <= 1e-9);

  const auto& params = reports[0].report.params;
  CHECK(params.at("integration") == "trapezoid");
  CHECK(params.at("grid") == "16");
  CHECK(params.at("k") == "5");
  CHECK(params.count("trustworthiness_normalization") == 1);
  CHECK(by_name(reports, "identity").point_deviation.size() == 40);
}

TEST_CASE("ranking experiment with shared deduplication") {
  Matrix x(6, 2), y(6, 2);
  x << 0, 0, 1, 0, 0, 1, 1, 1, 2, 2, 0, 0;
  y << 0, 0, 1, 0, 0, 1, 1, 1.5, 2, 2.5, 3, 3;
  auto cfg = small_config();
  cfg.k = 1;
  // a degenerate original fails the whole experiment
  CHECK_THROWS_AS(ranking_experiment(PointCloud(x), {{"y", PointCloud(y)}}, cfg), Error);
  cfg.dedup = true;
  const auto with = ranking_experiment(PointCloud(x), {{"y", PointCloud(y)}}, cfg);
  REQUIRE_FALSE(with[0].error.has_value());
  CHECK(with[0].report.params.at("dedup_dropped_rows") == "1");
  CHECK(with[0].point_deviation.size() == 5);
}

TEST_CASE("ranking experiment rejects a neighbourhood size the data cannot support") {
  Matrix x(5, 1);
  x << 0, 1, 3, 6, 10;
  RunConfig cfg;
  cfg.k = 3;  // 2n - 3k - 1 = 0
  CHECK_THROWS_AS(ranking_experiment(PointCloud(x), {{"x", PointCloud(x)}}, cfg), Error);
  cfg.k = 2;
  CHECK(ranking_experiment(PointCloud(x), {{"x", PointCloud(x)}}, cfg)[0].report.measures.at("delta_w") == 0.0);
}
