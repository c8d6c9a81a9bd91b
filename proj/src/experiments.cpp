#include "magnify/experiments.hpp"

#include "magnify/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

namespace magnify {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) { return splitmix64(h ^ splitmix64(v)); }

std::uint64_t hash_name(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Seed data_seed(Seed base, const std::string& dataset, Eigen::Index n, int rep) {
  return {mix(mix(mix(base.value, hash_name(dataset)), static_cast<std::uint64_t>(n)), static_cast<std::uint64_t>(rep))};
}

Seed noise_seed(Seed base, Eigen::Index n, std::size_t b_index, int rep) {
  return {mix(mix(mix(mix(base.value, 0x4E6F697365ULL), static_cast<std::uint64_t>(n)), b_index),
              static_cast<std::uint64_t>(rep))};
}

MagnitudeProfile profile_of(const PointCloud& pc, const RunConfig& config) {
  const auto d = normalize_by_diameter(pairwise_distances(pc, config.metric));
  return rescaled_profile(d, config.convergence(), config.grid_for(pc.size()), config.kernel()).magnitude;
}

std::string context(const std::string& dataset, Eigen::Index n, double b, int rep) {
  std::ostringstream os;
  os << " [dataset " << dataset << ", n = " << n << ", b = " << b << ", rep = " << rep << "]";
  return os.str();
}

}  // namespace

StabilityResult stability_experiment(const std::string& dataset, const std::vector<Eigen::Index>& ns,
                                     const std::vector<double>& bs, int reps, Seed seed,
                                     const RunConfig& config) {
  config.validate();
  if (dataset != "circles" && dataset != "swiss_roll" && dataset != "gaussian_blobs") {
    throw Error(ErrorKind::invalid_input, "unknown dataset '" + dataset + "'");
  }
  if (ns.empty() || bs.empty() || reps < 1) {
    throw Error(ErrorKind::invalid_input, "stability experiment needs sizes, noise levels and reps >= 1");
  }
  for (double b : bs) {
    if (!(b > 0.0)) throw Error(ErrorKind::invalid_input, "noise levels must be positive");
  }

  const std::size_t n_count = ns.size();
  const std::size_t b_count = bs.size();
  const auto r_count = static_cast<std::size_t>(reps);

  // One task per (n, rep) computes the clean profile followed by every
  // noisy one; results land in fixed slots so scheduling cannot reorder them.
  std::vector<StabilityRun> runs(n_count * b_count * r_count);
  std::vector<std::optional<Error>> errors(n_count * r_count);
  const auto tasks = static_cast<std::ptrdiff_t>(n_count * r_count);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t task = tasks - 1; task >= 0; --task) {
    // Largest n first keeps the dynamic schedule balanced.
    const std::size_t ni = static_cast<std::size_t>(task) / r_count;
    const int rep = static_cast<int>(static_cast<std::size_t>(task) % r_count);
    const Eigen::Index n = ns[ni];
    double current_b = 0.0;
    try {
      const PointCloud clean = make_dataset(dataset, n, data_seed(seed, dataset, n, rep));
      const MagnitudeProfile clean_profile = profile_of(clean, config);
      for (std::size_t bi = 0; bi < b_count; ++bi) {
        current_b = bs[bi];
        const PointCloud noisy = laplace_noise(clean, bs[bi], noise_seed(seed, n, bi, rep));
        const MagnitudeProfile noisy_profile = profile_of(noisy, config);
        auto& run = runs[(ni * b_count + bi) * r_count + static_cast<std::size_t>(rep)];
        run.n = n;
        run.b = bs[bi];
        run.rep = rep;
        run.profile_diff = magnitude_profile_difference(clean_profile, noisy_profile, config.integration);
        run.t_conv_clean = clean_profile.t_conv;
        run.t_conv_noisy = noisy_profile.t_conv;
      }
    } catch (const Error& e) {
      errors[static_cast<std::size_t>(task)] = Error(e.kind(), e.what() + context(dataset, n, current_b, rep));
    }
  }
  for (const auto& e : errors) {
    if (e) throw *e;
  }

  StabilityResult result{dataset, {}, std::move(runs)};
  for (std::size_t ni = 0; ni < n_count; ++ni) {
    for (std::size_t bi = 0; bi < b_count; ++bi) {
      const auto* first = &result.runs[(ni * b_count + bi) * r_count];
      double sum = 0.0;
      for (std::size_t r = 0; r < r_count; ++r) sum += first[r].profile_diff;
      const double mean = sum / static_cast<double>(r_count);
      double sq = 0.0;
      for (std::size_t r = 0; r < r_count; ++r) sq += (first[r].profile_diff - mean) * (first[r].profile_diff - mean);
      result.rows.push_back({dataset, ns[ni], bs[bi], reps, mean, std::sqrt(sq / static_cast<double>(r_count))});
    }
  }
  return result;
}

std::vector<PointCloud> shared_deduplicate(const std::vector<PointCloud>& clouds,
                                           std::vector<Eigen::Index>* dropped) {
  if (clouds.empty()) return {};
  const Eigen::Index n = clouds.front().size();
  for (const auto& c : clouds) {
    if (c.size() != n) throw Error(ErrorKind::cardinality_mismatch, "clouds differ in row count");
  }
  std::set<Eigen::Index> drop;
  for (const auto& c : clouds) {
    const auto result = deduplicate(c);
    drop.insert(result.dropped.begin(), result.dropped.end());
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index r = 0; r < n; ++r) {
    if (!drop.count(r)) keep.push_back(r);
  }
  if (dropped) dropped->assign(drop.begin(), drop.end());
  std::vector<PointCloud> out;
  out.reserve(clouds.size());
  for (const auto& c : clouds) out.push_back(drop.empty() ? c : c.select_rows(keep));
  return out;
}

std::vector<RankedReport> ranking_experiment(const PointCloud& original,
                                             const std::vector<std::pair<std::string, PointCloud>>& embeddings,
                                             const RunConfig& config) {
  config.validate();
  std::map<std::string, std::string> params = config.to_map();
  params.erase("seed");
  params.erase("threads");
  params["trustworthiness_normalization"] = "venna_kaski: 2/(n k (2n - 3k - 1))";
  params["rmse_distances"] = "raw (unnormalized) pairwise distances";
  params["spearman"] = "upper-triangle distances, average ranks for ties";
  params["knn_ties"] = "ascending point index";

  std::vector<RankedReport> failed;
  std::vector<std::size_t> aligned;
  for (std::size_t e = 0; e < embeddings.size(); ++e) {
    if (embeddings[e].second.size() != original.size()) {
      RankedReport r;
      r.report.name = embeddings[e].first;
      r.report.params = params;
      std::ostringstream os;
      os << "CardinalityMismatch: embedding has " << embeddings[e].second.size() << " rows, original has "
         << original.size();
      r.error = os.str();
      r.error_kind = ErrorKind::cardinality_mismatch;
      failed.push_back(std::move(r));
    } else {
      aligned.push_back(e);
    }
  }

  std::vector<PointCloud> clouds{original};
  for (std::size_t e : aligned) clouds.push_back(embeddings[e].second);
  std::vector<Eigen::Index> dropped;
  if (config.dedup) clouds = shared_deduplicate(clouds, &dropped);
  params["dedup_dropped_rows"] = std::to_string(dropped.size());

  const PointCloud& base = clouds.front();
  const Eigen::Index n = base.size();
  const EvaluationGrid grid = config.grid_for(n);
  params["grid"] = std::to_string(grid.steps());
  if (config.k > n - 1 || 2 * n - 3 * static_cast<Eigen::Index>(config.k) - 1 <= 0) {
    std::ostringstream os;
    os << "k = " << config.k << " is too large for " << n << " points (need 2n - 3k - 1 > 0)";
    throw Error(ErrorKind::invalid_input, os.str());
  }
  const DistanceMatrix dx = pairwise_distances(base, config.metric);
  const DistanceMatrix dx_norm = normalize_by_diameter(dx);
  const RescaledProfiles px = rescaled_profile(dx_norm, config.convergence(), grid, config.kernel());
  const NeighborhoodSpec nbh{config.k};

  std::vector<RankedReport> scored(aligned.size());
  std::vector<char> ok(aligned.size(), 0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t a = 0; a < static_cast<std::ptrdiff_t>(aligned.size()); ++a) {
    auto& out = scored[static_cast<std::size_t>(a)];
    out.report.name = embeddings[aligned[static_cast<std::size_t>(a)]].first;
    out.report.params = params;
    try {
      const PointCloud& emb = clouds[static_cast<std::size_t>(a) + 1];
      const DistanceMatrix dy = pairwise_distances(emb, config.metric);
      const DistanceMatrix dy_norm = normalize_by_diameter(dy);
      const RescaledProfiles py = rescaled_profile(dy_norm, config.convergence(), grid, config.kernel());
      auto& m = out.report.measures;
      m["delta_w"] = magnitude_weight_difference(px.weights, py.weights, config.integration);
      m["delta_M"] = magnitude_profile_difference(px.magnitude, py.magnitude, config.integration);
      m["spearman_dc"] = spearman_distance_correlation(dx, dy);
      m["rmse"] = rmse_distances(dx, dy);
      m["trustworthiness"] = trustworthiness(dx, dy, nbh);
      m["continuity"] = continuity(dx, dy, nbh);
      m["neighbourhood_loss"] = neighbourhood_loss(dx, dy, nbh);
      m["t_conv_original"] = px.magnitude.t_conv;
      m["t_conv_embedding"] = py.magnitude.t_conv;
      out.point_deviation = per_point_weight_deviation(px.weights, py.weights, config.integration);
      ok[static_cast<std::size_t>(a)] = 1;
    } catch (const Error& e) {
      out.error = e.what();
      out.error_kind = e.kind();
    }
  }

  std::vector<RankedReport> result;
  std::vector<RankedReport> errored;
  for (std::size_t a = 0; a < scored.size(); ++a) {
    (ok[a] ? result : errored).push_back(std::move(scored[a]));
  }
  std::stable_sort(result.begin(), result.end(), [](const RankedReport& l, const RankedReport& r) {
    return l.report.measures.at("delta_w") < r.report.measures.at("delta_w");
  });
  for (auto& r : errored) result.push_back(std::move(r));
  for (auto& r : failed) result.push_back(std::move(r));
  return result;
}

}  // namespace magnify
