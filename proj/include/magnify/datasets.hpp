#pragma once

#include "magnify/metric_core.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace magnify {

struct Seed {
  std::uint64_t value = 0;
};

/// Identifier of the random stream construction below; written into output
/// metadata so that datasets can be reproduced elsewhere.
inline constexpr const char* kGeneratorName = "mt19937_64 seeded per stream via splitmix64(seed, stream)";

std::uint64_t splitmix64(std::uint64_t x);

/// Independent, portable random stream. Uniform and normal variates are
/// produced from raw engine output, not from std distributions, whose
/// algorithms differ between standard libraries.
class RandomStream {
 public:
  RandomStream(Seed seed, std::uint64_t stream_id);

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal();   // standard normal, Box-Muller
  double laplace(double b);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct SwissRoll {
  PointCloud rolled;  // (u cos u, v, u sin u)
  PointCloud truth;   // (u, v)
};

SwissRoll swiss_roll(Eigen::Index n, Seed seed);

// Radial jitter bound for circles().
inline constexpr double kCircleJitter = 0.01;

/// Two concentric circles of radius 1 (first n/2 rows) and 0.5 (the rest),
/// uniformly random angles, radii jittered uniformly by at most kCircleJitter.
PointCloud circles(Eigen::Index n, Seed seed);

/// n points split evenly across centers (rows of `centers`) in contiguous
/// blocks, isotropic Gaussian noise of scale sigma.
PointCloud gaussian_blobs(Eigen::Index n, const Matrix& centers, double sigma, Seed seed);

// Three well-separated 2D centers used by the stability experiment.
Matrix default_blob_centers();

/// Adds i.i.d. Laplace(0, b) noise to every coordinate.
PointCloud laplace_noise(const PointCloud& pc, double b, Seed seed);

/// Planet table (Diameter km, Density kg/m^3, Gravity m/s^2) exactly as
/// printed, without scaling. Ids are planet names.
PointCloud planets_table();

/// planets_table() with each column standard-scaled (population std).
PointCloud planets_dataset();

/// Planet features (Mass 10^24 kg, Diameter km, Density kg/m^3), raw.
PointCloud planets_mass_table();

/// planets_mass_table() standard-scaled. On diameter-normalized Euclidean
/// distances this reproduces the reference magnitude values
/// 1.05 / 1.57 / 4.87 / 7.78 at t = 0.1 / 1 / 10 / 100.
PointCloud planets_mass_dataset();

/// Subtract column means and divide by population standard deviations.
/// Constant columns are only centred.
PointCloud standard_scale(const PointCloud& pc);

/// Removes one coordinate column.
PointCloud drop_axis(const PointCloud& pc, Eigen::Index axis);

/// Builds a named synthetic dataset: circles, swiss_roll or gaussian_blobs.
PointCloud make_dataset(const std::string& name, Eigen::Index n, Seed seed);

}  // namespace magnify
