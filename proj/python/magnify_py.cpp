#include "magnify/datasets.hpp"
#include "magnify/error.hpp"
#include "magnify/magnitude_diff.hpp"
#include "magnify/magnitude_kernel.hpp"
#include "magnify/quality_baselines.hpp"
#include "magnify/scale_finder.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace magnify;

namespace {

DistanceMatrix precomputed(const Matrix& d) { return DistanceMatrix(d, MetricTag::precomputed); }

DistanceMatrix from_points(const Matrix& x, const std::string& metric) {
  return pairwise_distances(PointCloud(x), parse_metric_kind(metric));
}

DistanceMatrix resolve(const Matrix& data, bool is_precomputed, const std::string& metric) {
  return is_precomputed ? precomputed(data) : from_points(data, metric);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Magnitude of finite metric spaces, rescaled profiles and embedding-quality measures.";

  // Raised for every library error; `kind` names the error category.
  static PyObject* error_type = PyErr_NewException("magnify._core.MagnifyError", PyExc_ValueError, nullptr);
  m.add_object("MagnifyError", py::handle(error_type));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type)(e.what());
      exc.attr("kind") = to_string(e.kind());
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  m.def(
      "distances", [](const Matrix& x, const std::string& metric) { return from_points(x, metric).values(); },
      py::arg("points"), py::arg("metric") = "euclidean", "Pairwise distance matrix of the rows of `points`.");

  m.def(
      "magnitude",
      [](const Matrix& d, double t, bool jitter) {
        const auto r = magnitude_and_weights(precomputed(d), t, KernelOptions{jitter});
        return py::make_tuple(r.magnitude, r.weights);
      },
      py::arg("distances"), py::arg("t"), py::arg("jitter") = false,
      "(magnitude, weights) of the space with distances scaled by t.");

  m.def(
      "magnitude_function",
      [](const Matrix& d, const std::vector<double>& ts, bool jitter) {
        std::vector<double> out;
        for (const auto& r : magnitude_function(precomputed(d), ts, KernelOptions{jitter})) out.push_back(r.magnitude);
        return out;
      },
      py::arg("distances"), py::arg("ts"), py::arg("jitter") = false);

  m.def(
      "convergence_scale",
      [](const Matrix& d, double epsilon, bool jitter) {
        ConvergenceSpec spec;
        spec.epsilon_prop = epsilon;
        return find_convergence_scale(precomputed(d), spec, KernelOptions{jitter}).t_conv;
      },
      py::arg("distances"), py::arg("epsilon") = 0.05, py::arg("jitter") = false,
      "Smallest scale (to 1e-6 relative) where the magnitude reaches (1 - epsilon) n.");

  py::class_<RescaledProfiles>(m, "Profile")
      .def_property_readonly("t_conv", [](const RescaledProfiles& p) { return p.magnitude.t_conv; })
      .def_property_readonly("n", [](const RescaledProfiles& p) { return p.magnitude.n; })
      .def_property_readonly("s", [](const RescaledProfiles& p) { return p.magnitude.grid.s_values(); })
      .def_property_readonly("magnitude", [](const RescaledProfiles& p) { return p.magnitude.values; })
      .def_property_readonly("weights", [](const RescaledProfiles& p) { return p.weights.weights; })
      .def("__repr__", [](const RescaledProfiles& p) {
        return "<Profile n=" + std::to_string(p.magnitude.n) + " m=" + std::to_string(p.magnitude.grid.steps()) +
               " t_conv=" + std::to_string(p.magnitude.t_conv) + ">";
      });

  m.def(
      "profile",
      [](const Matrix& data, bool is_precomputed, const std::string& metric, double epsilon, int grid, bool jitter) {
        const auto d = normalize_by_diameter(resolve(data, is_precomputed, metric));
        ConvergenceSpec spec;
        spec.epsilon_prop = epsilon;
        const EvaluationGrid g = grid > 0 ? EvaluationGrid(grid) : EvaluationGrid::default_for(d.size());
        return rescaled_profile(d, spec, g, KernelOptions{jitter});
      },
      py::arg("data"), py::arg("precomputed") = false, py::arg("metric") = "euclidean", py::arg("epsilon") = 0.05,
      py::arg("grid") = 0, py::arg("jitter") = false,
      "Rescaled magnitude and weight profiles on the diameter-normalized space. grid=0 picks the default.");

  m.def(
      "profile_difference",
      [](const RescaledProfiles& a, const RescaledProfiles& b, const std::string& integration) {
        return magnitude_profile_difference(a.magnitude, b.magnitude, parse_integration_method(integration));
      },
      py::arg("a"), py::arg("b"), py::arg("integration") = "trapezoid");
  m.def(
      "weight_difference",
      [](const RescaledProfiles& a, const RescaledProfiles& b, const std::string& integration) {
        return magnitude_weight_difference(a.weights, b.weights, parse_integration_method(integration));
      },
      py::arg("a"), py::arg("b"), py::arg("integration") = "trapezoid");
  m.def(
      "per_point_deviation",
      [](const RescaledProfiles& a, const RescaledProfiles& b, const std::string& integration) {
        return per_point_weight_deviation(a.weights, b.weights, parse_integration_method(integration));
      },
      py::arg("a"), py::arg("b"), py::arg("integration") = "trapezoid");

  auto neighbourhood = [&m](const char* name, double (*fn)(const DistanceMatrix&, const DistanceMatrix&,
                                                           const NeighborhoodSpec&)) {
    m.def(
        name,
        [fn](const Matrix& x, const Matrix& y, int k, const std::string& metric) {
          return fn(from_points(x, metric), from_points(y, metric), NeighborhoodSpec{k});
        },
        py::arg("original"), py::arg("embedding"), py::arg("k") = 30, py::arg("metric") = "euclidean");
  };
  neighbourhood("trustworthiness", trustworthiness);
  neighbourhood("continuity", continuity);
  neighbourhood("neighbourhood_loss", neighbourhood_loss);

  m.def(
      "spearman",
      [](const Matrix& x, const Matrix& y, const std::string& metric) {
        return spearman_distance_correlation(from_points(x, metric), from_points(y, metric));
      },
      py::arg("original"), py::arg("embedding"), py::arg("metric") = "euclidean");
  m.def(
      "rmse",
      [](const Matrix& x, const Matrix& y, const std::string& metric) {
        return rmse_distances(from_points(x, metric), from_points(y, metric));
      },
      py::arg("original"), py::arg("embedding"), py::arg("metric") = "euclidean");

  m.def(
      "circles", [](Eigen::Index n, std::uint64_t seed) { return circles(n, Seed{seed}).points(); }, py::arg("n"),
      py::arg("seed") = 0);
  m.def(
      "swiss_roll",
      [](Eigen::Index n, std::uint64_t seed) {
        const auto sr = swiss_roll(n, Seed{seed});
        return py::make_tuple(sr.rolled.points(), sr.truth.points());
      },
      py::arg("n"), py::arg("seed") = 0, "(rolled 3-D points, flat 2-D ground truth).");
  m.def(
      "gaussian_blobs",
      [](Eigen::Index n, std::uint64_t seed) {
        return make_dataset("gaussian_blobs", n, Seed{seed}).points();
      },
      py::arg("n"), py::arg("seed") = 0);
  m.def(
      "planets",
      [](bool mass, bool raw) {
        if (mass) return (raw ? planets_mass_table() : planets_mass_dataset()).points();
        return (raw ? planets_table() : planets_dataset()).points();
      },
      py::arg("mass") = true, py::arg("raw") = false);
}
