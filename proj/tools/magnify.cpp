#include <CLI11.hpp>
#include <json.hpp>

#include "magnify/config.hpp"
#include "magnify/datasets.hpp"
#include "magnify/error.hpp"
#include "magnify/experiments.hpp"
#include "magnify/io.hpp"
#include "magnify/magnitude_diff.hpp"
#include "magnify/magnitude_kernel.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace magnify;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInternal = 4;

// nlohmann prints the shortest round-trip form; outputs use 17 digits.
void emit_json(const json& j, std::ostringstream& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        out << (first ? "" : ",\n") << pad << json(key).dump() << ": ";
        emit_json(value, out, depth + 1);
        first = false;
      }
      out << '\n' << close_pad << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out << (i ? ",\n" : "") << pad;
        emit_json(j[i], out, depth + 1);
      }
      out << '\n' << close_pad << ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out << (std::isfinite(v) ? format_real(v) : "null");
      return;
    }
    default:
      out << j.dump();
  }
}

std::string json_text(const json& j) {
  std::ostringstream out;
  emit_json(j, out, 0);
  out << '\n';
  return out.str();
}

json config_json(const RunConfig& cfg) {
  json out = json::object();
  for (const auto& [key, value] : cfg.to_map()) out[key] = value;
  return out;
}

struct CommonFlags {
  std::string config_file;
  std::string out_dir = ".";
  std::string metric;
  double epsilon = 0.0;
  int grid = 0;
  std::string integration;
  int k = 0;
  bool dedup = false;
  bool jitter = false;
  std::uint64_t seed = 0;
  int threads = 0;

  CLI::Option* metric_opt = nullptr;
  CLI::Option* epsilon_opt = nullptr;
  CLI::Option* grid_opt = nullptr;
  CLI::Option* integration_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  CLI::Option* dedup_opt = nullptr;
  CLI::Option* jitter_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* threads_opt = nullptr;

  void attach(CLI::App& app) {
    app.add_option("--config", config_file, "key=value config file, or an earlier output to rerun");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    metric_opt = app.add_option("--metric", metric, "euclidean | manhattan");
    epsilon_opt = app.add_option("--epsilon", epsilon, "convergence proportion in (0, 1)");
    grid_opt = app.add_option("--grid", grid, "grid steps m (0 = automatic)");
    integration_opt = app.add_option("--integration", integration, "riemann_sum | trapezoid | romberg");
    k_opt = app.add_option("--k", k, "neighbourhood size");
    dedup_opt = app.add_flag("--dedup", dedup, "drop duplicate points");
    jitter_opt = app.add_flag("--jitter", jitter, "allow a diagonal jitter retry in the Cholesky solve");
    seed_opt = app.add_option("--seed", seed, "random seed");
    threads_opt = app.add_option("--threads", threads, "worker thread cap (0 = default)");
  }

  // File values first, then every flag given on the command line.
  RunConfig resolve() const {
    RunConfig cfg = config_file.empty() ? RunConfig{} : RunConfig::load(config_file);
    if (metric_opt->count()) cfg.metric = parse_metric_kind(metric);
    if (epsilon_opt->count()) cfg.epsilon_prop = epsilon;
    if (grid_opt->count()) cfg.grid_m = grid;
    if (integration_opt->count()) cfg.integration = parse_integration_method(integration);
    if (k_opt->count()) cfg.k = k;
    if (dedup_opt->count()) cfg.dedup = dedup;
    if (jitter_opt->count()) cfg.jitter = jitter;
    if (seed_opt->count()) cfg.seed = seed;
    if (threads_opt->count()) cfg.threads = threads;
    cfg.validate();
#ifdef _OPENMP
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
    return cfg;
  }

  std::string path(const std::string& name) const { return (fs::path(out_dir) / name).string(); }

  void prepare_out() const {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorKind::invalid_input, "cannot create output directory '" + out_dir + "'");
  }
};

std::string csv_with_config(const RunConfig& cfg, const std::string& command, const std::string& body) {
  return "# magnify " + command + '\n' + cfg.to_comment_block() + body;
}

// ---------------------------------------------------------------- compute

struct ComputeArgs {
  std::string input;
  std::vector<double> scales;
  bool weights = false;
  bool precomputed = false;
};

int run_compute(const ComputeArgs& args, const CommonFlags& flags) {
  const RunConfig cfg = flags.resolve();
  std::vector<Eigen::Index> dropped;
  std::optional<std::vector<std::string>> ids;
  std::optional<DistanceMatrix> raw;
  if (args.precomputed) {
    DistanceMatrix d(io::read_matrix(args.input), MetricTag::precomputed, /*allow_duplicates=*/true);
    if (d.degenerate() && cfg.dedup) {
      auto r = deduplicate(d);
      dropped = std::move(r.dropped);
      raw.emplace(std::move(r.distances));
    } else {
      raw.emplace(std::move(d));
    }
  } else {
    PointCloud pc = io::read_point_cloud(args.input);
    if (cfg.dedup) {
      auto r = deduplicate(pc);
      dropped = std::move(r.dropped);
      pc = std::move(r.cloud);
    }
    ids = pc.ids();
    raw.emplace(pairwise_distances(pc, cfg.metric));
  }
  raw->require_magnitude_ready();
  if (raw->size() < 2) throw Error(ErrorKind::degenerate_space, "need at least two distinct points");

  const DistanceMatrix d = normalize_by_diameter(*raw);
  const EvaluationGrid grid = cfg.grid_for(d.size());
  RescaledProfiles prof = rescaled_profile(d, cfg.convergence(), grid, cfg.kernel());
  prof.weights.ids = ids;

  flags.prepare_out();
  std::ostringstream profile_csv;
  io::write_magnitude_profile_csv(profile_csv, prof.magnitude);
  io::write_file(flags.path("profile.csv"), csv_with_config(cfg, "compute", profile_csv.str()));
  if (args.weights) {
    std::ostringstream weights_csv;
    io::write_weight_profile_csv(weights_csv, prof.weights);
    io::write_file(flags.path("weights.csv"), csv_with_config(cfg, "compute", weights_csv.str()));
  }

  json summary;
  summary["command"] = "compute";
  summary["input"] = args.input;
  summary["precomputed"] = args.precomputed;
  summary["n"] = d.size();
  summary["diameter"] = raw->diameter();
  summary["t_conv"] = prof.convergence.t_conv;
  summary["achieved_magnitude"] = prof.convergence.achieved_magnitude;
  summary["epsilon_prop"] = cfg.epsilon_prop;
  summary["grid_m"] = grid.steps();
  summary["dropped_rows"] = dropped;
  if (!args.scales.empty()) {
    std::string scales_csv = "t,magnitude,solver_note\n";
    json scales = json::array();
    for (double t : args.scales) {
      const auto r = magnitude_and_weights(d, t, cfg.kernel());
      scales.push_back({{"t", t}, {"magnitude", r.magnitude}, {"solver_note", to_string(r.solver_note)}});
      scales_csv += format_real(t) + ',' + format_real(r.magnitude) + ',' + to_string(r.solver_note) + '\n';
      std::cout << "M(" << format_real(t) << ") = " << format_real(r.magnitude) << '\n';
    }
    summary["scales"] = scales;
    summary["scales_on"] = "diameter_normalized";
    io::write_file(flags.path("scales.csv"), csv_with_config(cfg, "compute", scales_csv));
  }
  summary["config"] = config_json(cfg);
  io::write_file(flags.path("summary.json"), json_text(summary));
  std::cout << "n = " << d.size() << ", t_conv = " << format_real(prof.convergence.t_conv) << '\n';
  return 0;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  std::string original;
  std::vector<std::string> embeddings;
  bool weights = false;
};

const char* kMeasureOrder[] = {"delta_w",       "delta_M",    "spearman_dc",        "rmse",
                               "trustworthiness", "continuity", "neighbourhood_loss", "t_conv_original",
                               "t_conv_embedding"};

int run_compare(const CompareArgs& args, const CommonFlags& flags) {
  const RunConfig cfg = flags.resolve();
  const PointCloud original = io::read_point_cloud(args.original);
  std::vector<std::pair<std::string, PointCloud>> embeddings;
  for (const auto& path : args.embeddings) embeddings.emplace_back(path, io::read_point_cloud(path));
  const auto reports = ranking_experiment(original, embeddings, cfg);

  std::string csv = "rank,name";
  for (const char* m : kMeasureOrder) csv += std::string(",") + m;
  csv += ",error\n";
  json out;
  out["command"] = "compare";
  out["original"] = args.original;
  out["config"] = config_json(cfg);
  out["params"] = reports.empty() ? json::object() : json(reports.front().report.params);
  json list = json::array();
  int exit_code = 0;
  for (std::size_t r = 0; r < reports.size(); ++r) {
    const auto& rep = reports[r];
    json entry;
    entry["rank"] = r + 1;
    entry["name"] = rep.report.name;
    json measures = json::object();
    csv += std::to_string(r + 1) + ',' + io::csv_field(rep.report.name);
    for (const char* m : kMeasureOrder) {
      const auto it = rep.report.measures.find(m);
      if (it != rep.report.measures.end()) measures[m] = it->second;
      csv += ',' + (it != rep.report.measures.end() ? format_real(it->second) : std::string());
    }
    entry["measures"] = measures;
    entry["error"] = rep.error ? json(*rep.error) : json(nullptr);
    csv += ',' + (rep.error ? io::csv_field(*rep.error) : std::string()) + '\n';
    list.push_back(entry);
    if (rep.error) {
      std::cerr << "magnify: " << rep.report.name << ": " << *rep.error << '\n';
      const bool numerical = rep.error_kind && is_numerical(*rep.error_kind);
      exit_code = std::max(exit_code, numerical ? kExitNumerical : kExitInput);
    }
  }
  out["reports"] = list;

  flags.prepare_out();
  io::write_file(flags.path("report.csv"), csv_with_config(cfg, "compare", csv));
  io::write_file(flags.path("report.json"), json_text(out));

  if (args.weights) {
    std::string dev = "point";
    std::vector<const RankedReport*> scored;
    for (const auto& rep : reports) {
      if (!rep.error) {
        dev += ',' + io::csv_field(rep.report.name);
        scored.push_back(&rep);
      }
    }
    dev += '\n';
    const Eigen::Index n = scored.empty() ? 0 : scored.front()->point_deviation.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      dev += std::to_string(i + 1);
      for (const auto* rep : scored) dev += ',' + format_real(rep->point_deviation(i));
      dev += '\n';
    }
    io::write_file(flags.path("point_deviation.csv"), csv_with_config(cfg, "compare", dev));
  }

  for (std::size_t r = 0; r < reports.size(); ++r) {
    if (reports[r].error) continue;
    std::cout << r + 1 << ". " << reports[r].report.name
              << "  delta_w = " << format_real(reports[r].report.measures.at("delta_w")) << '\n';
  }
  return exit_code;
}

// ---------------------------------------------------------------- stability

struct StabilityArgs {
  std::vector<std::string> datasets{"circles"};
  std::vector<Eigen::Index> ns{100, 500, 1000};
  std::vector<double> bs{1e-4, 1e-3, 5e-3, 1e-2, 5e-2};
  int reps = 10;
};

int run_stability(const StabilityArgs& args, const CommonFlags& flags) {
  RunConfig cfg = flags.resolve();
  if (!cfg.seed) cfg.seed = 0;
  std::string csv = "dataset,n,b,repetitions,mean_profile_diff,std_profile_diff\n";
  json out;
  out["command"] = "stability";
  out["generator"] = kGeneratorName;
  out["config"] = config_json(cfg);
  json results = json::array();
  for (const auto& name : args.datasets) {
    const auto res = stability_experiment(name, args.ns, args.bs, args.reps, Seed{*cfg.seed}, cfg);
    json rows = json::array();
    for (const auto& row : res.rows) {
      csv += row.dataset + ',' + std::to_string(row.n) + ',' + format_real(row.b) + ',' +
             std::to_string(row.repetitions) + ',' + format_real(row.mean_profile_diff) + ',' +
             format_real(row.std_profile_diff) + '\n';
      rows.push_back({{"n", row.n},
                      {"b", row.b},
                      {"repetitions", row.repetitions},
                      {"mean_profile_diff", row.mean_profile_diff},
                      {"std_profile_diff", row.std_profile_diff}});
      std::cout << row.dataset << " n = " << row.n << " b = " << format_real(row.b)
                << " mean = " << format_real(row.mean_profile_diff) << '\n';
    }
    json runs = json::array();
    for (const auto& run : res.runs) {
      runs.push_back({{"n", run.n},
                      {"b", run.b},
                      {"rep", run.rep},
                      {"profile_diff", run.profile_diff},
                      {"t_conv_clean", run.t_conv_clean},
                      {"t_conv_noisy", run.t_conv_noisy}});
    }
    results.push_back({{"dataset", name}, {"rows", rows}, {"runs", runs}});
  }
  out["results"] = results;
  flags.prepare_out();
  io::write_file(flags.path("stability.csv"), csv_with_config(cfg, "stability", csv));
  io::write_file(flags.path("stability.json"), json_text(out));
  return 0;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string name;
  Eigen::Index n = 300;
  bool raw = false;
};

int run_gen(const GenArgs& args, const CommonFlags& flags) {
  RunConfig cfg = flags.resolve();
  if (!cfg.seed) cfg.seed = 0;
  const Seed seed{*cfg.seed};
  std::vector<std::pair<std::string, PointCloud>> files;
  if (args.name == "swiss_roll") {
    auto sr = swiss_roll(args.n, seed);
    files.emplace_back("swiss_roll.csv", std::move(sr.rolled));
    files.emplace_back("swiss_roll_truth.csv", std::move(sr.truth));
  } else if (args.name == "planets") {
    files.emplace_back("planets.csv", args.raw ? planets_table() : planets_dataset());
  } else if (args.name == "planets_mass") {
    files.emplace_back("planets_mass.csv", args.raw ? planets_mass_table() : planets_mass_dataset());
  } else {
    files.emplace_back(args.name + ".csv", make_dataset(args.name, args.n, seed));
  }
  flags.prepare_out();
  for (const auto& [file, pc] : files) {
    std::ostringstream body;
    body << "# dataset " << args.name << " n=" << pc.size() << (args.raw ? " raw" : "") << '\n'
         << "# generator " << kGeneratorName << '\n';
    io::write_point_cloud_csv(body, pc);
    io::write_file(flags.path(file), csv_with_config(cfg, "gen", body.str()));
    std::cout << flags.path(file) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnitude of finite metric spaces and embedding quality"};
  app.require_subcommand(1);

  CommonFlags compute_flags, compare_flags, stability_flags, gen_flags;
  ComputeArgs compute_args;
  CompareArgs compare_args;
  StabilityArgs stability_args;
  GenArgs gen_args;

  auto* compute = app.add_subcommand("compute", "magnitude profile of one space");
  compute->add_option("input", compute_args.input, "point cloud CSV, or distance matrix with --precomputed")->required();
  compute->add_option("--scales", compute_args.scales, "scales t (comma separated) on the diameter-normalized distances")->delimiter(',');
  compute->add_flag("--weights", compute_args.weights, "also write the weight profile");
  compute->add_flag("--precomputed", compute_args.precomputed, "input is a distance matrix (CSV or .bin)");
  compute_flags.attach(*compute);

  auto* compare = app.add_subcommand("compare", "rank embeddings of one point cloud");
  compare->add_option("original", compare_args.original, "original point cloud CSV")->required();
  compare->add_option("embeddings", compare_args.embeddings, "embedding CSVs, row-aligned")->required();
  compare->add_flag("--weights", compare_args.weights, "also write per-point weight deviations");
  compare_flags.attach(*compare);

  auto* stability = app.add_subcommand("stability", "magnitude under Laplace noise");
  stability->add_option("--dataset", stability_args.datasets, "circles, swiss_roll, gaussian_blobs")
      ->delimiter(',')
      ->capture_default_str();
  stability->add_option("--ns", stability_args.ns, "sample sizes")->delimiter(',')->capture_default_str();
  stability->add_option("--bs", stability_args.bs, "Laplace scales")->delimiter(',')->capture_default_str();
  stability->add_option("--reps", stability_args.reps, "repetitions")->capture_default_str();
  stability_flags.attach(*stability);

  auto* gen = app.add_subcommand("gen", "write a dataset as CSV");
  gen->add_option("name", gen_args.name, "circles, swiss_roll, gaussian_blobs, planets, planets_mass")->required();
  gen->add_option("--n", gen_args.n, "number of points")->capture_default_str();
  gen->add_flag("--raw", gen_args.raw, "planets without standard scaling");
  gen_flags.attach(*gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (compute->parsed()) return run_compute(compute_args, compute_flags);
    if (compare->parsed()) return run_compare(compare_args, compare_flags);
    if (stability->parsed()) return run_stability(stability_args, stability_flags);
    if (gen->parsed()) return run_gen(gen_args, gen_flags);
  } catch (const Error& e) {
    std::cerr << "magnify: error: " << e.what() << '\n';
    return e.is_numerical() ? kExitNumerical : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "magnify: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
