#include "magnify/config.hpp"

#include "magnify/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace magnify {

namespace {

constexpr const char* kCommentPrefix = "#config ";

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::invalid_input, "config key '" + key + "': not a number: '" + v + "'");
  }
  return out;
}

long long parse_integer(const std::string& key, const std::string& v) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error(ErrorKind::invalid_input, "config key '" + key + "': not an integer: '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorKind::invalid_input, "config key '" + key + "': not a boolean: '" + v + "'");
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void RunConfig::validate() const {
  if (!(epsilon_prop > 0.0 && epsilon_prop < 1.0)) {
    throw Error(ErrorKind::invalid_input, "epsilon must lie in (0, 1)");
  }
  if (grid_m < 0) throw Error(ErrorKind::invalid_input, "grid must be positive (or 0 for automatic)");
  if (integration == IntegrationMethod::romberg && grid_m > 0 && (grid_m & (grid_m - 1)) != 0) {
    throw Error(ErrorKind::invalid_input, "romberg integration needs a power-of-two grid");
  }
  if (k < 1) throw Error(ErrorKind::invalid_input, "k must be at least 1");
  if (threads < 0) throw Error(ErrorKind::invalid_input, "threads must be nonnegative");
}

EvaluationGrid RunConfig::grid_for(Eigen::Index n) const {
  return grid_m > 0 ? EvaluationGrid(grid_m) : EvaluationGrid::default_for(n);
}

ConvergenceSpec RunConfig::convergence() const {
  ConvergenceSpec spec;
  spec.epsilon_prop = epsilon_prop;
  return spec;
}

std::map<std::string, std::string> RunConfig::to_map() const {
  std::map<std::string, std::string> out;
  out["metric"] = to_string(metric);
  out["epsilon"] = format_real(epsilon_prop);
  out["grid"] = std::to_string(grid_m);
  out["integration"] = to_string(integration);
  out["k"] = std::to_string(k);
  out["dedup"] = dedup ? "true" : "false";
  out["jitter"] = jitter ? "true" : "false";
  out["seed"] = seed ? std::to_string(*seed) : "";
  out["threads"] = std::to_string(threads);
  return out;
}

RunConfig RunConfig::from_map(const std::map<std::string, std::string>& values) {
  RunConfig cfg;
  for (const auto& [key, value] : values) {
    if (key == "metric") {
      cfg.metric = parse_metric_kind(value);
    } else if (key == "epsilon") {
      cfg.epsilon_prop = parse_real(key, value);
    } else if (key == "grid") {
      cfg.grid_m = static_cast<int>(parse_integer(key, value));
    } else if (key == "integration") {
      cfg.integration = parse_integration_method(value);
    } else if (key == "k") {
      cfg.k = static_cast<int>(parse_integer(key, value));
    } else if (key == "dedup") {
      cfg.dedup = parse_bool(key, value);
    } else if (key == "jitter") {
      cfg.jitter = parse_bool(key, value);
    } else if (key == "seed") {
      if (value.empty()) {
        cfg.seed.reset();
      } else {
        std::uint64_t parsed = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
        if (ec != std::errc() || ptr != value.data() + value.size()) {
          throw Error(ErrorKind::invalid_input, "config key 'seed': not an unsigned 64-bit integer: '" + value + "'");
        }
        cfg.seed = parsed;
      }
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(parse_integer(key, value));
    } else {
      throw Error(ErrorKind::invalid_input, "unknown config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  for (const auto& [key, value] : to_map()) os << key << '=' << value << '\n';
  return os.str();
}

RunConfig RunConfig::from_text(const std::string& text) {
  std::map<std::string, std::string> values;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::invalid_input, "config line " + std::to_string(line_no) + " lacks '='");
    }
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return from_map(values);
}

std::string RunConfig::to_comment_block() const {
  std::ostringstream os;
  for (const auto& [key, value] : to_map()) os << kCommentPrefix << key << '=' << value << '\n';
  return os.str();
}

std::optional<RunConfig> RunConfig::from_comment_block(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::string body;
  bool found = false;
  while (std::getline(is, line)) {
    if (line.rfind(kCommentPrefix, 0) != 0) continue;
    body += line.substr(std::char_traits<char>::length(kCommentPrefix)) + '\n';
    found = true;
  }
  if (!found) return std::nullopt;
  return from_text(body);
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (auto embedded = from_comment_block(text)) return *embedded;
  return from_text(text);
}

}  // namespace magnify
