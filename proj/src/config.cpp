#include "cldg/app/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cldg::app {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& text, int line) {
  double v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError(line, key + ": expected a number, got '" + text + "'");
  return v;
}

long long to_integer(const std::string& key, const std::string& text, int line) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(line, key + ": expected an integer, got '" + text + "'");
  return v;
}

template <typename T, typename F>
std::vector<T> to_list(const std::string& key, const std::string& text, int line, F&& convert) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) {
    if (item.empty()) throw ConfigError(line, key + ": empty list entry");
    out.push_back(static_cast<T>(convert(key, item, line)));
  }
  if (out.empty()) throw ConfigError(line, key + ": empty list");
  return out;
}

Experiment to_experiment(const std::string& text, int line) {
  static const std::map<std::string, Experiment> names{
      {"soliton", Experiment::soliton},           {"double_soliton", Experiment::double_soliton},
      {"gaussian", Experiment::gaussian},         {"converge", Experiment::converge},
      {"project_study", Experiment::project_study}, {"conserve_check", Experiment::conserve_check}};
  const auto it = names.find(text);
  if (it == names.end()) throw ConfigError(line, "experiment: unknown kind '" + text + "'");
  return it->second;
}

ProjectionKind to_projection(const std::string& text, int line) {
  if (text == "P") return ProjectionKind::P;
  if (text == "Q") return ProjectionKind::Q;
  if (text == "Q_printed") return ProjectionKind::Q_printed;
  throw ConfigError(line, "projection: unknown kind '" + text + "'");
}

bool evolves(Experiment e) { return e != Experiment::converge && e != Experiment::project_study; }

std::string format_number(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + fmt(items[i]);
  return out;
}

}  // namespace

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::soliton: return "soliton";
    case Experiment::double_soliton: return "double_soliton";
    case Experiment::gaussian: return "gaussian";
    case Experiment::converge: return "converge";
    case Experiment::project_study: return "project_study";
    case Experiment::conserve_check: return "conserve_check";
  }
  return "unknown";
}

Index RunConfig::cells() const {
  if (n_cells > 0) return n_cells;
  return static_cast<Index>(std::llround((b - a) / h));
}

std::string RunConfig::resolved() const {
  auto num = [](double v) { return format_number(v); };
  auto idx = [](Index v) { return std::to_string(v); };
  std::ostringstream os;
  os << "experiment=" << experiment_name(experiment) << "; domain=" << num(a) << "," << num(b);
  if (experiment == Experiment::converge || experiment == Experiment::project_study)
    os << "; N_list=" << join(n_list, idx);
  else
    os << "; n_cells=" << cells();
  os << "; k=" << join(degrees, idx) << "; theta=" << join(thetas, num);
  if (experiment == Experiment::project_study) {
    os << "; projection=" << join(projections, projection_kind_name);
    return os.str();
  }
  os << "; lambda=" << num(lambda) << "; tau=" << num(tau) << "; T=" << num(T);
  switch (experiment) {
    case Experiment::double_soliton:
      os << "; c1=" << num(c1) << "; c2=" << num(c2) << "; x1=" << num(x1) << "; x2=" << num(x2);
      break;
    case Experiment::gaussian: os << "; A=" << num(amplitude); break;
    default: os << "; x0=" << num(x0);
  }
  if (evolves(experiment)) os << "; snapshot_times=" << join(snapshot_times, num);
  os << "; fp_tolerance=" << num(fp_tolerance) << "; max_iterations=" << max_iterations
     << "; volume_points=" << volume_points << "; initial_data="
     << (initial_data == InitialData::l2_projection ? "l2_projection" : "generalized_P");
  if (evolves(experiment)) os << "; drift_tolerance=" << num(drift_tolerance);
  if (paper_scale) os << "; paper_scale=1";
  return os.str();
}

RunConfig parse_config(const std::string& text, std::optional<Experiment> forced) {
  RunConfig cfg;
  std::map<std::string, std::pair<std::string, int>> entries;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string content = trim(raw.substr(0, raw.find('#')));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key=value, got '" + content + "'");
    const std::string key = trim(content.substr(0, eq)), value = trim(content.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "missing key");
    if (value.empty()) throw ConfigError(line, key + ": missing value");
    if (entries.count(key)) throw ConfigError(line, "duplicate key '" + key + "'");
    entries[key] = {value, line};
  }

  if (auto it = entries.find("experiment"); it != entries.end()) {
    cfg.experiment = to_experiment(it->second.first, it->second.second);
    if (forced && *forced != cfg.experiment)
      throw ConfigError(it->second.second, "experiment: expected " + experiment_name(*forced) + ", got " +
                                               experiment_name(cfg.experiment));
  } else if (forced) {
    cfg.experiment = *forced;
  } else {
    throw ConfigError(0, "missing required key 'experiment'");
  }

  switch (cfg.experiment) {
    case Experiment::converge:
      cfg.a = -30, cfg.b = 30;
      cfg.n_list = {60, 120, 240};
      cfg.tau = 1e-4, cfg.T = 0.5;
      break;
    case Experiment::project_study:
      cfg.a = 0, cfg.b = 1;
      cfg.n_list = {16, 32, 64};
      cfg.degrees = {1, 2, 3};
      cfg.thetas = {0.4, 0.9, 1.0};
      break;
    default: break;
  }

  std::set<std::string> seen;
  for (const auto& [key, entry] : entries) {
    const auto& [value, ln] = entry;
    seen.insert(key);
    if (key == "experiment") continue;
    if (key == "domain") {
      const auto d = to_list<double>(key, value, ln, to_double);
      if (d.size() != 2) throw ConfigError(ln, "domain: expected 'a,b'");
      cfg.a = d[0], cfg.b = d[1];
    } else if (key == "n_cells") {
      cfg.n_cells = to_integer(key, value, ln);
    } else if (key == "h") {
      cfg.h = to_double(key, value, ln);
    } else if (key == "N_list") {
      cfg.n_list = to_list<Index>(key, value, ln, to_integer);
    } else if (key == "k") {
      cfg.degrees = to_list<int>(key, value, ln, to_integer);
      for (int k : cfg.degrees)
        if (k < 0 || k > 12) throw ConfigError(ln, "k: " + std::to_string(k) + " outside [0, 12]");
    } else if (key == "theta") {
      cfg.thetas = to_list<double>(key, value, ln, to_double);
      for (double t : cfg.thetas)
        if (!(t >= 0 && t <= 1)) throw ConfigError(ln, "theta: " + format_number(t) + " outside [0, 1]");
    } else if (key == "lambda") {
      cfg.lambda = to_double(key, value, ln);
    } else if (key == "tau") {
      cfg.tau = to_double(key, value, ln);
    } else if (key == "T") {
      cfg.T = to_double(key, value, ln);
    } else if (key == "x0") {
      cfg.x0 = to_double(key, value, ln);
    } else if (key == "c1") {
      cfg.c1 = to_double(key, value, ln);
    } else if (key == "c2") {
      cfg.c2 = to_double(key, value, ln);
    } else if (key == "x1") {
      cfg.x1 = to_double(key, value, ln);
    } else if (key == "x2") {
      cfg.x2 = to_double(key, value, ln);
    } else if (key == "A") {
      cfg.amplitude = to_double(key, value, ln);
    } else if (key == "snapshot_times") {
      cfg.snapshot_times = to_list<double>(key, value, ln, to_double);
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "fp_tolerance") {
      cfg.fp_tolerance = to_double(key, value, ln);
    } else if (key == "max_iterations") {
      cfg.max_iterations = static_cast<int>(to_integer(key, value, ln));
    } else if (key == "volume_points") {
      cfg.volume_points = static_cast<int>(to_integer(key, value, ln));
    } else if (key == "initial_data") {
      if (value == "l2_projection") cfg.initial_data = InitialData::l2_projection;
      else if (value == "generalized_P") cfg.initial_data = InitialData::generalized_P;
      else throw ConfigError(ln, "initial_data: expected l2_projection or generalized_P");
    } else if (key == "projection") {
      cfg.projections.clear();
      for (const auto& item : split_list(value)) cfg.projections.push_back(to_projection(item, ln));
    } else if (key == "drift_tolerance") {
      cfg.drift_tolerance = to_double(key, value, ln);
    } else {
      throw ConfigError(ln, "unknown key '" + key + "'");
    }
  }

  auto require = [&](const std::string& key) {
    if (!seen.count(key)) throw ConfigError(0, "missing required key '" + key + "' for " +
                                                   experiment_name(cfg.experiment));
  };

  if (evolves(cfg.experiment)) {
    require("domain");
    require("tau");
    require("T");
    if (seen.count("n_cells") == seen.count("h"))
      throw ConfigError(0, "exactly one of 'n_cells' and 'h' is required for " + experiment_name(cfg.experiment));
    if (cfg.snapshot_times.empty()) cfg.snapshot_times = {0.0, cfg.T};
  }
  if (cfg.experiment == Experiment::conserve_check && !seen.count("theta"))
    cfg.thetas = {0.0, 0.25, 0.5, 0.75, 1.0};

  validate(cfg);
  return cfg;
}

void validate(const RunConfig& cfg) {
  const bool sweep = cfg.experiment == Experiment::converge || cfg.experiment == Experiment::project_study ||
                     cfg.experiment == Experiment::conserve_check;
  if (!(cfg.b > cfg.a)) throw ConfigError(0, "domain: need a < b");
  if (cfg.thetas.empty()) throw ConfigError(0, "theta: empty list");
  for (double t : cfg.thetas)
    if (!(t >= 0 && t <= 1)) throw ConfigError(0, "theta: " + format_number(t) + " outside [0, 1]");
  for (int k : cfg.degrees)
    if (k < 0 || k > 12) throw ConfigError(0, "k: " + std::to_string(k) + " outside [0, 12]");
  if (!sweep && (cfg.thetas.size() != 1 || cfg.degrees.size() != 1))
    throw ConfigError(0, "theta and k take a single value for " + experiment_name(cfg.experiment));
  if (cfg.experiment == Experiment::conserve_check && cfg.degrees.size() != 1)
    throw ConfigError(0, "k takes a single value for conserve_check");

  if (evolves(cfg.experiment)) {
    if (cfg.n_cells < 0) throw ConfigError(0, "n_cells: must be positive");
    if (cfg.n_cells == 0 && !(cfg.h > 0)) throw ConfigError(0, "h: must be positive");
    if (cfg.n_cells == 0) {
      const double n = (cfg.b - cfg.a) / cfg.h;
      if (std::abs(n - std::round(n)) > 1e-9 * n)
        throw ConfigError(0, "h: domain length is not a multiple of h");
    }
    if (cfg.cells() < 2) throw ConfigError(0, "n_cells: need at least 2 cells");
    for (double t : cfg.snapshot_times)
      if (t < 0 || t > cfg.T * (1 + 1e-12))
        throw ConfigError(0, "snapshot_times: " + format_number(t) + " outside [0, T]");
    if (!(cfg.drift_tolerance > 0)) throw ConfigError(0, "drift_tolerance: must be positive");
  } else {
    if (cfg.n_list.empty()) throw ConfigError(0, "N_list: empty");
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
      if (cfg.n_list[i] < 2) throw ConfigError(0, "N_list: need at least 2 cells per mesh");
      if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1])
        throw ConfigError(0, "N_list: must be strictly increasing");
    }
  }
  if (cfg.experiment != Experiment::project_study) {
    if (!(cfg.tau > 0)) throw ConfigError(0, "tau: must be positive");
    if (!(cfg.T > 0)) throw ConfigError(0, "T: must be positive");
    if (!(cfg.fp_tolerance > 0)) throw ConfigError(0, "fp_tolerance: must be positive");
    if (cfg.max_iterations < 1) throw ConfigError(0, "max_iterations: must be at least 1");
  }
  if (cfg.volume_points < 0) throw ConfigError(0, "volume_points: must be non-negative");
  if (cfg.experiment == Experiment::project_study && cfg.projections.empty())
    throw ConfigError(0, "projection: empty list");
}

RunConfig load_config(const std::string& path, std::optional<Experiment> forced) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), forced);
}

void apply_paper_scale(RunConfig& cfg) {
  cfg.paper_scale = true;
  if (cfg.experiment == Experiment::converge) {
    cfg.tau = 1e-5;
    cfg.T = 1.0;
  }
}

}  // namespace cldg::app
