#pragma once

#include "cldg/projections.hpp"
#include "cldg/time_integration.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cldg::app {

enum class Experiment { soliton, double_soliton, gaussian, converge, project_study, conserve_check };

std::string experiment_name(Experiment e);

/// Parse or validation failure; line() is 0 when not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct RunConfig {
  Experiment experiment = Experiment::soliton;
  double a = -25, b = 25;
  Index n_cells = 0;
  double h = 0;
  std::vector<Index> n_list;
  std::vector<int> degrees{2};
  std::vector<double> thetas{1.0};
  double lambda = 2;
  double tau = 0;
  double T = 0;
  double x0 = 10;
  double c1 = 1, c2 = -1, x1 = -10, x2 = 10;
  double amplitude = 2;
  std::vector<double> snapshot_times;
  std::string output_dir = "out";
  double fp_tolerance = 1e-13;
  int max_iterations = 100;
  int volume_points = 0;
  InitialData initial_data = InitialData::l2_projection;
  std::vector<ProjectionKind> projections{ProjectionKind::P, ProjectionKind::Q};
  double drift_tolerance = 1e-10;
  bool paper_scale = false;

  int degree() const { return degrees.front(); }
  double theta() const { return thetas.front(); }

  /// Cell count of a single-mesh run: n_cells, or the domain length over h.
  Index cells() const;

  /// One key=value pair per resolved field, in a fixed order.
  std::string resolved() const;
};

/// Flat key=value text, one pair per line, '#' starts a comment.
/// When `forced` is set the experiment key may be omitted but must agree if given.
RunConfig parse_config(const std::string& text, std::optional<Experiment> forced = std::nullopt);

RunConfig load_config(const std::string& path, std::optional<Experiment> forced = std::nullopt);

/// Converge runs at the paper's tau = 1e-5, T = 1.
void apply_paper_scale(RunConfig& cfg);

void validate(const RunConfig& cfg);

}  // namespace cldg::app
