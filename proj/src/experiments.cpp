#include "cldg/app/experiments.hpp"

#include "cldg/app/output.hpp"
#include "cldg/cldg.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

namespace cldg::app {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

template <typename F>
auto staged(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

InitialCondition<double> initial_condition(const RunConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::double_soliton:
      return InitialCondition<double>(DoubleSoliton<double>{cfg.c1, cfg.c2, cfg.x1, cfg.x2});
    case Experiment::gaussian: return InitialCondition<double>(GaussianPulse<double>{cfg.amplitude});
    default: return InitialCondition<double>(SingleSoliton<double>{cfg.x0});
  }
}

void run_evolution(const RunConfig& cfg, RunSummary& out) {
  const std::string name = experiment_name(cfg.experiment);
  const fs::path dir(cfg.output_dir);
  const std::string stamp = cfg.resolved();
  const auto mesh = staged("mesh", [&] { return make_uniform_mesh(cfg.a, cfg.b, cfg.cells()); });
  const auto ic = initial_condition(cfg);
  const bool snapshots = cfg.experiment != Experiment::conserve_check;
  const std::vector<double> times = snapshots ? cfg.snapshot_times : std::vector<double>{};

  json runs = json::array();
  for (double theta : cfg.thetas) {
    const std::string tag = cfg.thetas.size() > 1 ? name + "_theta" + short_number(theta) : name;
    const SpatialOperator<double> op(mesh, cfg.degree(), FluxParam<double>(theta),
                                     Nonlinearity<double>::cubic(cfg.lambda), cfg.volume_points);
    const StepperConfig<double> sc{cfg.tau, cfg.fp_tolerance, cfg.max_iterations, cfg.initial_data};
    const auto u0 = staged("discretize", [&] { return discretize_initial<double>(op, ic, cfg.initial_data); });
    const auto traj = staged("evolve", [&] { return evolve_field(op, u0, cfg.T, sc, times); });

    const double drift = traj.max_relative_drift();
    out.checks.push_back({"charge_drift" + (cfg.thetas.size() > 1 ? "[theta=" + short_number(theta) + "]" : ""),
                          drift, cfg.drift_tolerance, drift <= cfg.drift_tolerance});

    json run{{"theta", theta},
             {"steps", traj.steps},
             {"initial_charge", traj.charge_series.front().charge},
             {"final_charge", traj.charge_series.back().charge},
             {"max_relative_drift", drift},
             {"max_iterations_used", traj.max_iterations_used}};
    if (cfg.experiment == Experiment::soliton || cfg.experiment == Experiment::conserve_check) {
      const double T = traj.final_field.time();
      const double x0 = cfg.x0;
      run["final_error"] = l2_error(traj.final_field, [&](double x) { return soliton_exact(T, x, x0); });
    }
    if (cfg.experiment == Experiment::conserve_check) {
      const auto bal = entropy_balance(op, traj.final_field);
      const double worst = bal.max_abs_residual() / bal.scale;
      out.checks.push_back({"entropy_balance" + (cfg.thetas.size() > 1 ? "[theta=" + short_number(theta) + "]" : ""),
                            worst, 1e-11, worst <= 1e-11});
    }
    runs.push_back(std::move(run));

    staged("write", [&] {
      const fs::path charge_path = dir / (tag + "_charge.csv");
      write_file(charge_path, [&](std::ostream& os) { write_charge_series(os, traj.charge_series, stamp); });
      out.files.push_back(charge_path.string());
      for (std::size_t i = 0; i < times.size(); ++i) {
        const fs::path p = dir / (tag + "_t" + short_number(times[i]) + ".csv");
        write_file(p, [&](std::ostream& os) { write_snapshot(os, traj.snapshots[i], stamp); });
        out.files.push_back(p.string());
      }
    });
  }
  out.details["runs"] = std::move(runs);
}

void run_converge(const RunConfig& cfg, RunSummary& out) {
  std::vector<ConvergenceRecord<double>> rows;
  json blocks = json::array();
  for (int k : cfg.degrees) {
    for (double theta : cfg.thetas) {
      ConvergenceStudyConfig<double> sc;
      sc.theta = theta;
      sc.degree = k;
      sc.n_list = cfg.n_list;
      sc.T = cfg.T;
      sc.tau = cfg.tau;
      sc.a = cfg.a;
      sc.b = cfg.b;
      sc.x0 = cfg.x0;
      sc.lambda = cfg.lambda;
      sc.fp_tolerance = cfg.fp_tolerance;
      sc.max_iterations = cfg.max_iterations;
      sc.initial_data = cfg.initial_data;
      sc.volume_points = cfg.volume_points;
      const auto block = staged("study", [&] { return convergence_study(sc); });
      json b{{"theta", theta}, {"k", k}, {"rows", json::array()}};
      std::size_t failed = 0;
      for (const auto& r : block) {
        json row{{"N", r.n_cells}, {"l2_error", r.error.empty() ? json(r.l2_error) : json(nullptr)}};
        row["order"] = r.order ? json(*r.order) : json(nullptr);
        if (!r.error.empty()) {
          row["error"] = r.error;
          ++failed;
        }
        b["rows"].push_back(std::move(row));
      }
      out.checks.push_back({"rows_completed[theta=" + short_number(theta) + ",k=" + std::to_string(k) + "]",
                            double(block.size() - failed), double(block.size()), failed == 0});
      blocks.push_back(std::move(b));
      rows.insert(rows.end(), block.begin(), block.end());
    }
  }
  out.details["blocks"] = std::move(blocks);

  const std::string stamp = cfg.resolved();
  const fs::path dir(cfg.output_dir);
  const std::string table = convergence_table(rows);
  staged("write", [&] {
    write_file(dir / "converge.csv", [&](std::ostream& os) { write_convergence(os, rows, stamp); });
    write_file(dir / "converge_table.txt", [&](std::ostream& os) { os << table; });
  });
  out.files.push_back((dir / "converge.csv").string());
  out.files.push_back((dir / "converge_table.txt").string());
  std::cerr << table;
}

void run_project_study(const RunConfig& cfg, RunSummary& out) {
  const double a = cfg.a, len = cfg.b - cfg.a;
  const double two_pi = 2 * std::acos(-1.0);
  auto u = [=](double x) { return std::sin(two_pi * (x - a) / len); };
  const std::string stamp = cfg.resolved();
  const fs::path dir(cfg.output_dir);
  json blocks = json::array();
  for (ProjectionKind kind : cfg.projections) {
    std::vector<ProjectionStudyRow<double>> rows;
    for (double theta : cfg.thetas) {
      for (int k : cfg.degrees) {
        const auto block =
            staged("study", [&] { return projection_order_study(u, kind, theta, k, cfg.n_list, cfg.a, cfg.b); });
        json b{{"projection", projection_kind_name(kind)}, {"theta", theta}, {"k", k}};
        std::vector<double> errors;
        std::vector<Index> ns;
        json singular = json::array();
        for (const auto& r : block) {
          if (r.error.empty()) {
            errors.push_back(r.l2_error);
            ns.push_back(r.n_cells);
          } else {
            singular.push_back(r.n_cells);
          }
        }
        b["fitted_slope"] = errors.size() >= 2 ? json(fitted_order(errors, ns)) : json(nullptr);
        b["singular_N"] = std::move(singular);
        blocks.push_back(std::move(b));
        rows.insert(rows.end(), block.begin(), block.end());
      }
    }
    const fs::path p = dir / ("project_study_" + projection_kind_name(kind) + ".csv");
    staged("write", [&] { write_file(p, [&](std::ostream& os) { write_projection_study(os, rows, stamp); }); });
    out.files.push_back(p.string());
  }
  out.details["blocks"] = std::move(blocks);
}

}  // namespace

bool RunSummary::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

json RunSummary::to_json() const {
  json j{{"experiment", experiment}, {"status", pass() ? "PASS" : "FAIL"}};
  json cs = json::array();
  for (const auto& c : checks)
    cs.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
  j["checks"] = std::move(cs);
  for (const auto& [key, value] : details.items()) j[key] = value;
  j["files"] = files;
  return j;
}

RunSummary run(const RunConfig& cfg) {
  staged("config", [&] { validate(cfg); });
  RunSummary out;
  out.experiment = experiment_name(cfg.experiment);
  switch (cfg.experiment) {
    case Experiment::converge: run_converge(cfg, out); break;
    case Experiment::project_study: run_project_study(cfg, out); break;
    default: run_evolution(cfg, out);
  }
  return out;
}

}  // namespace cldg::app
