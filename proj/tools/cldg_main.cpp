#include "cldg/app/checks.hpp"
#include "cldg/app/config.hpp"
#include "cldg/app/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

using cldg::app::Experiment;

int run_config(const std::string& path, std::optional<Experiment> forced, bool paper_scale,
               const std::string& out_dir) {
  nlohmann::ordered_json failure;
  try {
    cldg::app::RunConfig cfg;
    try {
      cfg = cldg::app::load_config(path, forced);
      if (paper_scale) cldg::app::apply_paper_scale(cfg);
      if (!out_dir.empty()) cfg.output_dir = out_dir;
    } catch (const std::exception& e) {
      throw cldg::app::StageError("config", e.what());
    }
    const auto summary = cldg::app::run(cfg);
    std::cout << summary.to_json().dump(2) << std::endl;
    return summary.pass() ? 0 : 1;
  } catch (const cldg::app::StageError& e) {
    failure = {{"status", "ERROR"}, {"stage", e.stage()}, {"message", e.what()}};
  } catch (const std::exception& e) {
    failure = {{"status", "ERROR"}, {"stage", "run"}, {"message", e.what()}};
  }
  std::cout << failure.dump(2) << std::endl;
  std::cerr << "cldg: " << failure["stage"].get<std::string>() << " failed: "
            << failure["message"].get<std::string>() << std::endl;
  return 2;
}

int run_selftest() {
  bool pass = true;
  for (const auto& r : cldg::app::selftest()) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << std::endl;
    pass = pass && r.pass;
  }
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conservative LDG solver for the 1D nonlinear Schroedinger equation"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  bool paper_scale = false;
  auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "key=value configuration file")->required()->check(CLI::ExistingFile);
    sub->add_flag("--paper-scale", paper_scale, "converge at tau = 1e-5, T = 1");
    sub->add_option("--out", out_dir, "output directory, overrides output_dir");
  };
  auto* run = app.add_subcommand("run", "run the experiment named in the config");
  auto* converge = app.add_subcommand("converge", "convergence study");
  auto* study = app.add_subcommand("project-study", "projection error slopes");
  auto* self = app.add_subcommand("selftest", "invariant suite; exit 0 iff all pass");
  add_run_options(run);
  add_run_options(converge);
  add_run_options(study);

  CLI11_PARSE(app, argc, argv);

  if (*run) return run_config(config_path, std::nullopt, paper_scale, out_dir);
  if (*converge) return run_config(config_path, Experiment::converge, paper_scale, out_dir);
  if (*study) return run_config(config_path, Experiment::project_study, paper_scale, out_dir);
  if (*self) return run_selftest();
  return 1;
}
