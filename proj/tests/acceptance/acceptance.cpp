#include "cldg/app/checks.hpp"
#include "cldg/app/config.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>

using namespace cldg::app;

namespace {

int failures = 0;

template <typename F>
void criterion(F&& check) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = check();
  } catch (const std::exception& e) {
    r = {"unnamed", false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!r.pass) ++failures;
  std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << " [" << secs << " s]" << std::endl;
}

std::vector<RunConfig> desk_fixtures() {
  const std::filesystem::path dir(CLDG_CONFIG_DIR);
  const auto out = std::filesystem::temp_directory_path() / "cldg_acceptance";
  std::vector<RunConfig> configs{load_config((dir / "double_soliton_h05.cfg").string()),
                                 load_config((dir / "gaussian.cfg").string())};
  for (auto& cfg : configs) {
    cfg.T = 2.0;
    cfg.tau = 1e-3;
    cfg.n_cells = 0;
    cfg.h = 0.5;
    cfg.snapshot_times = {0.0, 1.0, 2.0};
    cfg.output_dir = (out / experiment_name(cfg.experiment)).string();
    validate(cfg);
  }
  return configs;
}

}  // namespace

int main() {
  criterion([] { return charge_conservation_check(5.0); });
  criterion([] { return theta_sweep_check(1.0); });
  criterion([] { return entropy_balance_check(50); });
  criterion([] {
    return convergence_check({{2, 1.0, {60, 120, 240}, 2.7}, {2, 0.4, {60, 120, 240}, 2.7},
                              {3, 0.5, {40, 80, 160}, 3.5}},
                             0.5, 1e-4, {0, 1});
  });
  criterion([] { return projection_slope_check({16, 32, 64}); });
  criterion([] { return circulant_oracle_check(); });
  criterion([] { return galerkin_orthogonality_check(20); });
  criterion([] { return midpoint_invariants_check(); });
  criterion([] { return fixture_runs_check(desk_fixtures()); });
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
