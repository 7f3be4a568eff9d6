#pragma once

#include "cldg/app/config.hpp"

#include <string>
#include <vector>

namespace cldg::app {

struct CriterionResult {
  std::string name;
  bool pass;
  std::string detail;
};

/// Single soliton, x0 = 10, theta = 1, k = 2, h = 0.5 on [-25, 25], tau = 1e-3: relative drift <= 1e-10.
CriterionResult charge_conservation_check(double T = 5.0);

/// The same run for theta in {0, 0.25, 0.5, 0.75, 1}.
CriterionResult theta_sweep_check(double T = 1.0);

/// Cell-wise entropy identity on random fields, k in {1, 2, 3}, N = 16, theta in {0.3, 0.5, 1}.
CriterionResult entropy_balance_check(int fields = 50);

struct ConvergenceCase {
  int degree;
  double theta;
  std::vector<Index> n_list;
  double min_order;
};

/// Finest-pair order of each case on the soliton over [-30, 30], plus the tau-halving check on
/// the finest run of every case listed in `tau_halving`.
CriterionResult convergence_check(const std::vector<ConvergenceCase>& cases, double T, double tau,
                                  const std::vector<std::size_t>& tau_halving);

/// Fitted slope of ||u - Pu|| and ||u - Qu|| for sin 2 pi x on (0, 1) within 0.25 of k + 1;
/// theta = 1/2 with even k on odd N is reported only.
CriterionResult projection_slope_check(const std::vector<Index>& n_list = {16, 32, 64});

/// Generalized projections against a dense solve of their defining conditions, and singular
/// detection exactly when |1 - q^N| < 1e-12.
CriterionResult circulant_oracle_check();

/// |B(u - Pu, p - Qp, s - Ps, q - Qq; test tuple)| <= 1e-10 scale for random test tuples.
CriterionResult galerkin_orthogonality_check(int tuples = 20);

/// Reversibility to 100 fp_tolerance and second-order global phase error of a constant field.
CriterionResult midpoint_invariants_check();

/// Runs each config through the experiment runner; every charge check must pass.
CriterionResult fixture_runs_check(const std::vector<RunConfig>& configs);

/// Fast invariant suite behind `cldg selftest`.
std::vector<CriterionResult> selftest();

}  // namespace cldg::app
