#include "cldg/app/checks.hpp"

namespace cldg::app {

std::vector<CriterionResult> selftest() {
  std::vector<CriterionResult> out;
  out.push_back(entropy_balance_check());
  out.push_back(circulant_oracle_check());
  out.push_back(galerkin_orthogonality_check());
  out.push_back(midpoint_invariants_check());
  out.push_back(projection_slope_check());
  out.push_back(charge_conservation_check(0.5));
  out.push_back(theta_sweep_check(0.1));
  return out;
}

}  // namespace cldg::app
