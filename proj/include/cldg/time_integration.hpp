#pragma once

#include "cldg/cldg_operator.hpp"
#include "cldg/dg_field.hpp"
#include "cldg/projections.hpp"
#include "cldg/types.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cldg {

enum class InitialData { l2_projection, generalized_P };

template <typename Scalar = double>
struct StepperConfig {
  Scalar tau = Scalar(1e-3);
  Scalar fp_tolerance = Scalar(1e-13);  // max-norm of the coefficient increment
  int max_iterations = 100;
  InitialData initial_data = InitialData::l2_projection;

  void validate() const {
    if (!(tau > 0)) throw std::invalid_argument("StepperConfig: tau must be positive");
    if (!(fp_tolerance > 0)) throw std::invalid_argument("StepperConfig: fp_tolerance must be positive");
    if (max_iterations < 1) throw std::invalid_argument("StepperConfig: max_iterations must be >= 1");
  }
};

/// Statistics of the last fixed-point solve.
struct StepReport {
  int iterations = 0;
  double last_increment = 0;
};

/// One implicit midpoint step of signed length tau:
///   (u1 - u0) / tau = F((u0 + u1) / 2),
/// solved by u1 <- u0 + tau F((u0 + u1) / 2) starting from u1 = u0.
/// Negative tau integrates backwards, which the reversibility checks rely on.
template <typename Scalar>
DGField<Scalar> step_by(const SpatialOperator<Scalar>& op, const DGField<Scalar>& field, Scalar tau,
                        const StepperConfig<Scalar>& cfg, StepReport* report = nullptr) {
  require_finite(field.r().coeffs(), "r");
  require_finite(field.s().coeffs(), "s");
  const Coefficients<Scalar>& r0 = field.r().coeffs();
  const Coefficients<Scalar>& s0 = field.s().coeffs();
  Coefficients<Scalar> r1 = r0, s1 = s0;
  Coefficients<Scalar> rm, sm, dr, ds;

  Scalar increment = std::numeric_limits<Scalar>::infinity();
  int it = 0;
  while (it < cfg.max_iterations) {
    ++it;
    rm = Scalar(0.5) * (r0 + r1);
    sm = Scalar(0.5) * (s0 + s1);
    op.rhs(rm, sm, dr, ds);
    dr = r0 + tau * dr;
    ds = s0 + tau * ds;
    require_finite(dr, "r");
    require_finite(ds, "s");
    increment = std::max((dr - r1).cwiseAbs().maxCoeff(), (ds - s1).cwiseAbs().maxCoeff());
    r1.swap(dr);
    s1.swap(ds);
    if (increment <= cfg.fp_tolerance) break;
  }
  if (report) *report = {it, static_cast<double>(increment)};
  if (!(increment <= cfg.fp_tolerance)) throw NonConvergenceError(it, static_cast<double>(increment));
  return DGField<Scalar>(field.mesh_ptr(), field.degree(), std::move(r1), std::move(s1), field.time() + tau);
}

template <typename Scalar>
DGField<Scalar> step(const SpatialOperator<Scalar>& op, const DGField<Scalar>& field,
                     const StepperConfig<Scalar>& cfg, StepReport* report = nullptr) {
  cfg.validate();
  return step_by(op, field, cfg.tau, cfg, report);
}

/// Initial condition as a callable x -> (r0(x), s0(x)).
template <typename Scalar>
using InitialFunction = std::function<ComponentPair<Scalar>(Scalar)>;

/// Discretizes (r0, s0) per the configured initial-data choice.
template <typename Scalar>
DGField<Scalar> discretize_initial(const SpatialOperator<Scalar>& op, const InitialFunction<Scalar>& u0,
                                   InitialData how) {
  auto r0 = [&](Scalar x) { return u0(x).r; };
  auto s0 = [&](Scalar x) { return u0(x).s; };
  const auto& mesh = op.mesh_ptr();
  const int k = op.degree();
  if (how == InitialData::l2_projection)
    return DGField<Scalar>(l2_project(mesh, k, r0), l2_project(mesh, k, s0), Scalar(0));
  const ProjectionSpec<Scalar> spec{ProjectionKind::P, op.theta(), k, mesh, 0};
  return DGField<Scalar>(generalized_project(r0, spec), generalized_project(s0, spec), Scalar(0));
}

template <typename Scalar = double>
struct ChargeSample {
  Scalar t;
  Scalar charge;
};

template <typename Scalar = double>
struct Trajectory {
  DGField<Scalar> final_field;
  std::vector<ChargeSample<Scalar>> charge_series;  // one entry per step, plus t = 0
  std::vector<DGField<Scalar>> snapshots;           // in the order of the requested times
  long long steps = 0;
  int max_iterations_used = 0;

  Scalar max_relative_drift() const {
    const Scalar c0 = charge_series.front().charge;
    Scalar worst = 0;
    for (const auto& c : charge_series) worst = std::max(worst, std::abs(c.charge - c0) / std::abs(c0));
    return worst;
  }
};

/// A step failure annotated with where in the run it happened.
class EvolveError : public std::runtime_error {
 public:
  EvolveError(long long step_index, double time, const std::string& cause)
      : std::runtime_error("step " + std::to_string(step_index) + " (t = " + std::to_string(time) +
                           ") failed: " + cause),
        step_index_(step_index),
        time_(time) {}
  long long step_index() const noexcept { return step_index_; }
  double time() const noexcept { return time_; }

 private:
  long long step_index_;
  double time_;
};

/// Number of steps of size tau needed to reach T; the last one may be shorter.
template <typename Scalar>
long long step_count(Scalar T, Scalar tau) {
  const Scalar ratio = T / tau;
  const long long n = static_cast<long long>(std::ceil(ratio - Scalar(1e-9) * ratio));
  return std::max<long long>(n, 1);
}

/// Steps an already discretized field to time T, recording the charge after
/// every step and a snapshot at the step nearest each requested time.
template <typename Scalar>
Trajectory<Scalar> evolve_field(const SpatialOperator<Scalar>& op, DGField<Scalar> field, Scalar T,
                                const StepperConfig<Scalar>& cfg, const std::vector<Scalar>& snapshot_times = {}) {
  cfg.validate();
  if (!(T > 0)) throw std::invalid_argument("evolve: T must be positive");
  for (Scalar ts : snapshot_times)
    if (ts < 0 || ts > T * (1 + Scalar(1e-12)))
      throw std::invalid_argument("evolve: snapshot time outside [0, T]");

  const long long n_steps = step_count(T, cfg.tau);
  std::vector<long long> snapshot_steps;
  for (Scalar ts : snapshot_times)
    snapshot_steps.push_back(std::min<long long>(n_steps, std::llround(ts / cfg.tau)));

  Trajectory<Scalar> traj{field, {}, {}, 0, 0};
  traj.charge_series.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.snapshots.assign(snapshot_times.size(), field);
  traj.charge_series.push_back({field.time(), field.l2_norm_squared()});

  for (long long n = 1; n <= n_steps; ++n) {
    const Scalar tau = (n == n_steps) ? T - field.time() : cfg.tau;
    try {
      StepReport report;
      field = step_by(op, field, tau, cfg, &report);
      traj.max_iterations_used = std::max(traj.max_iterations_used, report.iterations);
    } catch (const std::exception& e) {
      throw EvolveError(n, static_cast<double>(field.time() + tau), e.what());
    }
    if (n == n_steps) field.set_time(T);
    else field.set_time(static_cast<Scalar>(n) * cfg.tau);
    traj.charge_series.push_back({field.time(), field.l2_norm_squared()});
    for (std::size_t i = 0; i < snapshot_steps.size(); ++i)
      if (snapshot_steps[i] == n) traj.snapshots[i] = field;
  }
  traj.steps = n_steps;
  traj.final_field = std::move(field);
  return traj;
}

/// Discretizes u0 and evolves it to time T.
template <typename Scalar>
Trajectory<Scalar> evolve(const SpatialOperator<Scalar>& op, const InitialFunction<Scalar>& u0, Scalar T,
                          const StepperConfig<Scalar>& cfg, const std::vector<Scalar>& snapshot_times = {}) {
  return evolve_field(op, discretize_initial(op, u0, cfg.initial_data), T, cfg, snapshot_times);
}

}  // namespace cldg
