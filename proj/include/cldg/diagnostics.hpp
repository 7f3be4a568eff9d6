#pragma once

#include "cldg/analytic.hpp"
#include "cldg/cldg_operator.hpp"
#include "cldg/dg_field.hpp"
#include "cldg/legendre.hpp"
#include "cldg/time_integration.hpp"
#include "cldg/types.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cldg {

/// Discrete charge ||u_h||^2.
template <typename Scalar>
Scalar charge(const DGField<Scalar>& field) {
  return field.l2_norm_squared();
}

/// One-sided values of (r, s, p, q) at a single interface.
template <typename Scalar>
struct InterfaceTraces {
  Scalar r_minus, r_plus;
  Scalar s_minus, s_plus;
  Scalar p_minus, p_plus;  // p = s_x
  Scalar q_minus, q_plus;  // q = r_x
};

/// Numerical entropy flux 2 Im(theta v^+ conj(u^-) + (1 - theta) v^- conj(u^+))
/// with u = r + i s and v = u_x = q + i p.
template <typename Scalar>
Scalar entropy_flux(const InterfaceTraces<Scalar>& t, Scalar theta) {
  return Scalar(2) * (theta * (t.p_plus * t.r_minus - t.q_plus * t.s_minus) +
                      (Scalar(1) - theta) * (t.p_minus * t.r_plus - t.q_minus * t.s_plus));
}

/// Entropy flux at every interface, with p and q recovered from the field.
template <typename Scalar>
Vector<Scalar> entropy_fluxes(const SpatialOperator<Scalar>& op, const DGField<Scalar>& field) {
  const auto aux = op.recover_auxiliary(field);
  const Traces<Scalar> r = field.r().traces(), s = field.s().traces();
  const Traces<Scalar> p = aux.p.traces(), q = aux.q.traces();
  Vector<Scalar> phi(field.n_cells());
  for (Index i = 0; i < phi.size(); ++i)
    phi[i] = entropy_flux<Scalar>({r.minus[i], r.plus[i], s.minus[i], s.plus[i], p.minus[i], p.plus[i],
                                   q.minus[i], q.plus[i]},
                                  op.theta());
  return phi;
}

/// d/dt int_{O_j} |u_h|^2 = 2 sum_l h_j / (2l + 1) (c^r c^r_t + c^s c^s_t), computed
/// from a time derivative rather than by differencing in time.
template <typename Scalar>
Vector<Scalar> cell_charge_rates(const DGField<Scalar>& field, const DGField<Scalar>& derivative) {
  const Index n = field.n_cells();
  const int k1 = field.degree() + 1;
  Vector<Scalar> rate(n);
  for (Index j = 0; j < n; ++j) {
    Scalar sum = 0;
    for (int l = 0; l < k1; ++l)
      sum += (field.r().coeffs()(j, l) * derivative.r().coeffs()(j, l) +
              field.s().coeffs()(j, l) * derivative.s().coeffs()(j, l)) /
             Scalar(2 * l + 1);
    rate[j] = Scalar(2) * field.mesh().width(j) * sum;
  }
  return rate;
}

template <typename Scalar>
struct EntropyBalance {
  Vector<Scalar> residual;  // rate_j + phi_{j+1/2} - phi_{j-1/2}, per cell
  Scalar scale;             // largest |rate_j| or |phi_i|; the natural size of the terms

  Scalar max_abs_residual() const { return residual.cwiseAbs().maxCoeff(); }
};

/// Cell-wise balance d/dt int_{O_j} |u_h|^2 + phi_{j+1/2} - phi_{j-1/2}.
template <typename Scalar>
EntropyBalance<Scalar> entropy_balance(const SpatialOperator<Scalar>& op, const DGField<Scalar>& field) {
  const Vector<Scalar> rate = cell_charge_rates(field, op.rhs(field));
  const Vector<Scalar> phi = entropy_fluxes(op, field);
  const auto& mesh = field.mesh();
  EntropyBalance<Scalar> out{Vector<Scalar>(rate.size()), Scalar(0)};
  for (Index j = 0; j < rate.size(); ++j)
    out.residual[j] = rate[j] + phi[j] - phi[mesh.left_neighbor(j)];
  out.scale = std::max(rate.cwiseAbs().maxCoeff(), phi.cwiseAbs().maxCoeff());
  return out;
}

/// ||u - u_h|| against an exact solution x -> (r, s) at the field's time.
/// points = 0 selects the error rule 2k + 6 (volume rule plus four).
template <typename Scalar, typename F>
Scalar l2_error(const DGField<Scalar>& field, F&& exact, int points = 0) {
  const int n_points = points > 0 ? points : 2 * field.degree() + 6;
  const Scalar er = l2_distance(field.r(), [&](Scalar x) { return exact(x).r; }, n_points);
  const Scalar es = l2_distance(field.s(), [&](Scalar x) { return exact(x).s; }, n_points);
  return std::sqrt(er * er + es * es);
}

/// log(e_prev / e) / log(N / N_prev).
template <typename Scalar>
Scalar observed_order(Scalar e_prev, Scalar e, Index n_prev, Index n) {
  return std::log(e_prev / e) / std::log(Scalar(n) / Scalar(n_prev));
}

/// Least-squares slope of -log e against log N.
template <typename Scalar>
Scalar fitted_order(const std::vector<Scalar>& errors, const std::vector<Index>& n_list) {
  if (errors.size() != n_list.size() || errors.size() < 2)
    throw std::invalid_argument("fitted_order: need matching lists of at least two entries");
  const std::size_t m = errors.size();
  Scalar mx = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += std::log(Scalar(n_list[i]));
    my += std::log(errors[i]);
  }
  mx /= Scalar(m);
  my /= Scalar(m);
  Scalar sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const Scalar dx = std::log(Scalar(n_list[i])) - mx;
    sxy += dx * (std::log(errors[i]) - my);
    sxx += dx * dx;
  }
  return -sxy / sxx;
}

template <typename Scalar = double>
struct ConvergenceRecord {
  Scalar theta;
  int degree;
  Index n_cells;
  Scalar h;
  Scalar l2_error;              // NaN for a failed row
  std::optional<Scalar> order;  // absent on the first row or next to a failed row
  std::string error;            // failure description, empty on success
  int max_iterations_used = 0;
};

template <typename Scalar = double>
struct ConvergenceStudyConfig {
  Scalar theta = 1;
  int degree = 2;
  std::vector<Index> n_list{60, 120, 240};
  Scalar T = Scalar(0.5);
  Scalar tau = Scalar(1e-4);
  Scalar a = -30, b = 30;
  Scalar x0 = 10;
  Scalar lambda = 2;
  Scalar fp_tolerance = Scalar(1e-13);
  int max_iterations = 100;
  InitialData initial_data = InitialData::l2_projection;
  int volume_points = 0;
  bool parallel = true;
};

/// Single-soliton run per N, L2 error at T against the exact soliton, orders
/// between consecutive rows. A failing row is marked, not fatal.
template <typename Scalar>
std::vector<ConvergenceRecord<Scalar>> convergence_study(const ConvergenceStudyConfig<Scalar>& cfg) {
  if (cfg.n_list.empty()) throw std::invalid_argument("convergence_study: empty N list");
  for (std::size_t i = 1; i < cfg.n_list.size(); ++i)
    if (cfg.n_list[i] <= cfg.n_list[i - 1])
      throw std::invalid_argument("convergence_study: N list must be strictly increasing");

  auto run_row = [cfg](Index n) {
    auto mesh = make_uniform_mesh<Scalar>(cfg.a, cfg.b, n);
    ConvergenceRecord<Scalar> rec{cfg.theta, cfg.degree, n, mesh->h(),
                                  std::numeric_limits<Scalar>::quiet_NaN(), std::nullopt, {}, 0};
    try {
      const SpatialOperator<Scalar> op(mesh, cfg.degree, FluxParam<Scalar>(cfg.theta),
                                       Nonlinearity<Scalar>::cubic(cfg.lambda), cfg.volume_points);
      StepperConfig<Scalar> sc{cfg.tau, cfg.fp_tolerance, cfg.max_iterations, cfg.initial_data};
      const Scalar x0 = cfg.x0;
      const auto traj = evolve<Scalar>(op, [x0](Scalar x) { return soliton_exact(Scalar(0), x, x0); },
                                       cfg.T, sc);
      const Scalar T = traj.final_field.time();
      rec.l2_error = l2_error(traj.final_field, [&](Scalar x) { return soliton_exact(T, x, x0); });
      rec.max_iterations_used = traj.max_iterations_used;
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    return rec;
  };

  std::vector<ConvergenceRecord<Scalar>> rows;
  if (cfg.parallel) {
    std::vector<std::future<ConvergenceRecord<Scalar>>> jobs;
    for (Index n : cfg.n_list) jobs.push_back(std::async(std::launch::async, run_row, n));
    for (auto& j : jobs) rows.push_back(j.get());
  } else {
    for (Index n : cfg.n_list) rows.push_back(run_row(n));
  }
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].error.empty() && rows[i - 1].error.empty())
      rows[i].order = observed_order(rows[i - 1].l2_error, rows[i].l2_error, rows[i - 1].n_cells, rows[i].n_cells);
  return rows;
}

}  // namespace cldg
