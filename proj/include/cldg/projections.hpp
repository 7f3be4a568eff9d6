#pragma once

#include "cldg/dg_field.hpp"
#include "cldg/legendre.hpp"
#include "cldg/mesh.hpp"
#include "cldg/types.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cldg {

/// Which one-sided endpoint value a Gauss-Radau projection interpolates.
enum class RadauSide {
  minus_type,  // right face value u(x_{j+1/2}), taken as the minus trace
  plus_type,   // left face value u(x_{j-1/2}), taken as the plus trace
};

/// P matches the theta-weighted face average (theta, 1 - theta), Q the mirrored
/// (1 - theta, theta). Q_printed keeps the unmirrored weight of P for Q, which
/// is the other reading of the printed definition; it coincides with P.
enum class ProjectionKind { P, Q, Q_printed };

inline std::string projection_kind_name(ProjectionKind k) {
  switch (k) {
    case ProjectionKind::P: return "P";
    case ProjectionKind::Q: return "Q";
    case ProjectionKind::Q_printed: return "Q_printed";
  }
  return "?";
}

namespace detail {

/// Moments (2l + 1)/2 int u P_l dxi for l = 0..n_moments-1 on every cell.
template <typename Scalar, typename F>
Coefficients<Scalar> cell_moments(const Mesh1D<Scalar>& mesh, int degree, int n_moments, F&& u,
                                  int points) {
  const QuadratureRule<Scalar> rule = gauss_rule<Scalar>(points > 0 ? points : degree + 6);
  const Matrix<Scalar> table = LegendreBasis<Scalar>(degree).tabulate_values(rule);
  Coefficients<Scalar> c = Coefficients<Scalar>::Zero(mesh.n_cells(), degree + 1);
  Vector<Scalar> samples(rule.n_points());
  for (Index j = 0; j < mesh.n_cells(); ++j) {
    for (int q = 0; q < rule.n_points(); ++q)
      samples[q] = rule.weights[q] * u(map_from_reference(mesh, j, rule.nodes[q]));
    for (int l = 0; l < n_moments; ++l)
      c(j, l) = Scalar(2 * l + 1) / Scalar(2) * samples.dot(table.col(l));
  }
  return c;
}

}  // namespace detail

/// Cell-wise L2 projection onto P^k. `points` = 0 uses k + 6 Gauss points.
template <typename Scalar, typename F>
PiecewisePolynomial<Scalar> l2_project(const MeshPtr<Scalar>& mesh, int degree, F&& u, int points = 0) {
  return PiecewisePolynomial<Scalar>(mesh, degree,
                                     detail::cell_moments(*mesh, degree, degree + 1, u, points));
}

/// Gauss-Radau projection: moments against P^{k-1} plus one endpoint value.
template <typename Scalar, typename F>
PiecewisePolynomial<Scalar> gauss_radau_project(const MeshPtr<Scalar>& mesh, int degree, F&& u,
                                                RadauSide side, int points = 0) {
  Coefficients<Scalar> c = detail::cell_moments(*mesh, degree, degree, u, points);
  for (Index j = 0; j < mesh->n_cells(); ++j) {
    if (side == RadauSide::minus_type) {
      Scalar partial = 0;
      for (int l = 0; l < degree; ++l) partial += c(j, l);
      c(j, degree) = u(mesh->right_face(j)) - partial;
    } else {
      Scalar partial = 0;
      for (int l = 0; l < degree; ++l) partial += (l % 2 == 0) ? c(j, l) : -c(j, l);
      const Scalar residual = u(mesh->left_face(j)) - partial;
      c(j, degree) = (degree % 2 == 0) ? residual : -residual;
    }
  }
  return PiecewisePolynomial<Scalar>(mesh, degree, std::move(c));
}

template <typename Scalar>
struct CirculantSolution {
  Vector<Scalar> x;
  /// Product of the recurrence pivots (with the sign of the cyclic shift when
  /// the recurrence runs forward); equals det(diag I + super S).
  Scalar determinant;
};

/// Solves diag * x_j + super * x_{j+1 mod N} = f_j in O(N).
///
/// The recurrence always runs in the direction whose ratio has modulus <= 1;
/// periodicity is closed by a rank-one step on x_0. Throws SingularSystemError
/// when |1 - q^N| < singular_tol with q = -super / diag.
template <typename Scalar>
CirculantSolution<Scalar> solve_two_term_circulant(Scalar diag, Scalar super, const Vector<Scalar>& f,
                                                   Scalar singular_tol = Scalar(1e-12)) {
  const Index n = f.size();
  if (n < 1) throw std::invalid_argument("solve_two_term_circulant: empty system");
  if (diag == Scalar(0) && super == Scalar(0))
    throw SingularSystemError("two-term circulant system with zero matrix");

  if (diag != Scalar(0)) {
    const Scalar q = -super / diag;
    const Scalar gap = Scalar(1) - std::pow(q, Scalar(n));
    if (std::abs(gap) < singular_tol)
      throw SingularSystemError("two-term circulant system is singular: |1 - q^N| = " +
                                std::to_string(static_cast<double>(std::abs(gap))) + " with q = " +
                                std::to_string(static_cast<double>(q)) + ", N = " + std::to_string(n));
  }

  CirculantSolution<Scalar> out{Vector<Scalar>(n), Scalar(0)};
  Vector<Scalar>& x = out.x;
  if (std::abs(super) <= std::abs(diag)) {
    // x_j = f_j / diag + rho x_{j+1}
    const Scalar rho = -super / diag;
    const Scalar closure = Scalar(1) - std::pow(rho, Scalar(n));
    Scalar acc = 0;
    for (Index m = n - 1; m >= 0; --m) acc = f[m] / diag + rho * acc;
    x[0] = acc / closure;
    for (Index j = n - 1; j >= 1; --j) x[j] = f[j] / diag + rho * x[(j + 1) % n];
    out.determinant = std::pow(diag, Scalar(n - 1)) * (diag * closure);
  } else {
    // x_{j+1} = f_j / super + sigma x_j
    const Scalar sigma = -diag / super;
    const Scalar closure = Scalar(1) - std::pow(sigma, Scalar(n));
    Scalar acc = 0;
    for (Index m = 0; m < n; ++m) acc = f[m] / super + sigma * acc;
    x[0] = acc / closure;
    for (Index j = 0; j + 1 < n; ++j) x[j + 1] = f[j] / super + sigma * x[j];
    const Scalar shift_sign = (n % 2 == 1) ? Scalar(1) : Scalar(-1);
    out.determinant = shift_sign * std::pow(super, Scalar(n - 1)) * (super * closure);
  }
  return out;
}

/// Top-mode correction alpha_k of the generalized projection P:
/// A alpha_k = (1 - theta) eta with A = circ(theta, (1 - theta)(-1)^k, 0, ..., 0).
/// eta[i] is (u - P^- u)^+ at interface i.
template <typename Scalar>
Vector<Scalar> circulant_correction(const Vector<Scalar>& eta, Scalar theta, int degree) {
  if (!(theta >= 0 && theta <= 1)) throw std::invalid_argument("circulant_correction: theta outside [0, 1]");
  const Scalar sign = (degree % 2 == 0) ? Scalar(1) : Scalar(-1);
  return solve_two_term_circulant<Scalar>(theta, (Scalar(1) - theta) * sign, (Scalar(1) - theta) * eta).x;
}

template <typename Scalar = double>
struct ProjectionSpec {
  ProjectionKind kind = ProjectionKind::P;
  Scalar theta = 1;
  int degree = 1;
  MeshPtr<Scalar> mesh;
  int moment_points = 0;  // 0 selects k + 6
};

/// Generalized Gauss-Radau projection: base Radau projection plus alpha_{j,k} P_{j,k}.
///
/// P starts from the minus-type projection and matches theta v^- + (1 - theta) v^+
/// at every interface; Q starts from the plus-type projection and matches the
/// mirrored average, so both reduce to their base projection at theta = 1.
template <typename Scalar, typename F>
PiecewisePolynomial<Scalar> generalized_project(F&& u, const ProjectionSpec<Scalar>& spec) {
  if (!spec.mesh) throw std::invalid_argument("generalized_project: null mesh");
  const auto& mesh = *spec.mesh;
  const Index n = mesh.n_cells();
  const int k = spec.degree;
  const Scalar theta = spec.theta;
  if (!(theta >= 0 && theta <= 1)) throw std::invalid_argument("generalized_project: theta outside [0, 1]");
  const Scalar sign_k = (k % 2 == 0) ? Scalar(1) : Scalar(-1);

  const bool mirrored = spec.kind == ProjectionKind::Q;
  PiecewisePolynomial<Scalar> base = gauss_radau_project(
      spec.mesh, k, u, mirrored ? RadauSide::plus_type : RadauSide::minus_type, spec.moment_points);
  const Traces<Scalar> t = base.traces();

  Vector<Scalar> alpha;
  if (!mirrored) {
    Vector<Scalar> eta(n);
    for (Index i = 0; i < n; ++i) eta[i] = u(mesh.left_face(mesh.plus_cell(i))) - t.plus[i];
    alpha = circulant_correction(eta, theta, k);
  } else {
    // (1 - theta) beta_i + theta (-1)^k beta_{i+1} = (1 - theta) (u - P^+ u)^-_i
    Vector<Scalar> rhs(n);
    for (Index i = 0; i < n; ++i) rhs[i] = (Scalar(1) - theta) * (u(mesh.right_face(i)) - t.minus[i]);
    alpha = solve_two_term_circulant<Scalar>(Scalar(1) - theta, theta * sign_k, rhs).x;
  }
  base.coeffs().col(k) += alpha;
  return base;
}

/// L2 distance between a piecewise polynomial and a function, by Gauss quadrature.
template <typename Scalar, typename F>
Scalar l2_distance(const PiecewisePolynomial<Scalar>& v, F&& u, int points) {
  const QuadratureRule<Scalar> rule = gauss_rule<Scalar>(points);
  const Matrix<Scalar> table = LegendreBasis<Scalar>(v.degree()).tabulate_values(rule);
  const auto& mesh = v.mesh();
  Scalar total = 0;
  for (Index j = 0; j < mesh.n_cells(); ++j) {
    const Vector<Scalar> vals = table * v.coeffs().row(j).transpose();
    Scalar cell = 0;
    for (int q = 0; q < rule.n_points(); ++q) {
      const Scalar d = u(map_from_reference(mesh, j, rule.nodes[q])) - vals[q];
      cell += rule.weights[q] * d * d;
    }
    total += cell * mesh.width(j) / Scalar(2);
  }
  return std::sqrt(total);
}

template <typename Scalar = double>
struct ProjectionStudyRow {
  Scalar theta;
  int degree;
  Index n_cells;
  Scalar h;
  Scalar l2_error;              // NaN when the row failed
  std::optional<Scalar> slope;  // absent for the first row or after a failed row
  std::string error;            // non-empty when the projection could not be built
};

/// ||u - Pu|| (or Q) for each N on [a, b], with slopes between consecutive rows.
template <typename Scalar, typename F>
std::vector<ProjectionStudyRow<Scalar>> projection_order_study(F&& u, ProjectionKind kind, Scalar theta,
                                                               int degree, const std::vector<Index>& n_list,
                                                               Scalar a, Scalar b) {
  std::vector<ProjectionStudyRow<Scalar>> rows;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (i > 0 && n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("projection_order_study: N list must be strictly increasing");
    auto mesh = make_uniform_mesh<Scalar>(a, b, n_list[i]);
    ProjectionStudyRow<Scalar> row{theta, degree, n_list[i], mesh->h(),
                                   std::numeric_limits<Scalar>::quiet_NaN(), std::nullopt, {}};
    try {
      const auto proj = generalized_project(u, ProjectionSpec<Scalar>{kind, theta, degree, mesh, 0});
      row.l2_error = l2_distance(proj, u, 2 * degree + 6);
      if (!rows.empty() && rows.back().error.empty())
        row.slope = std::log(rows.back().l2_error / row.l2_error) /
                    std::log(Scalar(row.n_cells) / Scalar(rows.back().n_cells));
    } catch (const SingularSystemError& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cldg
