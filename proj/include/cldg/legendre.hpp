#pragma once

#include "cldg/types.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cldg {

template <typename Scalar>
struct LegendreValue {
  Scalar value;
  Scalar derivative;
};

/// Unnormalized Legendre polynomial P_l and its derivative at xi, P_l(1) = 1.
template <typename Scalar>
LegendreValue<Scalar> legendre_eval(int l, Scalar xi) {
  if (l < 0) throw std::invalid_argument("legendre_eval: negative mode index");
  if (std::abs(xi) > Scalar(1) + 4 * std::numeric_limits<Scalar>::epsilon())
    throw std::domain_error("legendre_eval: xi outside [-1, 1]");
  if (l == 0) return {Scalar(1), Scalar(0)};

  Scalar p_prev = 1, p = xi;
  Scalar d_prev = 0, d = 1;
  for (int n = 1; n < l; ++n) {
    const Scalar p_next = (Scalar(2 * n + 1) * xi * p - Scalar(n) * p_prev) / Scalar(n + 1);
    // P'_{n+1} = P'_{n-1} + (2n + 1) P_n
    const Scalar d_next = d_prev + Scalar(2 * n + 1) * p;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
  }
  return {p, d};
}

template <typename Scalar>
struct QuadratureRule {
  Vector<Scalar> nodes;
  Vector<Scalar> weights;

  int n_points() const noexcept { return static_cast<int>(nodes.size()); }

  /// Integral over [-1, 1] of a callable.
  template <typename F>
  Scalar integrate(F&& f) const {
    Scalar sum = 0;
    for (Index q = 0; q < nodes.size(); ++q) sum += weights[q] * f(nodes[q]);
    return sum;
  }
};

/// Gauss-Legendre rule on [-1, 1] with nodes in ascending order.
///
/// Roots of P_n are found by Newton iteration from the Chebyshev-like guess
/// cos(pi (i + 3/4) / (n + 1/2)); the rule is symmetrized explicitly.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_rule(int n_points) {
  if (n_points < 1 || n_points > 64)
    throw std::invalid_argument("gauss_rule: n_points must be in [1, 64], got " +
                                std::to_string(n_points));
  QuadratureRule<Scalar> rule;
  rule.nodes.resize(n_points);
  rule.weights.resize(n_points);

  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar tol = 4 * std::numeric_limits<Scalar>::epsilon();
  const int half = (n_points + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Scalar x = std::cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(n_points) + Scalar(0.5)));
    Scalar dp = 1;
    for (int it = 0; it < 100; ++it) {
      const auto [p, d] = legendre_eval(n_points, std::clamp(x, Scalar(-1), Scalar(1)));
      const Scalar dx = p / d;
      x -= dx;
      dp = d;
      if (std::abs(dx) <= tol) break;
    }
    dp = legendre_eval(n_points, x).derivative;
    const Scalar w = Scalar(2) / ((Scalar(1) - x * x) * dp * dp);
    // x is the i-th largest root
    rule.nodes[n_points - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[n_points - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (n_points % 2 == 1) rule.nodes[n_points / 2] = 0;
  return rule;
}

/// Legendre modes P_0..P_k on the reference cell [-1, 1].
template <typename Scalar = double>
class LegendreBasis {
 public:
  explicit LegendreBasis(int degree) : degree_(degree) {
    if (degree < 0) throw std::invalid_argument("LegendreBasis: negative degree");
  }

  int degree() const noexcept { return degree_; }
  int n_modes() const noexcept { return degree_ + 1; }

  Vector<Scalar> values(Scalar xi) const {
    Vector<Scalar> v(n_modes());
    for (int l = 0; l < n_modes(); ++l) v[l] = legendre_eval(l, xi).value;
    return v;
  }

  Vector<Scalar> derivatives(Scalar xi) const {
    Vector<Scalar> v(n_modes());
    for (int l = 0; l < n_modes(); ++l) v[l] = legendre_eval(l, xi).derivative;
    return v;
  }

  /// Row q holds P_0..P_k at node q.
  Matrix<Scalar> tabulate_values(const QuadratureRule<Scalar>& rule) const {
    Matrix<Scalar> t(rule.n_points(), n_modes());
    for (int q = 0; q < rule.n_points(); ++q) t.row(q) = values(rule.nodes[q]).transpose();
    return t;
  }

  Matrix<Scalar> tabulate_derivatives(const QuadratureRule<Scalar>& rule) const {
    Matrix<Scalar> t(rule.n_points(), n_modes());
    for (int q = 0; q < rule.n_points(); ++q) t.row(q) = derivatives(rule.nodes[q]).transpose();
    return t;
  }

  /// Face values P_l(+1) = 1.
  Vector<Scalar> right_values() const { return Vector<Scalar>::Ones(n_modes()); }

  /// Face values P_l(-1) = (-1)^l.
  Vector<Scalar> left_values() const {
    Vector<Scalar> v(n_modes());
    for (int l = 0; l < n_modes(); ++l) v[l] = (l % 2 == 0) ? Scalar(1) : Scalar(-1);
    return v;
  }

  /// Reference stiffness S(l, m) = int_{-1}^{1} P_l P_m' dxi, which is 2 when
  /// m > l and l + m is odd and 0 otherwise.
  Matrix<Scalar> stiffness() const {
    Matrix<Scalar> s = Matrix<Scalar>::Zero(n_modes(), n_modes());
    for (int l = 0; l < n_modes(); ++l)
      for (int m = l + 1; m < n_modes(); m += 2) s(l, m) = 2;
    return s;
  }

  /// int_{-1}^{1} P_l^2 dxi = 2 / (2l + 1).
  Vector<Scalar> reference_mass() const {
    Vector<Scalar> v(n_modes());
    for (int l = 0; l < n_modes(); ++l) v[l] = Scalar(2) / Scalar(2 * l + 1);
    return v;
  }

 private:
  int degree_;
};

/// Inverse of the cell mass matrix, diag((2l + 1) / h_j).
template <typename Scalar>
Eigen::DiagonalMatrix<Scalar, Eigen::Dynamic> cell_mass_inverse(const LegendreBasis<Scalar>& basis,
                                                                 Scalar cell_width) {
  if (!(cell_width > 0)) throw std::invalid_argument("cell_mass_inverse: width must be positive");
  Vector<Scalar> d(basis.n_modes());
  for (int l = 0; l < basis.n_modes(); ++l) d[l] = Scalar(2 * l + 1) / cell_width;
  return Eigen::DiagonalMatrix<Scalar, Eigen::Dynamic>(d);
}

}  // namespace cldg
