#pragma once

#include "cldg/dg_field.hpp"
#include "cldg/legendre.hpp"
#include "cldg/mesh.hpp"
#include "cldg/types.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace cldg {

/// u-hat: theta u^- + (1 - theta) u^+. Used for r-hat and s-hat.
template <typename Scalar>
constexpr Scalar flux_u_hat(Scalar minus, Scalar plus, Scalar theta) {
  return theta * minus + (Scalar(1) - theta) * plus;
}

/// v-hat: (1 - theta) v^- + theta v^+. Used for p-hat and q-hat.
template <typename Scalar>
constexpr Scalar flux_v_hat(Scalar minus, Scalar plus, Scalar theta) {
  return (Scalar(1) - theta) * minus + theta * plus;
}

/// The single weight theta in [0, 1] driving both generalized alternating fluxes.
template <typename Scalar = double>
class FluxParam {
 public:
  explicit FluxParam(Scalar theta) : theta_(theta) {
    if (!(theta >= 0 && theta <= 1))
      throw std::invalid_argument("FluxParam: theta must lie in [0, 1], got " + std::to_string(theta));
  }
  Scalar theta() const noexcept { return theta_; }

 private:
  Scalar theta_;
};

/// f(rho) in  i u_t + u_xx + f(|u|^2) u = 0; the cubic case is f(rho) = lambda rho.
template <typename Scalar = double>
class Nonlinearity {
 public:
  using Function = std::function<Scalar(Scalar)>;

  static Nonlinearity cubic(Scalar lambda) { return Nonlinearity(lambda); }

  static Nonlinearity general(Function f, Function f_prime) {
    if (!f) throw std::invalid_argument("Nonlinearity::general: empty function");
    Nonlinearity n(Scalar(0));
    n.cubic_ = false;
    n.f_ = std::move(f);
    n.f_prime_ = std::move(f_prime);
    return n;
  }

  bool is_cubic() const noexcept { return cubic_; }
  /// Cubic coefficient; meaningless for a general nonlinearity.
  Scalar lambda() const noexcept { return lambda_; }
  bool vanishes() const noexcept { return cubic_ && lambda_ == Scalar(0); }

  Scalar operator()(Scalar rho) const { return cubic_ ? lambda_ * rho : f_(rho); }

  Scalar derivative(Scalar rho) const {
    if (cubic_) return lambda_;
    if (!f_prime_) throw std::logic_error("Nonlinearity: derivative not provided");
    return f_prime_(rho);
  }

  template <typename Derived>
  Matrix<Scalar> apply(const Eigen::MatrixBase<Derived>& rho) const {
    if (cubic_) return lambda_ * rho;
    return rho.unaryExpr([this](Scalar x) { return f_(x); });
  }

 private:
  explicit Nonlinearity(Scalar lambda) : lambda_(lambda) {}

  bool cubic_ = true;
  Scalar lambda_;
  Function f_;
  Function f_prime_;
};

/// Values of a (not necessarily polynomial) function at the quadrature nodes
/// of every cell, plus its one-sided traces at every interface.
template <typename Scalar>
struct SampledFunction {
  Coefficients<Scalar> values;  // N x n_points
  Traces<Scalar> traces;

  SampledFunction& operator-=(const SampledFunction& o) {
    values -= o.values;
    traces.minus -= o.traces.minus;
    traces.plus -= o.traces.plus;
    return *this;
  }
  friend SampledFunction operator-(SampledFunction a, const SampledFunction& b) { return a -= b; }
};

template <typename Scalar>
SampledFunction<Scalar> sample(const PiecewisePolynomial<Scalar>& v, const QuadratureRule<Scalar>& rule) {
  const LegendreBasis<Scalar> basis(v.degree());
  return {v.coeffs() * basis.tabulate_values(rule).transpose(), v.traces()};
}

/// Samples a smooth function; both traces at an interface are its face value.
template <typename Scalar, typename F>
SampledFunction<Scalar> sample(const Mesh1D<Scalar>& mesh, F&& f, const QuadratureRule<Scalar>& rule) {
  const Index n = mesh.n_cells();
  SampledFunction<Scalar> out{Coefficients<Scalar>(n, rule.n_points()),
                              {Vector<Scalar>(n), Vector<Scalar>(n)}};
  for (Index j = 0; j < n; ++j) {
    for (int q = 0; q < rule.n_points(); ++q)
      out.values(j, q) = f(map_from_reference(mesh, j, rule.nodes[q]));
    out.traces.minus[j] = f(mesh.right_face(j));
    out.traces.plus[j] = f(mesh.left_face(mesh.right_neighbor(j)));
  }
  return out;
}

/// Semidiscrete CLDG operator for the (r, p, s, q) system on a periodic mesh.
///
/// Auxiliaries p = s_x and q = r_x are eliminated eagerly: each evaluation
/// first recovers them from (r_h, s_h) with the theta-weighted hats, then
/// assembles (r_h)_t and (s_h)_t with the mirrored hats on p and q. All tables
/// are built once; evaluation never mutates the operator.
template <typename Scalar = double>
class SpatialOperator {
 public:
  struct Auxiliary {
    PiecewisePolynomial<Scalar> p;  // s_x
    PiecewisePolynomial<Scalar> q;  // r_x
  };

  /// volume_points = 0 selects 2k + 2 Gauss points.
  SpatialOperator(MeshPtr<Scalar> mesh, int degree, FluxParam<Scalar> flux,
                  Nonlinearity<Scalar> nonlinearity, int volume_points = 0)
      : mesh_(std::move(mesh)),
        basis_(degree),
        flux_(flux),
        nonlinearity_(std::move(nonlinearity)),
        rule_(gauss_rule<Scalar>(volume_points > 0 ? volume_points : 2 * degree + 2)) {
    if (!mesh_) throw std::invalid_argument("SpatialOperator: null mesh");
    if (degree < 0) throw std::invalid_argument("SpatialOperator: negative degree");
    const Index n = mesh_->n_cells();
    const int k1 = basis_.n_modes();
    stiffness_ = basis_.stiffness();
    values_t_ = basis_.tabulate_values(rule_).transpose();
    weighted_values_ = rule_.weights.asDiagonal() * basis_.tabulate_values(rule_);
    mass_inverse_.resize(n, k1);
    for (Index j = 0; j < n; ++j)
      for (int m = 0; m < k1; ++m) mass_inverse_(j, m) = Scalar(2 * m + 1) / mesh_->width(j);
    half_widths_ = mesh_->widths() / Scalar(2);
  }

  const Mesh1D<Scalar>& mesh() const noexcept { return *mesh_; }
  const MeshPtr<Scalar>& mesh_ptr() const noexcept { return mesh_; }
  int degree() const noexcept { return basis_.degree(); }
  const LegendreBasis<Scalar>& basis() const noexcept { return basis_; }
  const FluxParam<Scalar>& flux() const noexcept { return flux_; }
  Scalar theta() const noexcept { return flux_.theta(); }
  const Nonlinearity<Scalar>& nonlinearity() const noexcept { return nonlinearity_; }
  const QuadratureRule<Scalar>& volume_rule() const noexcept { return rule_; }

  /// Coefficients of w with  int w omega + int c omega_x - [c-hat omega] = 0  on every
  /// cell, i.e. the weak derivative of c using the u-hat (theta) flux.
  Coefficients<Scalar> weak_derivative(const Coefficients<Scalar>& c) const {
    Coefficients<Scalar> out = -(c * stiffness_);
    add_face_terms(c, theta(), Scalar(1) - theta(), Scalar(1), out);
    out.array() *= mass_inverse_.array();
    return out;
  }

  Auxiliary recover_auxiliary(const DGField<Scalar>& field) const {
    check_field(field);
    return {PiecewisePolynomial<Scalar>(mesh_, degree(), weak_derivative(field.s().coeffs())),
            PiecewisePolynomial<Scalar>(mesh_, degree(), weak_derivative(field.r().coeffs()))};
  }

  /// Raw evaluation on coefficient blocks: (dr, ds) = F(r, s). No validation.
  void rhs(const Coefficients<Scalar>& r, const Coefficients<Scalar>& s, Coefficients<Scalar>& dr,
           Coefficients<Scalar>& ds) const {
    const Coefficients<Scalar> p = weak_derivative(s);
    const Coefficients<Scalar> q = weak_derivative(r);
    const Scalar vm = Scalar(1) - theta();
    const Scalar vp = theta();

    dr.noalias() = p * stiffness_;
    add_face_terms(p, vm, vp, Scalar(-1), dr);
    ds.noalias() = -(q * stiffness_);
    add_face_terms(q, vm, vp, Scalar(1), ds);

    if (!nonlinearity_.vanishes()) {
      const Matrix<Scalar> r_at = r * values_t_;
      const Matrix<Scalar> s_at = s * values_t_;
      const Matrix<Scalar> f_rho = nonlinearity_.apply((r_at.array().square() + s_at.array().square()).matrix());
      Matrix<Scalar> moment_s = (f_rho.array() * s_at.array()).matrix() * weighted_values_;
      Matrix<Scalar> moment_r = (f_rho.array() * r_at.array()).matrix() * weighted_values_;
      moment_s.array().colwise() *= half_widths_.array();
      moment_r.array().colwise() *= half_widths_.array();
      dr -= moment_s;
      ds += moment_r;
    }
    dr.array() *= mass_inverse_.array();
    ds.array() *= mass_inverse_.array();
  }

  /// d/dt (r_h, s_h). Throws NonFiniteError naming the first bad cell of the input.
  DGField<Scalar> rhs(const DGField<Scalar>& field) const {
    check_field(field);
    require_finite(field.r().coeffs(), "r");
    require_finite(field.s().coeffs(), "s");
    Coefficients<Scalar> dr, ds;
    rhs(field.r().coeffs(), field.s().coeffs(), dr, ds);
    return DGField<Scalar>(mesh_, degree(), std::move(dr), std::move(ds), field.time());
  }

  /// Bilinear form B(r, p, s, q; gamma, omega, alpha, beta) with trial arguments
  /// sampled on `rule` (they may be smooth functions or differences with them).
  Scalar apply_B(const QuadratureRule<Scalar>& rule, const SampledFunction<Scalar>& r,
                 const SampledFunction<Scalar>& p, const SampledFunction<Scalar>& s,
                 const SampledFunction<Scalar>& q, const PiecewisePolynomial<Scalar>& gamma,
                 const PiecewisePolynomial<Scalar>& omega, const PiecewisePolynomial<Scalar>& alpha,
                 const PiecewisePolynomial<Scalar>& beta) const {
    for (const auto* t : {&gamma, &omega, &alpha, &beta}) check_poly(*t);
    for (const auto* a : {&r, &p, &s, &q})
      if (a->values.rows() != mesh_->n_cells() || a->values.cols() != rule.n_points())
        throw MeshMismatchError("apply_B: sampled argument does not match mesh/rule");

    const Matrix<Scalar> d_t = basis_.tabulate_derivatives(rule).transpose();
    auto volume = [&](const SampledFunction<Scalar>& a, const PiecewisePolynomial<Scalar>& t) {
      const Matrix<Scalar> dt = t.coeffs() * d_t;  // d/dxi of the test function at nodes
      return ((a.values.array() * dt.array()).matrix() * rule.weights).sum();
    };
    auto jumps = [](const PiecewisePolynomial<Scalar>& t) {
      const Traces<Scalar> tr = t.traces();
      return Vector<Scalar>(tr.minus - tr.plus);
    };
    auto u_hat = [&](const SampledFunction<Scalar>& a) {
      return Vector<Scalar>(theta() * a.traces.minus + (Scalar(1) - theta()) * a.traces.plus);
    };
    auto v_hat = [&](const SampledFunction<Scalar>& a) {
      return Vector<Scalar>((Scalar(1) - theta()) * a.traces.minus + theta() * a.traces.plus);
    };

    const Scalar vol = -volume(p, gamma) + volume(s, omega) + volume(q, alpha) + volume(r, beta);
    const Scalar faces = v_hat(p).dot(jumps(gamma)) - u_hat(s).dot(jumps(omega)) -
                         v_hat(q).dot(jumps(alpha)) - u_hat(r).dot(jumps(beta));
    return vol + faces;
  }

  Scalar apply_B(const PiecewisePolynomial<Scalar>& r, const PiecewisePolynomial<Scalar>& p,
                 const PiecewisePolynomial<Scalar>& s, const PiecewisePolynomial<Scalar>& q,
                 const PiecewisePolynomial<Scalar>& gamma, const PiecewisePolynomial<Scalar>& omega,
                 const PiecewisePolynomial<Scalar>& alpha, const PiecewisePolynomial<Scalar>& beta) const {
    for (const auto* a : {&r, &p, &s, &q}) check_poly(*a);
    return apply_B(rule_, sample(r, rule_), sample(p, rule_), sample(s, rule_), sample(q, rule_), gamma,
                   omega, alpha, beta);
  }

  /// H(r, s; gamma, alpha) = int f(rho) r alpha - int f(rho) s gamma.
  Scalar apply_H(const PiecewisePolynomial<Scalar>& r, const PiecewisePolynomial<Scalar>& s,
                 const PiecewisePolynomial<Scalar>& gamma, const PiecewisePolynomial<Scalar>& alpha) const {
    for (const auto* a : {&r, &s, &gamma, &alpha}) check_poly(*a);
    if (nonlinearity_.vanishes()) return Scalar(0);
    const Matrix<Scalar> r_at = r.coeffs() * values_t_;
    const Matrix<Scalar> s_at = s.coeffs() * values_t_;
    const Matrix<Scalar> g_at = gamma.coeffs() * values_t_;
    const Matrix<Scalar> a_at = alpha.coeffs() * values_t_;
    const Matrix<Scalar> f_rho = nonlinearity_.apply((r_at.array().square() + s_at.array().square()).matrix());
    const Matrix<Scalar> integrand =
        (f_rho.array() * (r_at.array() * a_at.array() - s_at.array() * g_at.array())).matrix();
    return half_widths_.dot(integrand * rule_.weights);
  }

 private:
  // out(j, m) += sign * (hat_{j+1/2} P_m(1) - hat_{j-1/2} P_m(-1))
  void add_face_terms(const Coefficients<Scalar>& c, Scalar w_minus, Scalar w_plus, Scalar sign,
                      Coefficients<Scalar>& out) const {
    const Traces<Scalar> t = coefficient_traces(c);
    const Vector<Scalar> hat = w_minus * t.minus + w_plus * t.plus;
    const Index n = c.rows();
    for (Index j = 0; j < n; ++j) {
      const Scalar right = sign * hat[j];
      const Scalar left = sign * hat[mesh_->left_neighbor(j)];
      for (Index m = 0; m < c.cols(); ++m) out(j, m) += (m % 2 == 0) ? right - left : right + left;
    }
  }

  void check_poly(const PiecewisePolynomial<Scalar>& v) const {
    if (v.mesh().id() != mesh_->id() || v.degree() != degree())
      throw MeshMismatchError("SpatialOperator: argument lives on a different mesh or degree");
  }

  void check_field(const DGField<Scalar>& f) const {
    if (f.mesh().id() != mesh_->id() || f.degree() != degree())
      throw MeshMismatchError("SpatialOperator: field lives on a different mesh or degree");
  }

  MeshPtr<Scalar> mesh_;
  LegendreBasis<Scalar> basis_;
  FluxParam<Scalar> flux_;
  Nonlinearity<Scalar> nonlinearity_;
  QuadratureRule<Scalar> rule_;
  Matrix<Scalar> stiffness_;
  Matrix<Scalar> values_t_;         // (k+1) x n_points
  Matrix<Scalar> weighted_values_;  // n_points x (k+1), rows scaled by weights
  Coefficients<Scalar> mass_inverse_;
  Vector<Scalar> half_widths_;
};

}  // namespace cldg
