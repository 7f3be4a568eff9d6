#pragma once

#include "cldg/legendre.hpp"
#include "cldg/mesh.hpp"
#include "cldg/types.hpp"

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cldg {

enum class Component { r, s };

inline std::string_view component_name(Component c) { return c == Component::r ? "r" : "s"; }

inline Component component_from_name(std::string_view name) {
  if (name == "r") return Component::r;
  if (name == "s") return Component::s;
  throw std::invalid_argument("unknown component name '" + std::string(name) + "'");
}

/// One-sided traces at every interface: minus[i] from cell i at xi = +1,
/// plus[i] from cell i+1 (mod N) at xi = -1.
template <typename Scalar>
struct Traces {
  Vector<Scalar> minus;
  Vector<Scalar> plus;
};

/// Throws NonFiniteError naming the first cell holding a NaN or infinity.
template <typename Scalar>
void require_finite(const Coefficients<Scalar>& c, std::string_view component) {
  if (c.allFinite()) return;
  for (Index j = 0; j < c.rows(); ++j)
    if (!c.row(j).allFinite()) throw NonFiniteError(j, std::string(component));
}

/// Traces of a raw coefficient block. Shared by fields and the assembly loops.
template <typename Scalar>
Traces<Scalar> coefficient_traces(const Coefficients<Scalar>& c) {
  const Index n = c.rows();
  Traces<Scalar> t{c.rowwise().sum(), Vector<Scalar>(n)};
  for (Index i = 0; i < n; ++i) {
    const Index right = (i + 1 == n) ? 0 : i + 1;
    Scalar v = 0;
    for (Index l = 0; l < c.cols(); ++l) v += (l % 2 == 0) ? c(right, l) : -c(right, l);
    t.plus[i] = v;
  }
  return t;
}

/// A single real component in V_h^k: Legendre coefficients per cell.
template <typename Scalar = double>
class PiecewisePolynomial {
 public:
  PiecewisePolynomial(MeshPtr<Scalar> mesh, int degree)
      : mesh_(std::move(mesh)), degree_(degree) {
    if (!mesh_) throw std::invalid_argument("PiecewisePolynomial: null mesh");
    if (degree_ < 0) throw std::invalid_argument("PiecewisePolynomial: negative degree");
    coeffs_ = Coefficients<Scalar>::Zero(mesh_->n_cells(), degree_ + 1);
  }

  PiecewisePolynomial(MeshPtr<Scalar> mesh, int degree, Coefficients<Scalar> coeffs)
      : PiecewisePolynomial(std::move(mesh), degree) {
    if (coeffs.rows() != coeffs_.rows() || coeffs.cols() != coeffs_.cols())
      throw std::invalid_argument("PiecewisePolynomial: coefficient block must be N x (k+1)");
    coeffs_ = std::move(coeffs);
  }

  const MeshPtr<Scalar>& mesh_ptr() const noexcept { return mesh_; }
  const Mesh1D<Scalar>& mesh() const noexcept { return *mesh_; }
  int degree() const noexcept { return degree_; }
  Index n_cells() const noexcept { return coeffs_.rows(); }

  const Coefficients<Scalar>& coeffs() const noexcept { return coeffs_; }
  Coefficients<Scalar>& coeffs() noexcept { return coeffs_; }

  Scalar eval(Index cell, Scalar xi) const {
    if (cell < 0 || cell >= n_cells()) throw std::out_of_range("eval: bad cell index");
    Scalar v = 0;
    for (int l = 0; l <= degree_; ++l) v += coeffs_(cell, l) * legendre_eval(l, xi).value;
    return v;
  }

  /// Derivative with respect to x inside the cell.
  Scalar eval_dx(Index cell, Scalar xi) const {
    Scalar v = 0;
    for (int l = 1; l <= degree_; ++l) v += coeffs_(cell, l) * legendre_eval(l, xi).derivative;
    return v * Scalar(2) / mesh_->width(cell);
  }

  /// Value at a physical point; on an interior face the left cell is used.
  Scalar eval_at(Scalar x) const {
    const Index j = locate_cell(*mesh_, x);
    return eval(j, map_to_reference(*mesh_, j, x));
  }

  Traces<Scalar> traces() const { return coefficient_traces(coeffs_); }

  /// int |v|^2 dx in closed form via orthogonality: sum c_{j,l}^2 h_j / (2l + 1).
  Scalar l2_norm_squared() const {
    Scalar total = 0;
    for (Index j = 0; j < n_cells(); ++j) {
      Scalar cell = 0;
      for (int l = 0; l <= degree_; ++l) cell += coeffs_(j, l) * coeffs_(j, l) / Scalar(2 * l + 1);
      total += cell * mesh_->width(j);
    }
    return total;
  }

  bool same_space(const PiecewisePolynomial& other) const noexcept {
    return mesh_->id() == other.mesh_->id() && degree_ == other.degree_;
  }

  PiecewisePolynomial& operator+=(const PiecewisePolynomial& o) {
    check_compatible(o);
    coeffs_ += o.coeffs_;
    return *this;
  }
  PiecewisePolynomial& operator-=(const PiecewisePolynomial& o) {
    check_compatible(o);
    coeffs_ -= o.coeffs_;
    return *this;
  }
  PiecewisePolynomial& operator*=(Scalar a) {
    coeffs_ *= a;
    return *this;
  }

  friend PiecewisePolynomial operator+(PiecewisePolynomial a, const PiecewisePolynomial& b) { return a += b; }
  friend PiecewisePolynomial operator-(PiecewisePolynomial a, const PiecewisePolynomial& b) { return a -= b; }
  friend PiecewisePolynomial operator*(Scalar s, PiecewisePolynomial a) { return a *= s; }
  friend PiecewisePolynomial operator-(PiecewisePolynomial a) { return a *= Scalar(-1); }

 private:
  void check_compatible(const PiecewisePolynomial& o) const {
    if (!same_space(o)) throw MeshMismatchError("piecewise polynomials live in different spaces");
  }

  MeshPtr<Scalar> mesh_;
  int degree_;
  Coefficients<Scalar> coeffs_;
};

/// Numerical solution u_h = r_h + i s_h at time t.
template <typename Scalar = double>
class DGField {
 public:
  DGField(MeshPtr<Scalar> mesh, int degree, Scalar time = 0)
      : r_(mesh, degree), s_(mesh, degree), time_(time) {}

  DGField(PiecewisePolynomial<Scalar> r, PiecewisePolynomial<Scalar> s, Scalar time = 0)
      : r_(std::move(r)), s_(std::move(s)), time_(time) {
    if (!r_.same_space(s_)) throw MeshMismatchError("DGField: r and s live in different spaces");
    require_finite(r_.coeffs(), "r");
    require_finite(s_.coeffs(), "s");
  }

  DGField(MeshPtr<Scalar> mesh, int degree, Coefficients<Scalar> r, Coefficients<Scalar> s,
          Scalar time = 0)
      : DGField(PiecewisePolynomial<Scalar>(mesh, degree, std::move(r)),
                PiecewisePolynomial<Scalar>(mesh, degree, std::move(s)), time) {}

  const Mesh1D<Scalar>& mesh() const noexcept { return r_.mesh(); }
  const MeshPtr<Scalar>& mesh_ptr() const noexcept { return r_.mesh_ptr(); }
  int degree() const noexcept { return r_.degree(); }
  Index n_cells() const noexcept { return r_.n_cells(); }
  Scalar time() const noexcept { return time_; }
  void set_time(Scalar t) noexcept { time_ = t; }

  const PiecewisePolynomial<Scalar>& r() const noexcept { return r_; }
  const PiecewisePolynomial<Scalar>& s() const noexcept { return s_; }
  PiecewisePolynomial<Scalar>& r() noexcept { return r_; }
  PiecewisePolynomial<Scalar>& s() noexcept { return s_; }

  const PiecewisePolynomial<Scalar>& component(Component c) const noexcept {
    return c == Component::r ? r_ : s_;
  }
  const PiecewisePolynomial<Scalar>& component(std::string_view name) const {
    return component(component_from_name(name));
  }

  Scalar eval(Component c, Index cell, Scalar xi) const { return component(c).eval(cell, xi); }
  Scalar eval(std::string_view name, Index cell, Scalar xi) const {
    return component(name).eval(cell, xi);
  }

  Traces<Scalar> traces(Component c) const { return component(c).traces(); }

  /// int |u_h|^2 dx over the selected components.
  Scalar l2_norm_squared(std::initializer_list<Component> components = {Component::r, Component::s}) const {
    Scalar total = 0;
    for (Component c : components) total += component(c).l2_norm_squared();
    return total;
  }

  bool same_space(const DGField& o) const noexcept { return r_.same_space(o.r_); }

  DGField& operator+=(const DGField& o) {
    r_ += o.r_;
    s_ += o.s_;
    return *this;
  }
  DGField& operator-=(const DGField& o) {
    r_ -= o.r_;
    s_ -= o.s_;
    return *this;
  }
  DGField& operator*=(Scalar a) {
    r_ *= a;
    s_ *= a;
    return *this;
  }
  friend DGField operator+(DGField a, const DGField& b) { return a += b; }
  friend DGField operator-(DGField a, const DGField& b) { return a -= b; }
  friend DGField operator*(Scalar a, DGField f) { return f *= a; }

 private:
  PiecewisePolynomial<Scalar> r_;
  PiecewisePolynomial<Scalar> s_;
  Scalar time_;
};

/// Uniformly spaced sample points xi_i = -1 + 2 i / (m - 1), faces included.
template <typename Scalar>
Vector<Scalar> uniform_reference_points(int m) {
  if (m < 2) throw std::invalid_argument("uniform_reference_points: need at least 2 points");
  Vector<Scalar> xi(m);
  for (int i = 0; i < m; ++i) xi[i] = Scalar(-1) + Scalar(2 * i) / Scalar(m - 1);
  xi[m - 1] = 1;
  return xi;
}

}  // namespace cldg
