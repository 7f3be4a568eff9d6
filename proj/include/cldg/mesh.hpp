#pragma once

#include "cldg/types.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

namespace cldg {

namespace detail {
inline std::uint64_t next_mesh_id() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}
}  // namespace detail

/// Periodic partition of [a, b] into cells O_j = [x_{j-1/2}, x_{j+1/2}].
///
/// Interface i joins the right face of cell i to the left face of cell i+1;
/// interface N-1 wraps to cell 0. Immutable after construction; every mesh
/// receives a unique id so operators can check that fields belong to them.
template <typename Scalar = double>
class Mesh1D {
 public:
  explicit Mesh1D(Vector<Scalar> boundaries) : boundaries_(std::move(boundaries)) {
    const Index n = boundaries_.size() - 1;
    if (n < 1) throw std::invalid_argument("Mesh1D: need at least two boundaries");
    widths_.resize(n);
    for (Index j = 0; j < n; ++j) {
      if (!(boundaries_[j + 1] > boundaries_[j]))
        throw std::invalid_argument("Mesh1D: boundaries must be strictly increasing (at index " +
                                    std::to_string(j + 1) + ")");
      widths_[j] = boundaries_[j + 1] - boundaries_[j];
    }
    finish();
  }

  Index n_cells() const noexcept { return widths_.size(); }
  Scalar left() const noexcept { return boundaries_[0]; }
  Scalar right() const noexcept { return boundaries_[boundaries_.size() - 1]; }
  Scalar length() const noexcept { return right() - left(); }

  const Vector<Scalar>& boundaries() const noexcept { return boundaries_; }
  const Vector<Scalar>& widths() const noexcept { return widths_; }
  const Vector<Scalar>& centers() const noexcept { return centers_; }

  Scalar width(Index j) const { return widths_[j]; }
  Scalar center(Index j) const { return centers_[j]; }
  Scalar left_face(Index j) const { return boundaries_[j]; }
  Scalar right_face(Index j) const { return boundaries_[j + 1]; }

  /// Largest cell width.
  Scalar h() const noexcept { return h_; }
  /// Quasi-uniformity ratio min_j h_j / h.
  Scalar gamma() const noexcept { return gamma_; }

  std::uint64_t id() const noexcept { return id_; }

  Index right_neighbor(Index j) const noexcept { return j + 1 == n_cells() ? 0 : j + 1; }
  Index left_neighbor(Index j) const noexcept { return j == 0 ? n_cells() - 1 : j - 1; }

  /// Cell to the right of interface i (the owner of the plus trace).
  Index plus_cell(Index interface) const noexcept { return right_neighbor(interface); }

 private:
  struct uniform_tag {};

  Mesh1D(uniform_tag, Scalar a, Scalar b, Index n) : boundaries_(n + 1), widths_(n) {
    const Scalar h = (b - a) / static_cast<Scalar>(n);
    for (Index i = 0; i < n; ++i) boundaries_[i] = a + static_cast<Scalar>(i) * h;
    boundaries_[n] = b;
    widths_.setConstant(h);
    finish();
  }

  void finish() {
    const Index n = n_cells();
    centers_.resize(n);
    for (Index j = 0; j < n; ++j) centers_[j] = (boundaries_[j] + boundaries_[j + 1]) / Scalar(2);
    h_ = widths_.maxCoeff();
    gamma_ = widths_.minCoeff() / h_;

    // Compensated sum: the invariant is about the stored widths, not summation error.
    Scalar sum = 0, carry = 0;
    for (Index j = 0; j < n; ++j) {
      const Scalar y = widths_[j] - carry;
      const Scalar t = sum + y;
      carry = (t - sum) - y;
      sum = t;
    }
    const Scalar len = length();
    if (std::abs(sum - len) > 8 * std::numeric_limits<Scalar>::epsilon() * std::abs(len))
      throw std::invalid_argument("Mesh1D: cell widths do not add up to the domain length");
    id_ = detail::next_mesh_id();
  }

  template <typename S>
  friend std::shared_ptr<const Mesh1D<S>> make_uniform_mesh(S a, S b, Index n_cells);

  Vector<Scalar> boundaries_;
  Vector<Scalar> widths_;
  Vector<Scalar> centers_;
  Scalar h_{0};
  Scalar gamma_{0};
  std::uint64_t id_{0};
};

template <typename Scalar>
using MeshPtr = std::shared_ptr<const Mesh1D<Scalar>>;

/// N equal cells on [a, b]. Every width is exactly fl((b - a) / N).
template <typename Scalar>
std::shared_ptr<const Mesh1D<Scalar>> make_uniform_mesh(Scalar a, Scalar b, Index n_cells) {
  if (!(a < b)) throw std::invalid_argument("make_uniform_mesh: need a < b");
  if (n_cells < 2) throw std::invalid_argument("make_uniform_mesh: need at least 2 cells");
  return std::shared_ptr<const Mesh1D<Scalar>>(
      new Mesh1D<Scalar>(typename Mesh1D<Scalar>::uniform_tag{}, a, b, n_cells));
}

template <typename Scalar>
MeshPtr<Scalar> make_mesh(Vector<Scalar> boundaries) {
  return std::make_shared<const Mesh1D<Scalar>>(std::move(boundaries));
}

/// xi = 2 (x - x_j) / h_j. Points within 4 ulps outside the cell are clamped to the face.
template <typename Scalar>
Scalar map_to_reference(const Mesh1D<Scalar>& mesh, Index cell, Scalar x) {
  if (cell < 0 || cell >= mesh.n_cells()) throw std::out_of_range("map_to_reference: bad cell index");
  const Scalar lo = mesh.left_face(cell);
  const Scalar hi = mesh.right_face(cell);
  const Scalar slack =
      4 * std::numeric_limits<Scalar>::epsilon() * std::max(std::abs(lo), std::abs(hi));
  if (x < lo - slack || x > hi + slack)
    throw std::domain_error("map_to_reference: x lies outside cell " + std::to_string(cell));
  const Scalar xi = Scalar(2) * (x - mesh.center(cell)) / mesh.width(cell);
  return std::clamp(xi, Scalar(-1), Scalar(1));
}

template <typename Scalar>
Scalar map_from_reference(const Mesh1D<Scalar>& mesh, Index cell, Scalar xi) {
  return mesh.center(cell) + xi * mesh.width(cell) / Scalar(2);
}

/// Cell containing x (the left cell on an interior face). Requires a <= x <= b.
template <typename Scalar>
Index locate_cell(const Mesh1D<Scalar>& mesh, Scalar x) {
  const auto& bd = mesh.boundaries();
  if (x < bd[0] || x > bd[bd.size() - 1]) throw std::domain_error("locate_cell: x outside the mesh");
  const auto it = std::lower_bound(bd.data() + 1, bd.data() + bd.size(), x);
  return std::min<Index>(static_cast<Index>(it - (bd.data() + 1)), mesh.n_cells() - 1);
}

}  // namespace cldg
