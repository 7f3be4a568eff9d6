#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cldg {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Per-cell coefficient block: one row per cell, one column per Legendre mode.
template <typename Scalar>
using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Real and imaginary part of a complex value u = r + i s.
template <typename Scalar>
struct ComponentPair {
  Scalar r{0};
  Scalar s{0};
};

/// The two-diagonal periodic system of a generalized projection has no unique solution.
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-point iteration of the implicit midpoint step did not reach its tolerance.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(int iterations, double last_increment)
      : std::runtime_error("implicit midpoint fixed-point iteration did not converge after " +
                           std::to_string(iterations) + " iterations (last increment " +
                           std::to_string(last_increment) + ")"),
        iterations_(iterations),
        last_increment_(last_increment) {}

  int iterations() const noexcept { return iterations_; }
  double last_increment() const noexcept { return last_increment_; }

 private:
  int iterations_;
  double last_increment_;
};

/// A coefficient became NaN or infinite. Carries the first offending cell.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(Index cell, const std::string& component)
      : std::runtime_error("non-finite coefficient in component '" + component + "' at cell " +
                           std::to_string(cell)),
        cell_(cell),
        component_(component) {}

  Index cell() const noexcept { return cell_; }
  const std::string& component() const noexcept { return component_; }

 private:
  Index cell_;
  std::string component_;
};

/// Fields or operators built on different meshes were combined.
class MeshMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cldg
