#pragma once

#include "cldg/cldg.hpp"

#include <memory>
#include <random>

namespace cldg::test {

/// Field with independent uniform(-1, 1) coefficients in every cell and mode.
inline DGField<double> random_field(const MeshPtr<double>& mesh, int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Coefficients<double> r(mesh->n_cells(), degree + 1), s(mesh->n_cells(), degree + 1);
  for (Index j = 0; j < r.rows(); ++j)
    for (Index l = 0; l < r.cols(); ++l) {
      r(j, l) = u(rng);
      s(j, l) = u(rng);
    }
  return DGField<double>(mesh, degree, r, s);
}

inline PiecewisePolynomial<double> random_poly(const MeshPtr<double>& mesh, int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Coefficients<double> c(mesh->n_cells(), degree + 1);
  for (Index j = 0; j < c.rows(); ++j)
    for (Index l = 0; l < c.cols(); ++l) c(j, l) = u(rng);
  return PiecewisePolynomial<double>(mesh, degree, c);
}

/// Non-uniform periodic mesh with widths drawn from [0.5, 1.5] * (b - a) / N.
inline MeshPtr<double> jittered_mesh(double a, double b, Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.5, 1.5);
  Vector<double> w(n);
  for (Index j = 0; j < n; ++j) w[j] = u(rng);
  w *= (b - a) / w.sum();
  Vector<double> bd(n + 1);
  bd[0] = a;
  for (Index j = 0; j < n; ++j) bd[j + 1] = bd[j] + w[j];
  bd[n] = b;
  return make_mesh(bd);
}

}  // namespace cldg::test
