#include <doctest.h>

#include "test_support.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace cldg;

TEST_CASE("constant field evaluates to its constant everywhere") {
  const auto mesh = make_uniform_mesh(0.0, 1.0, 5);
  DGField<double> f(mesh, 2);
  f.r().coeffs().col(0).setConstant(3.5);
  for (Index j = 0; j < 5; ++j)
    for (double xi : {-1.0, -0.3, 0.0, 0.8, 1.0}) CHECK(f.eval(Component::r, j, xi) == 3.5);
  const auto t = f.traces(Component::r);
  CHECK((t.minus.array() == 3.5).all());
  CHECK((t.plus.array() == 3.5).all());
}

TEST_CASE("mode-1 coefficient evaluates as c P_1") {
  const auto mesh = make_uniform_mesh(0.0, 1.0, 3);
  DGField<double> f(mesh, 2);
  f.r().coeffs()(0, 1) = 2.0;
  CHECK(f.eval("r", 0, 0.5) == 1.0);
  CHECK(f.eval("r", 1, 0.5) == 0.0);
}

TEST_CASE("single cell with coefficients (0, 1, 0): traces are +1 on the right, -1 on the left") {
  const auto mesh = make_uniform_mesh(0.0, 1.0, 4);
  PiecewisePolynomial<double> v(mesh, 2);
  v.coeffs()(2, 1) = 1.0;
  const auto t = v.traces();
  CHECK(t.minus[2] == 1.0);  // right face of cell 2
  CHECK(t.plus[1] == -1.0);  // left face of cell 2 is interface 1
  CHECK(t.minus[1] == 0.0);
  CHECK(t.plus[2] == 0.0);
}

TEST_CASE("traces agree with evaluation at the faces") {
  std::mt19937_64 rng(11);
  const auto mesh = test::jittered_mesh(-1.0, 2.0, 13, rng);
  const auto f = test::random_field(mesh, 3, rng);
  for (Component c : {Component::r, Component::s}) {
    const auto t = f.traces(c);
    for (Index i = 0; i < 13; ++i) {
      const double scale = f.component(c).coeffs().cwiseAbs().maxCoeff() * 4;
      CHECK(std::abs(t.minus[i] - f.eval(c, i, 1.0)) <= 2 * std::numeric_limits<double>::epsilon() * scale);
      CHECK(std::abs(t.plus[i] - f.eval(c, mesh->right_neighbor(i), -1.0)) <=
            2 * std::numeric_limits<double>::epsilon() * scale);
    }
  }
}

TEST_CASE("unknown component names are rejected") {
  const auto mesh = make_uniform_mesh(0.0, 1.0, 3);
  DGField<double> f(mesh, 1);
  CHECK_THROWS_AS(f.eval("p", 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(component_from_name("u"), std::invalid_argument);
}

TEST_CASE("l2_norm_squared closed-form examples") {
  const auto mesh = make_uniform_mesh(0.0, 1.0, 4);
  DGField<double> one(mesh, 2);
  one.r().coeffs().col(0).setOnes();
  CHECK(one.l2_norm_squared() == doctest::Approx(1.0).epsilon(1e-15));

  PiecewisePolynomial<double> p1(mesh, 2);
  p1.coeffs()(3, 1) = 1.0;
  CHECK(p1.l2_norm_squared() == doctest::Approx(0.25 / 3).epsilon(1e-15));

  DGField<double> mixed(mesh, 2);
  mixed.r().coeffs().col(0).setOnes();
  mixed.s().coeffs().col(0).setConstant(2.0);
  CHECK(mixed.l2_norm_squared({Component::s}) == doctest::Approx(4.0));
  CHECK(mixed.l2_norm_squared() == doctest::Approx(5.0));
}

TEST_CASE("closed-form l2 norm matches high-order quadrature on random fields") {
  std::mt19937_64 rng(5);
  const auto rule = gauss_rule(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 4;
    const auto mesh = test::jittered_mesh(-2.0, 3.0, 9, rng);
    const auto f = test::random_field(mesh, k, rng);
    double quad = 0;
    for (Index j = 0; j < mesh->n_cells(); ++j) {
      double cell = 0;
      for (int q = 0; q < rule.n_points(); ++q) {
        const double r = f.eval(Component::r, j, rule.nodes[q]);
        const double s = f.eval(Component::s, j, rule.nodes[q]);
        cell += rule.weights[q] * (r * r + s * s);
      }
      quad += cell * mesh->width(j) / 2;
    }
    CHECK(std::abs(f.l2_norm_squared() - quad) <= 1e-13 * quad);
  }
}

TEST_CASE("evaluation is linear in the coefficients") {
  std::mt19937_64 rng(9);
  const auto mesh = make_uniform_mesh(0.0, 1.0, 6);
  const auto u = test::random_field(mesh, 3, rng);
  const auto w = test::random_field(mesh, 3, rng);
  const auto combo = 2.5 * u + (-0.75) * w;
  std::uniform_real_distribution<double> xi(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Index j = i % 6;
    const double x = xi(rng);
    const double expected = 2.5 * u.eval(Component::s, j, x) - 0.75 * w.eval(Component::s, j, x);
    CHECK(combo.eval(Component::s, j, x) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("coefficient blocks must be N x (k+1) and finite") {
  const auto mesh = make_uniform_mesh(0.0, 1.0, 4);
  CHECK_THROWS_AS(PiecewisePolynomial<double>(mesh, 2, Coefficients<double>::Zero(4, 2)), std::invalid_argument);
  Coefficients<double> bad = Coefficients<double>::Zero(4, 3);
  bad(2, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    DGField<double>(mesh, 2, Coefficients<double>::Zero(4, 3), bad);
    FAIL("expected NonFiniteError");
  } catch (const NonFiniteError& e) {
    CHECK(e.cell() == 2);
    CHECK(e.component() == "s");
  }
}

TEST_CASE("fields on different meshes do not mix") {
  const auto a = make_uniform_mesh(0.0, 1.0, 4);
  const auto b = make_uniform_mesh(0.0, 1.0, 4);
  DGField<double> fa(a, 1), fb(b, 1);
  CHECK_THROWS_AS(fa += fb, MeshMismatchError);
}

TEST_CASE("uniform reference sample points include both faces") {
  const auto xi = uniform_reference_points<double>(4);
  CHECK(xi[0] == -1.0);
  CHECK(xi[3] == 1.0);
  CHECK(xi[1] == doctest::Approx(-1.0 / 3));
}
