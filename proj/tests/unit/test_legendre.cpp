#include <doctest.h>

#include "cldg/legendre.hpp"

#include <cmath>
#include <random>

using namespace cldg;

TEST_CASE("legendre_eval examples") {
  CHECK(legendre_eval(1, 0.7).value == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(legendre_eval(2, 0.0).value == doctest::Approx(-0.5).epsilon(1e-15));
  // closed form (5 xi^3 - 3 xi) / 2
  const double xi = 0.5;
  const double closed = (5 * xi * xi * xi - 3 * xi) / 2;
  CHECK(closed == -0.4375);
  CHECK(legendre_eval(3, xi).value == doctest::Approx(closed).epsilon(1e-15));
}

TEST_CASE("legendre endpoint values") {
  for (int l = 0; l <= 12; ++l) {
    CHECK(legendre_eval(l, 1.0).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(legendre_eval(l, -1.0).value == doctest::Approx(l % 2 == 0 ? 1.0 : -1.0).epsilon(1e-14));
    // P_l'(1) = l (l + 1) / 2
    CHECK(legendre_eval(l, 1.0).derivative == doctest::Approx(l * (l + 1) / 2.0).epsilon(1e-14));
  }
}

TEST_CASE("legendre derivative matches central differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.99, 0.99);
  const double step = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    const double xi = u(rng);
    for (int l = 0; l <= 8; ++l) {
      const double fd = (legendre_eval(l, xi + step).value - legendre_eval(l, xi - step).value) / (2 * step);
      CHECK(legendre_eval(l, xi).derivative == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("legendre_eval rejects arguments outside [-1, 1]") {
  CHECK_THROWS_AS(legendre_eval(2, 1.001), std::domain_error);
  CHECK_THROWS_AS(legendre_eval(-1, 0.0), std::invalid_argument);
  CHECK_NOTHROW(legendre_eval(2, 1.0 + 2e-16));
}

TEST_CASE("classical Gauss rules") {
  const auto one = gauss_rule(1);
  CHECK(one.nodes[0] == 0.0);
  CHECK(one.weights[0] == doctest::Approx(2.0).epsilon(1e-15));

  const auto two = gauss_rule(2);
  CHECK(two.nodes[0] == doctest::Approx(-1 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(two.nodes[1] == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(two.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(two.weights[1] == doctest::Approx(1.0).epsilon(1e-15));

  const auto five = gauss_rule(5);
  const double integral = five.integrate([](double x) { return std::pow(x, 8); });
  CHECK(std::abs(integral - 2.0 / 9.0) <= 1e-14);
}

TEST_CASE("Gauss rules: weights, ordering and node range") {
  for (int n = 1; n <= 64; ++n) {
    const auto rule = gauss_rule(n);
    CHECK(std::abs(rule.weights.sum() - 2.0) <= 1e-14);
    CHECK((rule.weights.array() > 0).all());
    CHECK((rule.nodes.array().abs() < 1).all());
    for (int i = 1; i < n; ++i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
  }
  CHECK_THROWS_AS(gauss_rule(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_rule(65), std::invalid_argument);
}

TEST_CASE("Gauss rules integrate monomials of degree <= 2n - 1 exactly") {
  for (int n = 1; n <= 20; ++n) {
    const auto rule = gauss_rule(n);
    for (int m = 0; m <= 2 * n - 1; ++m) {
      const double approx = rule.integrate([m](double x) { return std::pow(x, m); });
      const double exact = (m % 2 == 1) ? 0.0 : 2.0 / (m + 1);
      if (m % 2 == 1)
        CHECK(std::abs(approx) <= 1e-13);
      else
        CHECK(std::abs(approx - exact) <= 1e-13 * exact);
    }
  }
}

TEST_CASE("Legendre modes are orthogonal under quadrature") {
  const int k = 6;
  const LegendreBasis<double> basis(k);
  const auto rule = gauss_rule(k + 1);
  const Matrix<double> v = basis.tabulate_values(rule);
  const Matrix<double> gram = v.transpose() * rule.weights.asDiagonal() * v;
  for (int l = 0; l <= k; ++l)
    for (int m = 0; m <= k; ++m) {
      const double expected = (l == m) ? 2.0 / (2 * l + 1) : 0.0;
      CHECK(std::abs(gram(l, m) - expected) <= 1e-14);
    }
}

TEST_CASE("closed-form stiffness equals quadrature of P_l P_m'") {
  for (int k = 0; k <= 5; ++k) {
    const LegendreBasis<double> basis(k);
    const auto rule = gauss_rule(k + 1);
    const Matrix<double> quad =
        basis.tabulate_values(rule).transpose() * rule.weights.asDiagonal() * basis.tabulate_derivatives(rule);
    CHECK((quad - basis.stiffness()).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("cell mass inverse") {
  const auto d1 = cell_mass_inverse(LegendreBasis<double>(1), 2.0).diagonal();
  CHECK(d1[0] == 0.5);
  CHECK(d1[1] == 1.5);
  const auto d2 = cell_mass_inverse(LegendreBasis<double>(2), 0.5).diagonal();
  CHECK(d2[0] == 2.0);
  CHECK(d2[1] == 6.0);
  CHECK(d2[2] == 10.0);
  for (int k = 0; k <= 4; ++k) CHECK(cell_mass_inverse(LegendreBasis<double>(k), 0.3).diagonal()[0] == 1 / 0.3);
  CHECK_THROWS_AS(cell_mass_inverse(LegendreBasis<double>(1), 0.0), std::invalid_argument);
}

TEST_CASE("mass matrix assembled by quadrature equals the closed-form diagonal") {
  const double width = 0.37;
  for (int k = 1; k <= 5; ++k) {
    const LegendreBasis<double> basis(k);
    const auto rule = gauss_rule(k + 1);
    const Matrix<double> v = basis.tabulate_values(rule);
    const Matrix<double> mass = (width / 2) * v.transpose() * rule.weights.asDiagonal() * v;
    const Matrix<double> inv = cell_mass_inverse(basis, width).toDenseMatrix();
    CHECK((mass * inv - Matrix<double>::Identity(k + 1, k + 1)).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("long double instantiation") {
  const auto rule = gauss_rule<long double>(12);
  const long double integral = rule.integrate([](long double x) { return std::pow(x, 22); });
  CHECK(std::abs(static_cast<double>(integral - 2.0L / 23.0L)) <= 1e-16);
  CHECK(std::abs(static_cast<double>(rule.weights.sum() - 2.0L)) <= 1e-17);
}
