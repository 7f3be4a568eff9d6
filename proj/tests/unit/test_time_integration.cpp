#include <doctest.h>

#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace cldg;

namespace {

SpatialOperator<double> make_op(const MeshPtr<double>& mesh, int k, double theta, double lambda) {
  return SpatialOperator<double>(mesh, k, FluxParam<double>(theta), Nonlinearity<double>::cubic(lambda));
}

DGField<double> constant_field(const MeshPtr<double>& mesh, int k, double c1, double c2) {
  DGField<double> f(mesh, k);
  f.r().coeffs().col(0).setConstant(c1);
  f.s().coeffs().col(0).setConstant(c2);
  return f;
}

double coeff_distance(const DGField<double>& a, const DGField<double>& b) {
  return std::max((a.r().coeffs() - b.r().coeffs()).cwiseAbs().maxCoeff(),
                  (a.s().coeffs() - b.s().coeffs()).cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("step of the zero field is the zero field") {
  const auto mesh = make_uniform_mesh(0.0, 1.0, 8);
  const auto op = make_op(mesh, 2, 0.5, 2.0);
  StepReport report;
  const auto u1 = step(op, DGField<double>(mesh, 2), StepperConfig<double>{0.01}, &report);
  CHECK(u1.r().coeffs().cwiseAbs().maxCoeff() == 0.0);
  CHECK(u1.s().coeffs().cwiseAbs().maxCoeff() == 0.0);
  CHECK(u1.time() == 0.01);
  CHECK(report.iterations == 1);
}

TEST_CASE("constant field rotates in phase with third-order local error") {
  // coarse cells keep tau times the spatial operator norm small enough for the fixed point
  const auto mesh = make_uniform_mesh(0.0, 60.0, 6);
  const double c1 = 0.6, c2 = -1.3, lambda = 2.0;
  const double modulus = std::hypot(c1, c2), omega = lambda * modulus * modulus;
  const auto op = make_op(mesh, 2, 0.7, lambda);

  auto phase_error = [&](double tau) {
    const auto u1 = step(op, constant_field(mesh, 2, c1, c2), StepperConfig<double>{tau});
    const double r = u1.r().coeffs()(2, 0), s = u1.s().coeffs()(2, 0);
    CHECK(std::hypot(r, s) == doctest::Approx(modulus).epsilon(1e-12));
    const double phase = std::atan2(c1 * s - c2 * r, c1 * r + c2 * s);
    // the midpoint value is c exp(i phi / 2) cos(phi / 2), so the discrete phase solves
    // tan(phi / 2) = (omega tau / 2) cos^2(phi / 2)
    double half = 0;
    for (int i = 0; i < 200; ++i) half = std::atan(omega * tau / 2 * std::cos(half) * std::cos(half));
    CHECK(phase == doctest::Approx(2 * half).epsilon(1e-11));
    return std::abs(phase - omega * tau);
  };
  const double e1 = phase_error(0.02), e2 = phase_error(0.01);
  CHECK(e1 / e2 == doctest::Approx(8.0).epsilon(0.05));
}

TEST_CASE("one step conserves charge to solver tolerance") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mesh = make_uniform_mesh(-4.0, 4.0, 16);
    const auto op = make_op(mesh, 2, 0.25 * (trial % 5), 2.0);
    DGField<double> u0 = 0.3 * test::random_field(mesh, 2, rng);
    const auto u1 = step(op, u0, StepperConfig<double>{2e-3});
    CHECK(std::abs(u1.l2_norm_squared() - u0.l2_norm_squared()) <= 1e-11 * u0.l2_norm_squared());
  }
}

TEST_CASE("midpoint stepping is time-reversible") {
  std::mt19937_64 rng(21);
  const auto mesh = make_uniform_mesh(-4.0, 4.0, 16);
  const auto op = make_op(mesh, 2, 0.6, 2.0);
  const StepperConfig<double> cfg{2e-3};
  const DGField<double> u0 = 0.3 * test::random_field(mesh, 2, rng);
  const auto back = step_by(op, step_by(op, u0, 2e-3, cfg), -2e-3, cfg);
  CHECK(coeff_distance(back, u0) <= 100 * cfg.fp_tolerance);
}

TEST_CASE("midpoint stepping is second order in time") {
  const auto mesh = make_uniform_mesh(-8.0, 8.0, 32);
  const auto op = make_op(mesh, 1, 0.75, 2.0);
  const InitialFunction<double> u0 = [](double x) { return gaussian_ic(x, 1.0); };
  auto run = [&](double tau) { return evolve(op, u0, 0.2, StepperConfig<double>{tau}).final_field; };
  const auto u1 = run(0.01), u2 = run(0.005), u4 = run(0.0025);
  const DGField<double> ref = (4.0 / 3.0) * u4 - (1.0 / 3.0) * u2;
  const double e1 = std::sqrt((u1 - ref).l2_norm_squared());
  const double e2 = std::sqrt((u2 - ref).l2_norm_squared());
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("evolve with T = tau takes exactly one step") {
  const auto mesh = make_uniform_mesh(-25.0, 25.0, 100);
  const auto op = make_op(mesh, 2, 1.0, 2.0);
  const InitialFunction<double> u0 = [](double x) { return soliton_exact(0.0, x, 10.0); };
  const auto traj = evolve(op, u0, 1e-3, StepperConfig<double>{1e-3});
  CHECK(traj.steps == 1);
  CHECK(traj.charge_series.size() == 2);
  CHECK(traj.final_field.time() == 1e-3);
}

TEST_CASE("the last step is shortened to land on T") {
  const auto mesh = make_uniform_mesh(0.0, 1.0, 8);
  const auto op = make_op(mesh, 1, 1.0, 2.0);
  const auto traj = evolve_field(op, constant_field(mesh, 1, 1.0, 0.0), 0.0025, StepperConfig<double>{1e-3});
  CHECK(traj.steps == 3);
  CHECK(traj.final_field.time() == 0.0025);
  CHECK(traj.charge_series[2].t == doctest::Approx(2e-3));

  CHECK(step_count(1.0, 1e-3) == 1000);
  CHECK(step_count(0.5, 1e-4) == 5000);
  CHECK(step_count(5.0, 1e-3) == 5000);
  CHECK(step_count(0.0025, 1e-3) == 3);
}

TEST_CASE("snapshots are taken at the nearest step") {
  const auto mesh = make_uniform_mesh(0.0, 1.0, 8);
  const auto op = make_op(mesh, 1, 1.0, 2.0);
  const auto traj =
      evolve_field(op, constant_field(mesh, 1, 1.0, 0.0), 0.01, StepperConfig<double>{1e-3}, {0.0, 0.005, 0.01});
  REQUIRE(traj.snapshots.size() == 3);
  CHECK(traj.snapshots[0].time() == 0.0);
  CHECK(traj.snapshots[1].time() == doctest::Approx(0.005));
  CHECK(traj.snapshots[2].time() == 0.01);
  CHECK_THROWS_AS(evolve_field(op, constant_field(mesh, 1, 1.0, 0.0), 0.01, StepperConfig<double>{1e-3}, {0.02}),
                  std::invalid_argument);
}

TEST_CASE("charge drift stays within the solver-tolerance budget") {
  const auto mesh = make_uniform_mesh(-25.0, 25.0, 100);
  const auto op = make_op(mesh, 2, 1.0, 2.0);
  const InitialFunction<double> u0 = [](double x) { return soliton_exact(0.0, x, 10.0); };
  const StepperConfig<double> cfg{1e-3};
  const auto traj = evolve(op, u0, 0.2, cfg);
  CHECK(traj.max_relative_drift() <= traj.steps * 10 * cfg.fp_tolerance);
  CHECK(traj.max_iterations_used < cfg.max_iterations);
}

TEST_CASE("linear evolution of constant data is the identity") {
  const auto mesh = make_uniform_mesh(0.0, 8.0, 8);
  const auto op = make_op(mesh, 2, 0.3, 0.0);
  const auto u0 = constant_field(mesh, 2, 0.8, -0.2);
  const auto traj = evolve_field(op, u0, 0.05, StepperConfig<double>{0.01});
  CHECK(coeff_distance(traj.final_field, u0) <= 1e-14);
}

TEST_CASE("solver failures are reported with the step") {
  std::mt19937_64 rng(2);
  const auto mesh = make_uniform_mesh(0.0, 1.0, 8);
  const auto op = make_op(mesh, 2, 1.0, 2.0);
  const auto u0 = test::random_field(mesh, 2, rng);
  StepperConfig<double> cfg{1e-3};
  cfg.max_iterations = 1;
  CHECK_THROWS_AS(step(op, u0, cfg), NonConvergenceError);
  try {
    evolve_field(op, u0, 0.01, cfg);
    FAIL("expected EvolveError");
  } catch (const EvolveError& e) {
    CHECK(e.step_index() == 1);
  }
}

TEST_CASE("invalid stepper configurations are rejected") {
  CHECK_THROWS_AS(StepperConfig<double>{0.0}.validate(), std::invalid_argument);
  CHECK_THROWS_AS((StepperConfig<double>{1e-3, -1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((StepperConfig<double>{1e-3, 1e-13, 0}.validate()), std::invalid_argument);
  const auto mesh = make_uniform_mesh(0.0, 1.0, 4);
  CHECK_THROWS_AS(
      evolve_field(make_op(mesh, 1, 1.0, 2.0), DGField<double>(mesh, 1), -1.0, StepperConfig<double>{1e-3}),
      std::invalid_argument);
}
