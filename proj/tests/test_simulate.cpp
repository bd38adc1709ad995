#include <doctest.h>

#include "rlct/simulate.hpp"
#include "test_support.hpp"

using namespace rlct;
using namespace rlct::testing;

TEST_CASE("step response of a first-order lag") {
  const StructuredRealization r(MatrixXd::Constant(1, 1, -1), MatrixXd::Ones(1, 1), MatrixXd::Ones(1, 1),
                                MatrixXd::Zero(1, 1));
  const SimulationResult sim = simulate(r, InputSignal::step(VectorXd::Ones(1)), 3.0, 1e-2);
  REQUIRE(sim.times.size() == static_cast<size_t>(sim.outputs.cols()));
  CHECK(sim.times.back() == doctest::Approx(3.0).epsilon(1e-14));
  double worst = 0.0;
  for (size_t k = 0; k < sim.times.size(); ++k)
    worst = std::max(worst, std::abs(sim.outputs(0, k) - (1 - std::exp(-sim.times[k]))));
  CHECK(worst < 1e-9);
}

TEST_CASE("harmonic oscillator keeps its energy") {
  MatrixXd A(2, 2);
  A << 0, 1, -1, 0;
  const StructuredRealization r(A, MatrixXd::Zero(2, 1), MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 1));
  const VectorXd x0 = (VectorXd(2) << 1, 0).finished();
  const SimulationResult sim = simulate(r, InputSignal::zero(1), 2 * M_PI, 1e-3, x0);
  CHECK(std::abs(sim.states(0, sim.states.cols() - 1) - 1.0) < 1e-10);
  CHECK(std::abs(sim.states(1, sim.states.cols() - 1)) < 1e-10);
}

TEST_CASE("recording stride keeps the final sample") {
  const StructuredRealization r(MatrixXd::Constant(1, 1, -1), MatrixXd::Ones(1, 1), MatrixXd::Ones(1, 1),
                                MatrixXd::Zero(1, 1));
  const SimulationResult sim = simulate(r, InputSignal::step(VectorXd::Ones(1)), 1.0, 0.01, VectorXd(), 7);
  CHECK(sim.times.front() == 0.0);
  CHECK(sim.times.back() == doctest::Approx(1.0));
  CHECK(sim.times.size() == 16);
}

TEST_CASE("input signals and derivatives") {
  const InputSignal s = InputSignal::sinusoid((VectorXd(2) << 1, 2).finished(), 3.0, 0.5);
  const double t = 0.37, h = 1e-6;
  CHECK(s.value(t)(1) == doctest::Approx(2 * std::sin(3 * t + 0.5)));
  CHECK(((s.value(t + h) - s.value(t - h)) / (2 * h) - s.derivative(t)).norm() < 1e-7);
  CHECK(InputSignal::step(VectorXd::Ones(3)).derivative(1.0).norm() == 0.0);
  CHECK(InputSignal::zero(2).value(5.0).norm() == 0.0);
}

TEST_CASE("default horizon follows the slowest and fastest modes") {
  MatrixXd A = MatrixXd::Zero(2, 2);
  A(0, 0) = -0.5;
  A(1, 1) = -10;
  const auto [tf, dt] = default_horizon(A);
  CHECK(tf == doctest::Approx(40.0));
  CHECK(dt == doctest::Approx(1.0 / 200.0));
}

TEST_CASE("least squares with an equality constraint") {
  // min |x|^2 subject to x1 + x2 = 2 gives x = (1, 1) and multiplier -1.
  const MatrixXd A = MatrixXd::Identity(2, 2);
  const VectorXd b = VectorXd::Zero(2);
  const MatrixXd C = MatrixXd::Ones(1, 2);
  const VectorXd d = VectorXd::Constant(1, 2.0);
  const LeastSquaresSolution sol = solve_constrained_ls(A, b, C, d);
  CHECK(std::abs(sol.x(0) - 1) < 1e-6);
  CHECK(std::abs(sol.x(1) - 1) < 1e-6);
  CHECK(std::abs(sol.z(0) + 1) < 1e-6);
  CHECK(kkt_residual(A, b, C, d, sol.x, sol.z) < 1e-6);
  CHECK(sol.trace.converged);
}

TEST_CASE("unconstrained least squares from data files") {
  const MatrixXd A = read_matrix_text(read_file(data_path("lsq_A.txt")));
  const VectorXd b = read_matrix_text(read_file(data_path("lsq_b.txt")));
  const LeastSquaresSolution sol = solve_constrained_ls(A, b, MatrixXd(0, A.cols()), VectorXd(0));
  const VectorXd direct = A.colPivHouseholderQr().solve(b);
  CHECK((sol.x - direct).cwiseAbs().maxCoeff() < 1e-6);
}
