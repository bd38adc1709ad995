#include <doctest.h>

#include "test_support.hpp"

using namespace rlct;
using namespace rlct::testing;

TEST_CASE("scalar CARE has the closed-form root") {
  // x^2 - 2ax - q = 0 with b = r = 1.
  for (double a : {-2.0, 0.0, 1.0, 3.5}) {
    const RiccatiSolution sol = solve_care(MatrixXd::Constant(1, 1, a), MatrixXd::Ones(1, 1), MatrixXd::Ones(1, 1),
                                           MatrixXd::Ones(1, 1));
    CHECK(std::abs(sol.X(0, 0) - (a + std::sqrt(a * a + 1))) < 1e-12);
    CHECK(sol.closed_loop_abscissa < 0);
  }
}

TEST_CASE("random CARE solutions are stabilizing with small residual") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = randint(rng, 1, 8), m = randint(rng, 1, 3);
    const MatrixXd A = randn(rng, n, n), B = randn(rng, n, m), Cq = randn(rng, n, n);
    const MatrixXd Q = Cq * Cq.transpose(), R = MatrixXd::Identity(m, m);
    const RiccatiSolution sol = solve_care(A, B, Q, R);
    const MatrixXd G = B * B.transpose();
    const double scale = Q.norm() + 2 * A.norm() * sol.X.norm() + G.norm() * sol.X.squaredNorm();
    CHECK(sol.residual < 1e-12 * scale);
    CHECK((sol.X - sol.X.transpose()).norm() < 1e-9 * (1 + sol.X.norm()));
    CHECK(is_hurwitz(A - G * sol.X));
    CHECK(care_residual(A, G, Q, sol.X) == doctest::Approx(sol.residual).epsilon(1e-6));
  }
}

TEST_CASE("indefinite G is accepted") {
  MatrixXd A(2, 2), G(2, 2), Q = MatrixXd::Identity(2, 2);
  A << -1, 2, 0, -3;
  G << 1, 0, 0, -0.1;
  const RiccatiSolution sol = solve_care_g(A, G, Q);
  CHECK(sol.residual < 1e-10);
  CHECK(is_hurwitz(A - G * sol.X));
}

TEST_CASE("Lyapunov solution") {
  const MatrixXd A = MatrixXd::Constant(1, 1, -2.0), W = MatrixXd::Constant(1, 1, 3.0);
  CHECK(solve_lyapunov(A, W)(0, 0) == doctest::Approx(0.75));
  std::mt19937_64 rng(32);
  const MatrixXd R = randn(rng, 5, 5);
  const MatrixXd A5 = -(R * R.transpose()) - MatrixXd::Identity(5, 5) + (R - R.transpose());
  const MatrixXd W5 = MatrixXd::Identity(5, 5);
  const MatrixXd P = solve_lyapunov(A5, W5);
  CHECK((A5 * P + P * A5.transpose() + W5).norm() < 1e-11);
  CHECK_THROWS_AS(solve_lyapunov(MatrixXd::Constant(1, 1, 1.0), W), Error);
}

TEST_CASE("first-order norms") {
  for (double a : {0.5, 1.0, 4.0}) {
    const StructuredRealization g(MatrixXd::Constant(1, 1, -a), MatrixXd::Ones(1, 1), MatrixXd::Ones(1, 1),
                                  MatrixXd::Zero(1, 1));
    CHECK(h2_norm(g) == doctest::Approx(1 / std::sqrt(2 * a)).epsilon(1e-12));
    CHECK(hinf_norm(g) == doctest::Approx(1 / a).epsilon(1e-8));
  }
}

TEST_CASE("resonant peak of a lightly damped second-order system") {
  const double z = 0.05, wn = 2.0;
  MatrixXd A(2, 2), B(2, 1), C(1, 2);
  A << 0, 1, -wn * wn, -2 * z * wn;
  B << 0, wn * wn;
  C << 1, 0;
  const StructuredRealization g(A, B, C, MatrixXd::Zero(1, 1));
  CHECK(hinf_norm(g) == doctest::Approx(1 / (2 * z * std::sqrt(1 - z * z))).epsilon(1e-8));
}

TEST_CASE("spectral helpers") {
  MatrixXd A(2, 2);
  A << 0, 1, -1, 0;
  CHECK(std::abs(spectral_abscissa(A)) < 1e-14);
  CHECK_FALSE(is_hurwitz(A));
  MatrixXd B(2, 1);
  B << 1, 0;
  CHECK(is_stabilizable(A, B));
  CHECK_FALSE(is_stabilizable(MatrixXd::Identity(2, 2), B));
  CHECK(is_detectable(B.transpose(), A));
}

TEST_CASE("H-infinity feasibility is monotone in gamma") {
  std::mt19937_64 rng(33);
  const GeneralizedPlant g = random_symmetric_plant(rng, 3);
  double lo = 0.0, hi = 1.0;
  while (!hinf_solvable(g, hi)) hi *= 2;
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    (hinf_solvable(g, mid) ? hi : lo) = mid;
  }
  CHECK(hinf_solvable(g, hi * 1.01));
  CHECK(hinf_solvable(g, hi * 2));
  CHECK_FALSE(hinf_solvable(g, lo * 0.99));
  const HinfRiccatiPair p = hinf_riccati(g, hi * 1.5);
  CHECK(p.solvable);
  CHECK(p.spectral_radius < (hi * 1.5) * (hi * 1.5));
}
