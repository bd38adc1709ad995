#include <doctest.h>

#include "rlct/simulate.hpp"
#include "test_support.hpp"

using namespace rlct;
using namespace rlct::testing;

TEST_CASE("fixture data satisfies every condition") {
  const ValidationReport rep = validate_internal_data(bott_duffin_realization(), bott_duffin_internal());
  CHECK_MESSAGE(rep.pass, rep.summary());
}

TEST_CASE("a negative element value is rejected") {
  InternalData d = bott_duffin_internal();
  d.phi(2, 2) = -d.phi(2, 2);
  CHECK_FALSE(validate_internal_data(bott_duffin_realization(), d).pass);
}

TEST_CASE("a wrong signature is rejected") {
  InternalData d = bott_duffin_internal();
  d.sigma_int = Signature({-1, -1, 1, 1, 1, 1});
  CHECK_FALSE(validate_internal_data(bott_duffin_realization(), d).pass);
}

TEST_CASE("internal map dimensions") {
  const StructuredRealization r = bott_duffin_realization();
  const InternalData d = bott_duffin_internal();
  const MatrixXd F = build_F(r, d);
  CHECK(F.rows() == 2 * d.n());
  CHECK(F.cols() == d.n_int() + r.m() + r.p());
}

TEST_CASE("capacitor current equals c dv/dt") {
  for (double c : {0.5, 2.0}) {
    const auto [real, data] = single_capacitor(c);
    const SimulationResult sim = simulate(real, InputSignal::sinusoid(VectorXd::Ones(1), 2.0), 4.0, 1e-3);
    CHECK(element_law_residual(real, data, sim) < 1e-9);
  }
}

TEST_CASE("element laws hold along a fixture trajectory") {
  const StructuredRealization r = bott_duffin_realization();
  const SimulationResult sim = simulate(r, InputSignal::sinusoid(VectorXd::Ones(1), 0.7, 0.1), 6.0, 1e-3);
  CHECK(element_law_residual(r, bott_duffin_internal(), sim) < 1e-9);
}

TEST_CASE("commuting eigenvectors diagonalize and respect the signature") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = randint(rng, 1, 6);
    const Signature s = random_signature(rng, n);
    const MatrixXd S = s.matrix();
    // Symmetric and commuting with S: block diagonal in the +/- split.
    const MatrixXd R = randn(rng, n, n);
    const MatrixXd M0 = R + R.transpose();
    const MatrixXd M = 0.5 * (M0 + S * M0 * S);
    const MatrixXd V = commuting_eigvecs(M, s);
    CHECK((V.transpose() * V - MatrixXd::Identity(n, n)).norm() < 1e-12);
    MatrixXd T = V.transpose() * M * V;
    T.diagonal().setZero();
    CHECK(T.norm() < 1e-10 * (1 + M.norm()));
    CHECK((V.transpose() * S * V - (V.transpose() * S * V).diagonal().asDiagonal().toDenseMatrix()).norm() < 1e-12);
  }
}
