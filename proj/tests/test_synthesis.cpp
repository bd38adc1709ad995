#include <doctest.h>

#include "rlct/riccati.hpp"
#include "test_support.hpp"

using namespace rlct;
using namespace rlct::testing;

namespace {

StructuredRealization first_order(double a, double b, double c) {
  return StructuredRealization(MatrixXd::Constant(1, 1, a), MatrixXd::Constant(1, 1, b), MatrixXd::Constant(1, 1, c),
                               MatrixXd::Zero(1, 1));
}

Controller perturbed(const Controller& k, std::mt19937_64& rng, double eps) {
  Controller p = k;
  p.A_K += eps * randn(rng, k.A_K.rows(), k.A_K.cols());
  p.B_K += eps * randn(rng, k.B_K.rows(), k.B_K.cols());
  p.C_K += eps * randn(rng, k.C_K.rows(), k.C_K.cols());
  return p;
}

}  // namespace

TEST_CASE("static feedback loop on a first-order plant") {
  const GeneralizedPlant g = embed_problem3(first_order(-1, 1, 1));
  Controller k;
  k.D_K = MatrixXd::Constant(1, 1, 2.0);
  const StructuredRealization cl = close_loop(g, k);
  REQUIRE(cl.n() == 1);
  CHECK(cl.A()(0, 0) == doctest::Approx(-3.0));
  // z = (x, -2x) driven by w = state disturbance.
  CHECK(cl.C()(0, 0) == doctest::Approx(1.0));
  CHECK(cl.C()(1, 0) == doctest::Approx(-2.0));
}

TEST_CASE("H2 controller is a local minimum of the closed-loop norm") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 8; ++trial) {
    const StructuredRealization plant = random_lct(rng);
    const GeneralizedPlant g = embed_problem2(plant);
    const Controller k = h2_general(g);
    const double best = h2_norm(close_loop(g, k));
    for (int probe = 0; probe < 5; ++probe) {
      const Controller p = perturbed(k, rng, 1e-3);
      const StructuredRealization cl = close_loop(g, p);
      if (is_hurwitz(cl.A())) CHECK(h2_norm(cl) >= best - 1e-10);
    }
  }
}

TEST_CASE("one-Riccati and two-Riccati H2 controllers agree") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const GeneralizedPlant g = random_symmetric_plant(rng, randint(rng, 1, 5));
    REQUIRE(g.symmetry_residual() < 1e-12);
    const Controller ks = h2_symmetric(g), kg = h2_general(g);
    const double hs = h2_norm(close_loop(g, ks)), hg = h2_norm(close_loop(g, kg));
    CHECK(std::abs(hs - hg) < 1e-8 * (1 + hg));
    CHECK(controller_symmetry_residual(ks, *g.sigma_int, *g.sigma_K) < 1e-8 * (1 + ks.A_K.norm()));
  }
}

TEST_CASE("central H-infinity controller meets its level") {
  std::mt19937_64 rng(43);
  const GeneralizedPlant g = random_symmetric_plant(rng, 3);
  double lo = 0.0, hi = 1.0;
  while (!hinf_solvable(g, hi)) hi *= 2;
  for (int i = 0; i < 50; ++i) {
    const double mid = 0.5 * (lo + hi);
    (hinf_solvable(g, mid) ? hi : lo) = mid;
  }
  for (double factor : {1.01, 1.5, 3.0}) {
    const double gamma = hi * factor;
    const Controller k = hinf_symmetric(g, gamma);
    CHECK(hinf_norm(close_loop(g, k)) < gamma);
    CHECK(controller_symmetry_residual(k, *g.sigma_int, *g.sigma_K) < 1e-6 * (1 + k.A_K.norm()));
  }
  CHECK_THROWS_AS(hinf_symmetric(g, lo * 0.9), Error);
  CHECK_THROWS_AS(hinf_symmetric(g, hi), Error);
  CHECK_THROWS_AS(hinf_symmetric(g, -1.0), Error);
}

TEST_CASE("lossless closed-form controllers") {
  std::mt19937_64 rng(44);
  const StructuredRealization plant = random_lct(rng);
  const Controller h2 = lct_h2(plant);
  REQUIRE(h2.impl_hint.has_value());
  CHECK(h2.impl_hint->kind == ImplHint::Kind::CopyNetworkPlusResistors);
  CHECK(h2.impl_hint->ohms == 2.0);
  CHECK(h2.n() == plant.n());
  const Controller hinf = lct_hinf(plant);
  CHECK(hinf.is_static());
  CHECK((hinf.D_K - std::sqrt(2.0) * MatrixXd::Identity(plant.m(), plant.p())).norm() < 1e-15);
  const Controller cop = lct_coprime(plant);
  CHECK(is_hurwitz(close_loop(embed_problem2(plant), cop).A()));
  MatrixXd D = MatrixXd::Zero(plant.p(), plant.m());
  D(0, 0) = 1.0;
  const StructuredRealization with_d(plant.A(), plant.B(), plant.C(), D, plant.sigma_int(), plant.sigma_ext(),
                                     plant.tag(), plant.partition());
  CHECK_THROWS_AS(lct_h2(with_d), Error);
  CHECK_THROWS_AS(embed_problem2(with_d), Error);
}

TEST_CASE("lossy static controller is the transposed DC gain") {
  std::mt19937_64 rng(45);
  for (bool rlt : {true, false}) {
    const StructuredRealization plant = random_lossy(rng, rlt);
    const Controller k = rlt ? rlt_static(plant) : rct_static(plant);
    const MatrixXd G0 = plant.D() - plant.C() * plant.A().inverse() * plant.B();
    CHECK((k.D_K - G0.transpose()).cwiseAbs().maxCoeff() < 1e-9 * (1 + G0.norm()));
  }
}

TEST_CASE("scalar optimal level has the closed form") {
  // n = 1: gamma* = |c/a| / sqrt(1 + g0^2) with g0 = -c b / a.
  const double a = -2, b = 1.5, c = 0.7;
  const StructuredRealization plant = first_order(a, b, c);
  const double g0 = -c * b / a;
  CHECK(gamma_star(plant) == doctest::Approx(std::abs(c / a) / std::sqrt(1 + g0 * g0)).epsilon(1e-12));
}

TEST_CASE("static lossy controller attains the optimal level and perturbations do not improve it") {
  std::mt19937_64 rng(46);
  for (bool rlt : {true, false}) {
    const StructuredRealization plant = random_lossy(rng, rlt);
    const GeneralizedPlant g = embed_problem3(plant);
    const Controller k = rlt ? rlt_static(plant) : rct_static(plant);
    const double gs = gamma_star(plant);
    CHECK(hinf_norm(close_loop(g, k)) == doctest::Approx(gs).epsilon(1e-6));
    for (int probe = 0; probe < 5; ++probe) {
      Controller p = k;
      p.D_K += 1e-2 * randn(rng, k.D_K.rows(), k.D_K.cols());
      const StructuredRealization cl = close_loop(g, p);
      if (is_hurwitz(cl.A())) CHECK(hinf_norm(cl) >= gs * (1 - 1e-6));
    }
  }
}

TEST_CASE("regularity violations are reported") {
  GeneralizedPlant g = embed_problem3(first_order(-1, 1, 1));
  CHECK_FALSE(regularity_violation(g).empty());
  CHECK_THROWS_AS(require_regular(g), Error);
  CHECK(regularity_violation(embed_problem2(first_order(-1, 1, 1))).empty());
}
