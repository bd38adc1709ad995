// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <Eigen/SVD>

#include "rlct/simulate.hpp"
#include "test_support.hpp"

using namespace rlct;
using namespace rlct::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void check(bool ok, const std::string& what) {
    if (!ok && pass) detail << what;
    pass = pass && ok;
  }
};

double fro(const MatrixXd& M) { return M.norm(); }

double h2_of(const GeneralizedPlant& g, const Controller& k) { return h2_norm(close_loop(g, k)); }

/// Independent LQG design on perturbed plant data.
Controller perturbed_lqg(std::mt19937_64& rng, const StructuredRealization& plant, double eps) {
  const MatrixXd A = plant.A() + eps * randn(rng, plant.n(), plant.n());
  const MatrixXd B = plant.B() + eps * randn(rng, plant.n(), plant.m());
  const MatrixXd C = plant.C() + eps * randn(rng, plant.p(), plant.n());
  return h2_general(embed_problem2(StructuredRealization(A, B, C, MatrixXd::Zero(plant.p(), plant.m()))));
}

Outcome criterion1() {
  Outcome o;
  const StructuredRealization real = bott_duffin_realization();
  const auto sig = infer_signatures(real);
  o.check(sig.has_value(), "no signatures inferred");
  if (!sig) return o;
  o.check(sig->first == Signature({1, 1, 1, -1, -1, -1}) && sig->second == Signature({1}), "unexpected signatures");
  const ValidationReport rep = check_signature_symmetry(real, sig->first, sig->second);
  o.check(rep.pass, "symmetry check failed: " + rep.summary());
  const Netlist net = parse_netlist(read_file(data_path("bott_duffin.net")));
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Complex s(0.0, std::pow(10.0, -2.0 + 4.0 * k / 19.0));
    worst = std::max(worst, rel_err(transfer_eval(real, s), impedance_at(net, s)));
  }
  o.detail << "max rel err " << worst;
  o.check(worst < 1e-8, "");
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::mt19937_64 rng(2002);
  double worst_x = 0.0, worst_k = 0.0;
  for (int t = 0; t < 50; ++t) {
    const GeneralizedPlant g = random_symmetric_plant(rng, randint(rng, 1, 10));
    const MatrixXd X = solve_care_g(g.A, g.B2 * g.B2.transpose(), g.C1.transpose() * g.C1).X;
    const MatrixXd Y = solve_care_g(g.A.transpose(), g.C2.transpose() * g.C2, g.B1 * g.B1.transpose()).X;
    const MatrixXd S = g.sigma_int->matrix();
    worst_x = std::max(worst_x, fro(X - S * Y * S) / (1.0 + fro(X)));
    const Controller K = h2_symmetric(g);
    const double scale = 1.0 + K.realization().M().norm();
    worst_k = std::max(worst_k, controller_symmetry_residual(K, *g.sigma_int, *g.sigma_K) / scale);
  }
  o.detail << "max |X - S Y S| rel " << worst_x << ", max controller residual rel " << worst_k;
  o.check(worst_x < 1e-8 && worst_k < 1e-8, "");
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::mt19937_64 rng(3003);
  double worst_res = 0.0, worst_gap = 0.0, worst_slack = -1e300;
  for (int t = 0; t < 30; ++t) {
    const StructuredRealization plant = random_lct(rng);
    const int n = plant.n();
    worst_res = std::max(worst_res, care_residual(plant.A(), plant.B() * plant.B().transpose(),
                                                  plant.C().transpose() * plant.C(), MatrixXd::Identity(n, n)));
    const GeneralizedPlant g = embed_problem2(plant);
    const double h_lct = h2_of(g, lct_h2(plant));
    const double h_sym = h2_of(g, h2_symmetric(g));
    worst_gap = std::max(worst_gap, std::abs(h_lct - h_sym) / (1.0 + h_sym));
    for (int r = 0, made = 0; made < 20 && r < 400; ++r) {
      Controller k;
      try {
        k = perturbed_lqg(rng, plant, 0.3);
      } catch (const Error&) {
        continue;
      }
      const StructuredRealization cl = close_loop(g, k);
      if (!is_hurwitz(cl.A())) continue;
      ++made;
      worst_slack = std::max(worst_slack, h_lct - h2_norm(cl));
    }
  }
  o.detail << "max X=I residual " << worst_res << ", max H2 gap rel " << worst_gap << ", worst slack " << worst_slack;
  o.check(worst_res < 1e-10 && worst_gap < 1e-8 && worst_slack <= 1e-9, "");
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::mt19937_64 rng(3003);
  double worst = 0.0;
  bool infimum_ok = true, stable = true;
  const double r2 = std::sqrt(2.0);
  for (int t = 0; t < 30; ++t) {
    const StructuredRealization plant = random_lct(rng);
    const GeneralizedPlant g = embed_problem2(plant);
    const StructuredRealization cl = close_loop(g, lct_hinf(plant));
    stable = stable && is_hurwitz(cl.A());
    worst = std::max(worst, std::abs(hinf_norm(cl) - r2));
    infimum_ok = infimum_ok && !hinf_solvable(g, 0.999 * r2) && hinf_solvable(g, 1.001 * r2);
  }
  o.detail << "max | ||T||inf - sqrt2 | " << worst << (infimum_ok ? "" : ", infimum check failed")
           << (stable ? "" : ", unstable closed loop");
  o.check(worst <= 1e-6 && infimum_ok && stable, "");
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(5005);
  double worst_dk = 0.0, worst_gamma = 0.0;
  for (int t = 0; t < 60; ++t) {
    const bool rlt = t < 30;
    const StructuredRealization plant = random_lossy(rng, rlt);
    const Controller K = rlt ? rlt_static(plant) : rct_static(plant);
    const MatrixXd G0 = plant.D() - plant.C() * plant.A().partialPivLu().solve(plant.B());
    worst_dk = std::max(worst_dk, (K.D_K - G0.transpose()).cwiseAbs().maxCoeff() / (1.0 + G0.cwiseAbs().maxCoeff()));
    const double achieved = hinf_norm(close_loop(embed_problem3(plant), K));
    worst_gamma = std::max(worst_gamma, std::abs(achieved - gamma_star(plant)));
  }
  o.detail << "max |D_K - G(0)^T| rel " << worst_dk << ", max |norm - gamma*| " << worst_gamma;
  o.check(worst_dk < 1e-10 && worst_gamma <= 1e-6, "");
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(6006);
  double worst_res = 0.0, worst_diff = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int n = randint(rng, 1, 6), p = randint(rng, 0, n - 1), m = randint(rng, n, n + 3);
    const MatrixXd A = randn(rng, m, n) + 2.0 * MatrixXd::Identity(m, n);
    const MatrixXd C = p ? MatrixXd(randn(rng, p, n) + 2.0 * MatrixXd::Identity(p, n)) : MatrixXd(0, n);
    const VectorXd b = randn(rng, m, 1), d = randn(rng, p, 1);
    const LeastSquaresSolution sol = solve_constrained_ls(A, b, C, d);
    MatrixXd K = MatrixXd::Zero(n + p, n + p);
    K.topLeftCorner(n, n) = A.transpose() * A;
    K.topRightCorner(n, p) = C.transpose();
    K.bottomLeftCorner(p, n) = C;
    VectorXd rhs(n + p);
    rhs << A.transpose() * b, d;
    const VectorXd direct = K.fullPivLu().solve(rhs);
    VectorXd got(n + p);
    got << sol.x, sol.z;
    worst_res = std::max(worst_res, (K * got - rhs).cwiseAbs().maxCoeff());
    worst_diff = std::max(worst_diff, (got - direct).cwiseAbs().maxCoeff());
  }
  MatrixXd A1(2, 1);
  A1 << 1, 1;
  const LeastSquaresSolution scalar = solve_constrained_ls(A1, VectorXd((VectorXd(2) << 1, 3).finished()), MatrixXd(0, 1),
                                                           VectorXd(0));
  const double xbar = scalar.x(0);
  o.detail << "max KKT residual " << worst_res << ", max diff from direct solve " << worst_diff << ", scalar x = "
           << xbar;
  o.check(worst_res < 1e-6 && worst_diff < 1e-6 && std::abs(xbar - 2.0) <= 1e-6, "");
  return o;
}

double grid_mismatch(const MatrixXd& L, const std::vector<int>& ren, const std::map<int, double>& M) {
  const StructuredRealization plant = build_swing_grid(L, ren, M);
  const Controller K = lct_h2(plant);
  const StructuredRealization kr = K.realization();
  const Netlist net = swing_controller_netlist(L, ren, M);
  const std::vector<Drive> drive(ren.size(), Drive::Voltage);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Complex s(0.05 + 0.3 * k, 0.2 + 0.7 * k);
    worst = std::max(worst, rel_err(transfer_eval(kr, s), impedance_at(net, s, drive)));
  }
  return worst;
}

Outcome criterion7() {
  Outcome o;
  MatrixXd L = read_matrix_text(read_file(data_path("grid3_laplacian.txt")));
  double worst = grid_mismatch(L, {0, 1}, {{2, 1.0}});
  std::mt19937_64 rng(7007);
  for (int t = 0; t < 5; ++t) {
    const RandomGrid g = random_grid(rng, randint(rng, 4, 12));
    worst = std::max(worst, grid_mismatch(g.L, g.renewable, g.inertias));
  }
  o.detail << "max rel err " << worst;
  o.check(worst < 1e-8, "");
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::mt19937_64 rng(8008);
  double worst = 0.0;
  bool iso = true;
  for (int t = 0; t < 10; ++t) {
    const Netlist net = random_series_parallel(rng, randint(rng, 1, 8));
    const Netlist dual = planar_dual(net);
    for (int k = 0; k < 5; ++k) {
      const Complex s(0.1 + k, 0.5 * k - 1.0);
      const MatrixXcd prod = impedance_at(dual, s) * impedance_at(net, s);
      worst = std::max(worst, std::abs(prod(0, 0) - 1.0));
    }
    iso = iso && isomorphic(planar_dual(dual), net, 1e-12);
  }
  o.detail << "max |Z_dual Z - 1| " << worst << (iso ? "" : ", dual of dual not isomorphic");
  o.check(worst < 1e-10 && iso, "");
  return o;
}

Outcome criterion9() {
  Outcome o;
  double worst = 0.0;
  {
    const auto [real, data] = single_capacitor(2.5);
    const SimulationResult sim = simulate(real, InputSignal::sinusoid(VectorXd::Ones(1), 1.3, 0.4), 5.0, 1e-3);
    worst = std::max(worst, element_law_residual(real, data, sim));
  }
  {
    const StructuredRealization real = bott_duffin_realization();
    const InternalData data = bott_duffin_internal();
    const SimulationResult sim = simulate(real, InputSignal::sinusoid(VectorXd::Ones(1), 0.9, 0.2), 5.0, 1e-3);
    worst = std::max(worst, element_law_residual(real, data, sim));
  }
  o.detail << "max element-law residual " << worst;
  o.check(worst < 1e-6, "");
  return o;
}

Outcome criterion10() {
  Outcome o;
  std::mt19937_64 rng(1010);
  double worst_h2 = 0.0;
  for (int t = 0; t < 20; ++t) {
    const double a = uniform(rng, 0.05, 20.0);
    const StructuredRealization g(MatrixXd::Constant(1, 1, -a), MatrixXd::Ones(1, 1), MatrixXd::Ones(1, 1),
                                  MatrixXd::Zero(1, 1));
    worst_h2 = std::max(worst_h2, std::abs(h2_norm(g) - 1.0 / std::sqrt(2.0 * a)) * std::sqrt(2.0 * a));
  }
  double worst_inf = 0.0;
  for (double zeta : {0.05, 0.1, 0.3, 0.5}) {
    const double w0 = 2.0;
    MatrixXd A(2, 2), B(2, 1), C(1, 2);
    A << 0, 1, -w0 * w0, -2 * zeta * w0;
    B << 0, 1;
    C << w0 * w0, 0;
    const double peak = 1.0 / (2.0 * zeta * std::sqrt(1.0 - zeta * zeta));
    const double got = hinf_norm(StructuredRealization(A, B, C, MatrixXd::Zero(1, 1)));
    worst_inf = std::max(worst_inf, std::abs(got - peak) / peak);
  }
  o.detail << "max h2 rel err " << worst_h2 << ", max hinf rel err " << worst_inf;
  o.check(worst_h2 < 1e-10 && worst_inf < 1e-6, "");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"six-state golden realization vs MNA impedance", criterion1},
      {"symmetric H2 shortcut on random plants", criterion2},
      {"LCT H2 analytic controller", criterion3},
      {"LCT Hinf static law and infimum", criterion4},
      {"RLT/RCT static controller and gamma*", criterion5},
      {"constrained least squares circuit", criterion6},
      {"swing grid distributed controller", criterion7},
      {"planar dual reciprocity", criterion8},
      {"internal map element laws", criterion9},
      {"norm oracles", criterion10},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu: %s (%s) [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.str().c_str(), secs);
    failures += o.pass ? 0 : 1;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
