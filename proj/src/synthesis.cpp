#include "rlct/synthesis.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "rlct/riccati.hpp"
#include "rlct/structured_ss.hpp"

namespace rlct {

namespace {

double max_abs(const MatrixXd& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

double norm2(const MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  return Eigen::JacobiSVD<MatrixXd>(M).singularValues()(0);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_symmetric_plant(const GeneralizedPlant& g) {
  g.check_dims();
  if (!g.has_signatures()) fail(ErrorKind::Input, "signature-symmetric synthesis needs sigma_int, sigma_ext and sigma_K");
  const double scale = 1.0 + norm2(g.realization().M());
  const double r = g.symmetry_residual();
  if (!(r < tol::kStruct * scale))
    fail(ErrorKind::Structure, "plant is not signature-symmetric: residual " + fmt(r));
}

void require_lct(const StructuredRealization& plant) {
  const ValidationReport rep = validate_structure(plant, ClassTag::LCT);
  if (!rep.pass) fail(ErrorKind::Structure, "LCT structure violated: " + rep.summary());
}

/// Z^(1/2) for Z = (I - W/gamma^2)^(-1).
MatrixXd z_sqrt(const MatrixXd& W, double gamma) {
  const Eigen::Index n = W.rows();
  if (n == 0) return MatrixXd(0, 0);
  const double gi2 = 1.0 / (gamma * gamma);
  Eigen::EigenSolver<MatrixXd> es(W);
  if (es.info() == Eigen::Success) {
    const Eigen::VectorXcd lam = es.eigenvalues();
    const MatrixXcd V = es.eigenvectors();
    Eigen::PartialPivLU<MatrixXcd> lu(V);
    const double scale = 1.0 + lam.cwiseAbs().maxCoeff();
    bool ok = lu.rcond() > 1e-10 && lam.imag().cwiseAbs().maxCoeff() < 1e-9 * scale;
    if (ok) {
      Eigen::VectorXcd f(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double w = 1.0 - gi2 * lam(i).real();
        if (!(w > 0.0)) fail(ErrorKind::Solver, "Z∞ is not positive: spectral radius reached gamma squared");
        f(i) = 1.0 / std::sqrt(w);
      }
      return (V * f.asDiagonal() * lu.inverse()).real();
    }
  }
  // Binomial series of (I - W/gamma^2)^(-1/2).
  const MatrixXd Wg = gi2 * W;
  const double rho = Wg.eigenvalues().cwiseAbs().maxCoeff();
  if (!(rho < 1.0)) fail(ErrorKind::Solver, "Z∞ series diverges: spectral radius reached gamma squared");
  MatrixXd term = MatrixXd::Identity(n, n), sum = term;
  for (int k = 1; k < 1000000; ++k) {
    term = term * Wg * ((2.0 * k - 1.0) / (2.0 * k));
    sum += term;
    if (max_abs(term) < 1e-16 * max_abs(sum)) return sum;
  }
  fail(ErrorKind::Convergence, "Z∞ series did not converge");
}

MatrixXd sym_part(const MatrixXd& M) { return 0.5 * (M + M.transpose()); }

}  // namespace

std::string to_string(ImplHint::Kind kind) {
  switch (kind) {
    case ImplHint::Kind::TerminateResistors: return "terminate_resistors";
    case ImplHint::Kind::CopyNetworkPlusResistors: return "copy_network_plus_resistors";
    case ImplHint::Kind::DualNetwork: return "dual_network";
  }
  return "terminate_resistors";
}

ImplHint::Kind impl_kind_from_string(std::string_view s) {
  if (s == "terminate_resistors") return ImplHint::Kind::TerminateResistors;
  if (s == "copy_network_plus_resistors") return ImplHint::Kind::CopyNetworkPlusResistors;
  if (s == "dual_network") return ImplHint::Kind::DualNetwork;
  fail(ErrorKind::Input, "unknown impl_hint kind '" + std::string(s) + "'");
}

StructuredRealization Controller::realization() const {
  const Eigen::Index nk = A_K.rows(), ny = D_K.cols(), nu = D_K.rows();
  const MatrixXd B = B_K.size() ? B_K : MatrixXd::Zero(nk, ny);
  const MatrixXd C = C_K.size() ? C_K : MatrixXd::Zero(nu, nk);
  return StructuredRealization(A_K.size() ? A_K : MatrixXd(0, 0), B, C, D_K);
}

Controller Controller::from_realization(const StructuredRealization& r) {
  Controller k;
  k.A_K = r.A();
  k.B_K = r.B();
  k.C_K = r.C();
  k.D_K = r.D();
  return k;
}

GeneralizedPlant embed_problem2(const StructuredRealization& plant) {
  if (max_abs(plant.D()) > 0.0) fail(ErrorKind::Input, "the problem-2 embedding requires D = 0");
  const int n = plant.n(), m = plant.m(), p = plant.p();
  GeneralizedPlant g;
  g.A = plant.A();
  g.B1 = MatrixXd::Zero(n, m + p);
  g.B1.leftCols(m) = plant.B();
  g.B2 = plant.B();
  g.C1 = MatrixXd::Zero(p + m, n);
  g.C1.topRows(p) = plant.C();
  g.C2 = plant.C();
  g.D11 = MatrixXd::Zero(p + m, m + p);
  g.D12 = MatrixXd::Zero(p + m, m);
  g.D12.bottomRows(m).setIdentity();
  g.D21 = MatrixXd::Zero(p, m + p);
  g.D21.rightCols(p).setIdentity();
  g.D22 = MatrixXd::Zero(p, m);
  if (plant.sigma_int() && plant.sigma_ext() && m == p) {
    g.sigma_int = plant.sigma_int();
    g.sigma_ext = plant.sigma_ext()->concat(*plant.sigma_ext());
    g.sigma_K = plant.sigma_ext();
  }
  return g;
}

GeneralizedPlant embed_problem3(const StructuredRealization& plant) {
  const int n = plant.n(), m = plant.m(), p = plant.p();
  GeneralizedPlant g;
  g.A = plant.A();
  g.B1 = MatrixXd::Identity(n, n);
  g.B2 = plant.B();
  g.C1 = MatrixXd::Zero(p + m, n);
  g.C1.topRows(p) = plant.C();
  g.C2 = plant.C();
  g.D11 = MatrixXd::Zero(p + m, n);
  g.D12 = MatrixXd::Zero(p + m, m);
  g.D12.topRows(p) = plant.D();
  g.D12.bottomRows(m).setIdentity();
  g.D21 = MatrixXd::Zero(p, n);
  g.D22 = plant.D();
  return g;
}

Controller h2_general(const GeneralizedPlant& g) {
  require_regular(g);
  const MatrixXd X = solve_care_g(g.A, g.B2 * g.B2.transpose(), g.C1.transpose() * g.C1).X;
  const MatrixXd Y = solve_care_g(g.A.transpose(), g.C2.transpose() * g.C2, g.B1 * g.B1.transpose()).X;
  Controller k;
  k.A_K = g.A - g.B2 * g.B2.transpose() * X - Y * g.C2.transpose() * g.C2;
  k.B_K = Y * g.C2.transpose();
  k.C_K = g.B2.transpose() * X;
  k.D_K = MatrixXd::Zero(g.nu(), g.ny());
  return k;
}

Controller h2_symmetric(const GeneralizedPlant& g) {
  require_symmetric_plant(g);
  require_regular(g);
  const MatrixXd S = g.sigma_int->matrix(), SK = g.sigma_K->matrix();
  const MatrixXd BB = g.B2 * g.B2.transpose();
  const MatrixXd X = sym_part(solve_care_g(g.A, BB, g.C1.transpose() * g.C1).X);
  Controller k;
  k.A_K = g.A - BB * X - S * X * BB * S;
  k.B_K = -S * X * g.B2 * SK;
  k.C_K = g.B2.transpose() * X;
  k.D_K = MatrixXd::Zero(g.nu(), g.ny());
  return k;
}

Controller hinf_symmetric(const GeneralizedPlant& g, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) fail(ErrorKind::Input, "gamma must be positive and finite");
  require_symmetric_plant(g);
  require_regular(g);
  const HinfRiccatiPair pair = hinf_riccati(g, gamma);
  if (!pair.solvable)
    fail(ErrorKind::Solver, "H∞ problem not solvable at gamma = " + fmt(gamma) + ": " + pair.reason);
  const double g_lo = gamma * (1.0 - 1e-6);
  if (!hinf_solvable(g, g_lo))
    fail(ErrorKind::Solver, "gamma = " + fmt(gamma) + " is within 1e-6 of the optimum; try gamma = " +
                                fmt(gamma * (1.0 + 1e-3)));
  const double gi2 = 1.0 / (gamma * gamma);
  const MatrixXd S = g.sigma_int->matrix(), SK = g.sigma_K->matrix();
  const MatrixXd X = sym_part(
      solve_care_g(g.A, g.B2 * g.B2.transpose() - gi2 * g.B1 * g.B1.transpose(), g.C1.transpose() * g.C1).X);
  const Eigen::Index n = g.n();
  const MatrixXd I = MatrixXd::Identity(n, n);
  const MatrixXd W = S * X * S * X;
  const MatrixXd Z = (I - gi2 * W).inverse();
  const MatrixXd BB = g.B2 * g.B2.transpose();
  const MatrixXd A_inf = g.A + gi2 * g.B1 * g.B1.transpose() * X - BB * X - Z * S * X * BB * S;
  const MatrixXd B_inf = -Z * S * X * g.B2 * SK;
  const MatrixXd C_inf = g.B2.transpose() * X;
  const MatrixXd Zh = z_sqrt(W, gamma);
  Eigen::PartialPivLU<MatrixXd> lu(Zh);
  Controller k;
  k.A_K = lu.solve(A_inf * Zh);
  k.B_K = lu.solve(B_inf);
  k.C_K = C_inf * Zh;
  k.D_K = MatrixXd::Zero(g.nu(), g.ny());
  const double achieved = hinf_norm(close_loop(g, k));
  if (!(achieved < gamma * (1.0 + 1e-9)))
    fail(ErrorKind::Solver, "central controller achieves " + fmt(achieved) + " which is not below gamma = " + fmt(gamma));
  return k;
}

Controller lct_h2(const StructuredRealization& plant) {
  require_lct(plant);
  if (max_abs(plant.D()) > 0.0) fail(ErrorKind::Input, "the problem-2 embedding requires D = 0");
  const MatrixXd& B = plant.B();
  Controller k;
  k.A_K = plant.A() - 2.0 * B * B.transpose();
  k.B_K = B;
  k.C_K = B.transpose();
  k.D_K = MatrixXd::Zero(plant.m(), plant.p());
  k.impl_hint = ImplHint{ImplHint::Kind::CopyNetworkPlusResistors, 2.0, {}};
  return k;
}

Controller lct_hinf(const StructuredRealization& plant) {
  require_lct(plant);
  if (max_abs(plant.D()) > 0.0) fail(ErrorKind::Input, "the problem-2 embedding requires D = 0");
  Controller k;
  k.D_K = std::sqrt(2.0) * MatrixXd::Identity(plant.m(), plant.p());
  k.impl_hint = ImplHint{ImplHint::Kind::TerminateResistors, std::sqrt(2.0), {}};
  return k;
}

Controller lct_coprime(const StructuredRealization& plant) {
  require_lct(plant);
  Controller k;
  k.D_K = MatrixXd::Identity(plant.m(), plant.p());
  k.impl_hint = ImplHint{ImplHint::Kind::TerminateResistors, 1.0, {}};
  return k;
}

namespace {

Controller lossy_static(const StructuredRealization& plant, bool rlt) {
  const std::string cls = rlt ? "RLT" : "RCT";
  if (!plant.partition()) fail(ErrorKind::Input, cls + " plant needs a block partition");
  const ValidationReport rep = validate_structure(plant, rlt ? ClassTag::RLT : ClassTag::RCT);
  if (!rep.pass) fail(ErrorKind::Structure, rep.summary());
  const int n = plant.n(), k = plant.partition()->col_split;
  const MatrixXd& A = plant.A();
  const MatrixXd B1 = plant.B().leftCols(k), B2 = plant.B().rightCols(plant.m() - k);
  const MatrixXd D11 = plant.D().topLeftCorner(k, k);
  const MatrixXd D22 = plant.D().bottomRightCorner(plant.m() - k, plant.m() - k);
  const MatrixXd& Bj = rlt ? B2 : B1;
  const MatrixXd& Dj = rlt ? D22 : D11;
  MatrixXd J(n + Bj.cols(), n + Bj.cols());
  J << -A, Bj, Bj.transpose(), Dj;
  const double lmin = min_sym_eig(J);
  if (J.size() > 0 && !(lmin > tol::kPsd * (1.0 + norm2(J))))
    fail(ErrorKind::Structure, cls + ": strict condition " +
                                   (rlt ? std::string("[−A B₂; B₂ᵀ D₂₂] ≻ 0") : std::string("[−A B₁; B₁ᵀ D₁₁] ≻ 0")) +
                                   " violated, minimum eigenvalue " + fmt(lmin));
  Eigen::PartialPivLU<MatrixXd> lu(A);
  if (n > 0 && !(lu.rcond() > 1e-13)) fail(ErrorKind::Structure, cls + ": A is singular");
  MatrixXd Bt(plant.m(), n), Bs(n, plant.m());
  Bt << B1.transpose(), B2.transpose();
  if (rlt)
    Bs << B1, -B2;
  else
    Bs << -B1, B2;
  const MatrixXd DK = n > 0 ? MatrixXd(plant.D().transpose() - Bt * lu.solve(Bs)) : MatrixXd(plant.D().transpose());
  const MatrixXd G0t = (n > 0 ? MatrixXd(plant.D() - plant.C() * lu.solve(plant.B())) : plant.D()).transpose();
  if (max_abs(DK - G0t) > 1e-10 * (1.0 + max_abs(G0t)))
    fail(ErrorKind::Solver, cls + ": static gain does not match G(0)ᵀ");
  Controller c;
  c.D_K = DK;
  return c;
}

}  // namespace

Controller rlt_static(const StructuredRealization& plant) { return lossy_static(plant, true); }
Controller rct_static(const StructuredRealization& plant) { return lossy_static(plant, false); }

double gamma_star(const StructuredRealization& plant) {
  const int n = plant.n(), p = plant.p(), m = plant.m();
  if (n == 0) return 0.0;
  Eigen::PartialPivLU<MatrixXd> lu(plant.A());
  if (!(lu.rcond() > 1e-13)) fail(ErrorKind::Structure, "gamma_star: A is singular");
  if (!is_hurwitz(plant.A())) fail(ErrorKind::Structure, "gamma_star: A is not Hurwitz");
  const MatrixXd Ainv = lu.inverse();
  const MatrixXd G0 = plant.D() - plant.C() * Ainv * plant.B();
  MatrixXd left(p + m, p);
  left << MatrixXd::Identity(p, p), -G0.transpose();
  const MatrixXd mid = (MatrixXd::Identity(p, p) + G0 * G0.transpose()).inverse();
  return norm2(left * mid * plant.C() * Ainv);
}

StructuredRealization close_loop(const GeneralizedPlant& g, const Controller& K) {
  g.check_dims();
  const Eigen::Index n = g.n(), nk = K.n(), nu = g.nu(), ny = g.ny(), nw = g.nw(), nz = g.nz();
  if (K.D_K.rows() != nu || K.D_K.cols() != ny)
    fail(ErrorKind::Input, "controller D_K must be nu x ny");
  const MatrixXd BK = K.B_K.size() ? K.B_K : MatrixXd::Zero(nk, ny);
  const MatrixXd CK = K.C_K.size() ? K.C_K : MatrixXd::Zero(nu, nk);
  if (BK.rows() != nk || BK.cols() != ny || CK.rows() != nu || CK.cols() != nk)
    fail(ErrorKind::Input, "controller dimensions do not match the plant");
  Eigen::PartialPivLU<MatrixXd> lu(MatrixXd::Identity(nu, nu) + K.D_K * g.D22);
  if (nu > 0 && !(lu.rcond() > 1e-13)) fail(ErrorKind::Structure, "ill-posed feedback: I + D_K·D₂₂ is singular");
  // u = Ux x + Uk xk + Uw w
  const MatrixXd Ux = nu ? MatrixXd(lu.solve(-K.D_K * g.C2)) : MatrixXd(0, n);
  const MatrixXd Uk = nu ? MatrixXd(lu.solve(-CK)) : MatrixXd(0, nk);
  const MatrixXd Uw = nu ? MatrixXd(lu.solve(-K.D_K * g.D21)) : MatrixXd(0, nw);
  // y = Yx x + Yk xk + Yw w
  const MatrixXd Yx = g.C2 + g.D22 * Ux, Yk = g.D22 * Uk, Yw = g.D21 + g.D22 * Uw;
  MatrixXd A(n + nk, n + nk), B(n + nk, nw), C(nz, n + nk);
  A.topLeftCorner(n, n) = g.A + g.B2 * Ux;
  A.topRightCorner(n, nk) = g.B2 * Uk;
  A.bottomLeftCorner(nk, n) = BK * Yx;
  if (nk > 0) A.bottomRightCorner(nk, nk) = K.A_K + BK * Yk;
  B.topRows(n) = g.B1 + g.B2 * Uw;
  B.bottomRows(nk) = BK * Yw;
  C.leftCols(n) = g.C1 + g.D12 * Ux;
  C.rightCols(nk) = g.D12 * Uk;
  const MatrixXd D = g.D11 + g.D12 * Uw;
  return StructuredRealization(A, B, C, D);
}

double controller_symmetry_residual(const Controller& K, const Signature& sigma_int, const Signature& sigma_K) {
  const StructuredRealization r = K.realization();
  if (sigma_int.size() != r.n() || sigma_K.size() != r.m() || r.m() != r.p())
    fail(ErrorKind::Input, "controller signature sizes do not match");
  return sym_residual(sigma_int.concat(sigma_K).matrix(), r.M());
}

}  // namespace rlct
