#include "rlct/internal_map.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "rlct/structured_ss.hpp"

namespace rlct {

namespace {

double max_abs(const MatrixXd& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

/// Symmetric square root and inverse square root of a positive definite matrix.
std::pair<MatrixXd, MatrixXd> sqrt_pd(const MatrixXd& M, const std::string& what) {
  if (M.size() == 0) return {M, M};
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (M + M.transpose()));
  const VectorXd lam = es.eigenvalues();
  if (!(lam.minCoeff() > 0.0)) {
    std::ostringstream os;
    os << what << " is not positive definite (minimum eigenvalue " << lam.minCoeff() << ")";
    fail(ErrorKind::Structure, os.str());
  }
  const MatrixXd& V = es.eigenvectors();
  return {V * lam.cwiseSqrt().asDiagonal() * V.transpose(),
          V * lam.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose()};
}

bool is_permutation(const MatrixXd& P) {
  if (P.rows() != P.cols()) return false;
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    int ones_r = 0, ones_c = 0;
    for (Eigen::Index j = 0; j < P.cols(); ++j) {
      if (P(i, j) != 0.0 && P(i, j) != 1.0) return false;
      ones_r += P(i, j) == 1.0;
      ones_c += P(j, i) == 1.0;
    }
    if (ones_r != 1 || ones_c != 1) return false;
  }
  return true;
}

void check_dims(const StructuredRealization& real, const InternalData& d) {
  auto need = [](bool ok, const char* what) {
    if (!ok) fail(ErrorKind::Input, std::string("internal data: ") + what);
  };
  need(d.theta.rows() == d.theta.cols(), "theta must be square");
  need(d.phi.rows() == d.phi.cols(), "phi must be square");
  need(d.gamma.rows() == d.phi.rows() && d.gamma.cols() == d.theta.rows(), "gamma must be n_int x n_dag");
  need(d.sigma_int_dagger.size() == d.n_dag(), "sigma_int_dagger length");
  need(d.sigma_int.size() == d.n_int(), "sigma_int length");
  need(real.n() == d.n_int(), "state dimension must equal n_int");
  need(real.m() == d.n_ext() && real.p() == d.n_ext(), "port count must equal the sigma_ext length");
  need(d.P.rows() == d.n() && d.P.cols() == d.n(), "P must be n x n");
}

MatrixXd internal_gram(const InternalData& d) {
  const int a = d.n_dag(), b = d.n_int();
  MatrixXd G(a + b, a + b);
  G.topLeftCorner(a, a) = d.theta;
  G.topRightCorner(a, b) = d.gamma.transpose();
  G.bottomLeftCorner(b, a) = d.gamma;
  G.bottomRightCorner(b, b) = d.phi;
  return G;
}

}  // namespace

MatrixXd commuting_eigvecs(const MatrixXd& M, const Signature& sigma) {
  const Eigen::Index n = M.rows();
  if (M.cols() != n || sigma.size() != n) fail(ErrorKind::Input, "commuting_eigvecs: dimension mismatch");
  const MatrixXd S = sigma.matrix();
  const double r = max_abs(S * M - M * S);
  if (!(r <= tol::kStruct * (1.0 + max_abs(M)))) {
    std::ostringstream os;
    os << "matrix does not commute with the signature (residual " << r << ")";
    fail(ErrorKind::Structure, os.str());
  }
  MatrixXd Q = MatrixXd::Zero(n, n);
  for (int s : {1, -1}) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < n; ++i)
      if (sigma[static_cast<int>(i)] == s) idx.push_back(i);
    const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
    if (k == 0) continue;
    MatrixXd block(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) block(i, j) = 0.5 * (M(idx[i], idx[j]) + M(idx[j], idx[i]));
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(block);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) Q(idx[i], idx[j]) = es.eigenvectors()(i, j);
  }
  return Q;
}

ValidationReport validate_internal_data(const StructuredRealization& real, const InternalData& d) {
  check_dims(real, d);
  ValidationReport rep;
  const ValidationReport a = check_signature_symmetry(real, d.sigma_int, d.sigma_ext);
  for (const auto& v : a.violations) rep.require(false, "(a) " + v, a.worst_residual);
  if (a.pass) rep.require(true, "(a)", a.worst_residual);

  rep.require(is_permutation(d.P), "(b) P is a permutation matrix", 0.0);

  const int counts = d.n_dag() + d.n_int();
  rep.require(counts == d.n_C + d.n_L, "(c) n_int† + n_int = n_C + n_L", std::abs(counts - d.n_C - d.n_L));
  const int tr = d.sigma_int_dagger.trace() + d.sigma_int.trace();
  rep.require(tr == d.n_C - d.n_L, "(c) trace(Σ_int†) + trace(Σ_int) = n_C − n_L", std::abs(tr - (d.n_C - d.n_L)));

  const MatrixXd G = internal_gram(d);
  const MatrixXd S = d.sigma_int_dagger.concat(d.sigma_int).matrix();
  const double rs = sym_residual(S, G);
  rep.require(rs < tol::kStruct, "(d) Σ·[Θ Γᵀ; Γ Φ] symmetric", rs);
  if (G.size() > 0) {
    const double lmin = min_sym_eig(G);
    const double norm = Eigen::SelfAdjointEigenSolver<MatrixXd>(0.5 * (G + G.transpose()), Eigen::EigenvaluesOnly)
                            .eigenvalues()
                            .cwiseAbs()
                            .maxCoeff();
    rep.require(lmin > tol::kPsd * (1.0 + norm), "(d) [Θ Γᵀ; Γ Φ] ≻ 0", lmin < 0 ? -lmin : 0.0);
  }
  return rep;
}

MatrixXd build_F(const StructuredRealization& real, const InternalData& d) {
  const ValidationReport rep = validate_internal_data(real, d);
  if (!rep.pass) fail(ErrorKind::Structure, "internal data invalid: " + rep.summary());
  const int a = d.n_dag(), b = d.n_int(), m = d.n_ext(), n = d.n();
  const MatrixXd &A = real.A(), &B = real.B();
  const MatrixXd Q1 = commuting_eigvecs(d.theta, d.sigma_int_dagger);
  const MatrixXd Q2 = commuting_eigvecs(d.phi, d.sigma_int);
  const auto [phi_h, phi_mh] = sqrt_pd(d.phi, "Φ");

  MatrixXd schur = d.phi;
  MatrixXd theta_inv = MatrixXd(a, a);
  if (a > 0) {
    theta_inv = d.theta.llt().solve(MatrixXd::Identity(a, a));
    schur -= d.gamma * theta_inv * d.gamma.transpose();
  }
  const MatrixXd Delta = sqrt_pd(schur, "Φ − ΓΘ⁻¹Γᵀ").first;

  const int cols = b + m + m;
  MatrixXd e = MatrixXd::Zero(n, cols), h = MatrixXd::Zero(n, cols);
  // Rows for the Theta block.
  if (a > 0) {
    const MatrixXd Et = theta_inv * d.gamma.transpose() * phi_mh;  // E^T with E = Phi^{-1/2} Gamma Theta^{-1}
    e.block(0, 0, a, b) = -Q1.transpose() * Et;
    const MatrixXd Gt = -Q1.transpose() * d.gamma.transpose() * phi_mh;
    h.block(0, 0, a, b) = Gt * A;
    h.block(0, b, a, m) = Gt * B;
  }
  // Rows for the Phi block.
  const MatrixXd W = Q2.transpose() * phi_h * Delta * phi_mh;
  e.block(a, 0, b, b) = W * A;
  e.block(a, b, b, m) = W * B;
  h.block(a, 0, b, b) = Q2.transpose() * phi_mh * Delta * phi_mh;
  // Port rows: e carries y, h carries u.
  e.block(a + b, b + m, m, m).setIdentity();
  h.block(a + b, b, m, m).setIdentity();

  VectorXd sig(n);
  for (int i = 0; i < a; ++i) sig(i) = -d.sigma_int_dagger[i];
  for (int i = 0; i < b; ++i) sig(a + i) = d.sigma_int[i];
  for (int i = 0; i < m; ++i) sig(a + b + i) = d.sigma_ext[i];
  const VectorXd plus = 0.5 * (VectorXd::Ones(n) + sig), minus = 0.5 * (VectorXd::Ones(n) - sig);
  MatrixXd F(2 * n, cols);
  F.topRows(n) = d.P * (plus.asDiagonal() * e + minus.asDiagonal() * h);
  F.bottomRows(n) = d.P * (minus.asDiagonal() * e + plus.asDiagonal() * h);
  return F;
}

double element_law_residual(const StructuredRealization& real, const InternalData& d, const SimulationResult& sim) {
  const MatrixXd F = build_F(real, d);
  const int a = d.n_dag(), b = d.n_int(), n = d.n();
  const long T = static_cast<long>(sim.times.size());
  if (T < 5) fail(ErrorKind::Input, "element law check needs at least 5 samples");
  const double h = sim.times[1] - sim.times[0];
  for (long k = 2; k < T; ++k)
    if (std::abs(sim.times[k] - sim.times[k - 1] - h) > 1e-9 * h)
      fail(ErrorKind::Input, "element law check needs a uniform time grid");

  MatrixXd xuy(F.cols(), T);
  xuy << sim.states, sim.inputs, sim.outputs;
  const MatrixXd iv = F * xuy;
  const MatrixXd i_int = d.P.transpose() * iv.topRows(n);
  const MatrixXd v_int = d.P.transpose() * iv.bottomRows(n);

  VectorXd values(a + b);
  std::vector<int> sign(a + b);
  if (a > 0) {
    const MatrixXd Q1 = commuting_eigvecs(d.theta, d.sigma_int_dagger);
    values.head(a) = (Q1.transpose() * d.theta * Q1).diagonal();
    for (int k = 0; k < a; ++k) sign[k] = d.sigma_int_dagger[k];
  }
  const MatrixXd Q2 = commuting_eigvecs(d.phi, d.sigma_int);
  values.tail(b) = (Q2.transpose() * d.phi * Q2).diagonal();
  for (int k = 0; k < b; ++k) sign[a + k] = d.sigma_int[k];

  const double scale = 1.0 + std::max(max_abs(i_int), max_abs(v_int));
  double worst = 0.0;
  for (int k = 0; k < a + b; ++k) {
    const bool capacitor = sign[k] > 0;
    const auto& diffd = capacitor ? v_int : i_int;  // differentiated quantity
    const auto& other = capacitor ? i_int : v_int;
    for (long t = 2; t + 2 < T; ++t) {
      const double deriv = (diffd(k, t - 2) - 8.0 * diffd(k, t - 1) + 8.0 * diffd(k, t + 1) - diffd(k, t + 2)) / (12.0 * h);
      worst = std::max(worst, std::abs(other(k, t) - values(k) * deriv));
    }
  }
  return worst / scale;
}

}  // namespace rlct
