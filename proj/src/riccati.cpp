#include "rlct/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "lapack.hpp"
#include "rlct/structured_ss.hpp"

namespace rlct {

namespace {

double norm2(const MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(M);
  return svd.singularValues()(0);
}

double sigma_max(const MatrixXcd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXcd> svd(M);
  return svd.singularValues()(0);
}

MatrixXd sym(const MatrixXd& X) { return 0.5 * (X + X.transpose()); }

// Schur-based stabilizing solution without refinement.
MatrixXd care_schur(const MatrixXd& A, const MatrixXd& G, const MatrixXd& Q) {
  const Eigen::Index n = A.rows();
  MatrixXd H(2 * n, 2 * n);
  H << A, -G, -Q, -A.transpose();
  const double hn = norm2(H);
  const double axis_tol = tol::kImagAxis * std::max(hn, 1e-300);
  auto ev = H.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i).real()) <= axis_tol) {
      std::ostringstream os;
      os << "no stabilizing solution: Hamiltonian eigenvalue " << ev(i).real() << (ev(i).imag() < 0 ? "-" : "+")
         << std::abs(ev(i).imag()) << "j lies on the imaginary axis";
      fail(ErrorKind::Solver, os.str());
    }
  }
  const auto schur = lapack::ordered_schur(H, [](double re, double) { return re < 0.0; });
  if (schur.selected != n)
    fail(ErrorKind::Solver, "no stabilizing solution: stable invariant subspace has wrong dimension");
  const MatrixXd U11 = schur.U.topLeftCorner(n, n);
  const MatrixXd U21 = schur.U.bottomLeftCorner(n, n);
  Eigen::PartialPivLU<MatrixXd> lu(U11.transpose());
  if (lu.rcond() < 1e-13)
    fail(ErrorKind::Solver, "stable invariant subspace basis is ill-conditioned (rcond " +
                                std::to_string(lu.rcond()) + ")");
  // X = U21 U11^{-1}
  const MatrixXd X = lu.solve(U21.transpose()).transpose();
  return sym(X);
}

}  // namespace

double care_residual(const MatrixXd& A, const MatrixXd& G, const MatrixXd& Q, const MatrixXd& X) {
  if (A.size() == 0) return 0.0;
  return (A.transpose() * X + X * A - X * G * X + Q).norm();
}

double spectral_abscissa(const MatrixXd& A) {
  if (A.size() == 0) return -std::numeric_limits<double>::infinity();
  return A.eigenvalues().real().maxCoeff();
}

bool is_hurwitz(const MatrixXd& A) { return spectral_abscissa(A) < 0.0; }

RiccatiSolution solve_care_g(const MatrixXd& A, const MatrixXd& G, const MatrixXd& Q) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || G.rows() != n || G.cols() != n || Q.rows() != n || Q.cols() != n)
    fail(ErrorKind::Input, "Riccati data dimensions are inconsistent");
  RiccatiSolution sol;
  if (n == 0) {
    sol.X = MatrixXd(0, 0);
    sol.closed_loop_abscissa = -std::numeric_limits<double>::infinity();
    return sol;
  }
  MatrixXd X = care_schur(A, G, Q);
  double res = care_residual(A, G, Q, X);
  // Newton refinement: (A - G X)^T Xn + Xn (A - G X) + X G X + Q = 0.
  for (int it = 0; it < 3; ++it) {
    const MatrixXd Ac = A - G * X;
    if (!is_hurwitz(Ac)) break;
    MatrixXd Xn;
    try {
      Xn = sym(solve_lyapunov(Ac.transpose(), X * G * X + Q));
    } catch (const Error&) {
      break;
    }
    const double rn = care_residual(A, G, Q, Xn);
    if (!(rn < res) || !is_hurwitz(A - G * Xn)) break;
    X = Xn;
    res = rn;
  }
  sol.X = X;
  sol.residual = res;
  sol.closed_loop_abscissa = spectral_abscissa(A - G * X);
  if (!(sol.closed_loop_abscissa < 0.0))
    fail(ErrorKind::Solver, "Riccati solution is not stabilizing");
  return sol;
}

RiccatiSolution solve_care(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q, const MatrixXd& R) {
  if (R.rows() != B.cols() || R.cols() != B.cols()) fail(ErrorKind::Input, "R must be m x m");
  Eigen::LLT<MatrixXd> llt(sym(R));
  if (llt.info() != Eigen::Success) fail(ErrorKind::Input, "R must be positive definite");
  const MatrixXd G = sym(B * llt.solve(B.transpose()));
  return solve_care_g(A, G, Q);
}

MatrixXd solve_lyapunov(const MatrixXd& A, const MatrixXd& W) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || W.rows() != n || W.cols() != n) fail(ErrorKind::Input, "Lyapunov data dimensions");
  if (n == 0) return MatrixXd(0, 0);
  if (!is_hurwitz(A)) fail(ErrorKind::Solver, "Lyapunov equation requires a Hurwitz matrix");
  const auto schur = lapack::ordered_schur(A, [](double, double) { return false; });
  const MatrixXd& U = schur.U;
  const MatrixXd Wt = -(U.transpose() * W * U);
  const MatrixXd Pt = lapack::triangular_sylvester(schur.T, schur.T, Wt, true, 1);
  return sym(U * Pt * U.transpose());
}

namespace {

bool pbh_full_rank(const MatrixXd& A, const MatrixXd& B) {
  const Eigen::Index n = A.rows();
  if (n == 0) return true;
  const auto ev = A.eigenvalues();
  const double scale = 1.0 + std::max(norm2(A), norm2(B));
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i).real() < -1e-9 * scale) continue;
    MatrixXcd P(n, n + B.cols());
    P.leftCols(n) = ev(i) * MatrixXcd::Identity(n, n) - A.cast<Complex>();
    P.rightCols(B.cols()) = B.cast<Complex>();
    Eigen::JacobiSVD<MatrixXcd> svd(P);
    const auto& sv = svd.singularValues();
    if (sv.size() < n || sv(n - 1) <= 1e-9 * scale) return false;
  }
  return true;
}

}  // namespace

bool is_stabilizable(const MatrixXd& A, const MatrixXd& B) { return pbh_full_rank(A, B); }
bool is_detectable(const MatrixXd& C, const MatrixXd& A) {
  return pbh_full_rank(A.transpose(), C.transpose());
}

double h2_norm(const StructuredRealization& real) {
  if (real.D().size() > 0 && real.D().cwiseAbs().maxCoeff() > tol::kStruct)
    fail(ErrorKind::Input, "H2 norm is infinite: nonzero feedthrough D");
  if (real.n() == 0) return 0.0;
  if (!is_hurwitz(real.A())) fail(ErrorKind::Input, "H2 norm requires a Hurwitz state matrix");
  const MatrixXd P = solve_lyapunov(real.A(), real.B() * real.B().transpose());
  const double t = (real.C() * P * real.C().transpose()).trace();
  return std::sqrt(std::max(t, 0.0));
}

namespace {

double gain_at(const StructuredRealization& r, double w) { return sigma_max(transfer_eval(r, Complex(0.0, w))); }

// Hamiltonian whose imaginary-axis eigenvalues mark frequencies where sigma_max(G(jw)) = gamma.
MatrixXd bounded_real_hamiltonian(const StructuredRealization& r, double gamma) {
  const MatrixXd &A = r.A(), &B = r.B(), &C = r.C(), &D = r.D();
  const Eigen::Index n = A.rows(), m = B.cols(), p = C.rows();
  const MatrixXd R = gamma * gamma * MatrixXd::Identity(m, m) - D.transpose() * D;
  Eigen::LLT<MatrixXd> llt(R);
  const MatrixXd Ri = llt.solve(MatrixXd::Identity(m, m));
  const MatrixXd Ah = A + B * Ri * D.transpose() * C;
  const MatrixXd Cq = C.transpose() * (MatrixXd::Identity(p, p) + D * Ri * D.transpose()) * C;
  MatrixXd H(2 * n, 2 * n);
  H << Ah, B * Ri * B.transpose(), -Cq, -Ah.transpose();
  return H;
}

// Returns a confirmed crossing frequency gain, or a negative value when gamma is an upper bound.
double crossing_gain(const StructuredRealization& r, double gamma) {
  const MatrixXd H = bounded_real_hamiltonian(r, gamma);
  const double axis_tol = tol::kImagAxis * std::max(norm2(H), 1e-300);
  const auto ev = H.eigenvalues();
  double best = -1.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i).real()) > axis_tol) continue;
    const double g = gain_at(r, std::abs(ev(i).imag()));
    if (g >= gamma * (1.0 - 1e-8)) best = std::max(best, g);
  }
  return best;
}

}  // namespace

double hinf_norm(const StructuredRealization& real, double tol) {
  const double dnorm = norm2(real.D());
  if (real.n() == 0) return dnorm;
  if (!is_hurwitz(real.A())) fail(ErrorKind::Input, "H-infinity norm requires a Hurwitz state matrix");
  if (real.B().size() == 0 || real.C().size() == 0) return dnorm;

  // Frequency grid from the spectrum plus a log sweep.
  const auto ev = real.A().eigenvalues();
  double wmin = std::numeric_limits<double>::infinity(), wmax = 0.0;
  std::vector<double> grid{0.0};
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double mag = std::abs(ev(i));
    grid.push_back(mag);
    grid.push_back(std::abs(ev(i).imag()));
    if (mag > 0) {
      wmin = std::min(wmin, mag);
      wmax = std::max(wmax, mag);
    }
  }
  if (!std::isfinite(wmin)) wmin = wmax = 1.0;
  const double lo_w = std::log10(wmin) - 2.0, hi_w = std::log10(wmax) + 2.0;
  for (int k = 0; k < 20; ++k) grid.push_back(std::pow(10.0, lo_w + (hi_w - lo_w) * k / 19.0));

  double lo = dnorm;
  for (double w : grid) lo = std::max(lo, gain_at(real, w));
  if (lo == 0.0) return 0.0;

  double hi = 2.0 * lo;
  for (int it = 0; it < 200; ++it) {
    const double g = crossing_gain(real, hi);
    if (g < 0) break;
    lo = std::max(lo, g);
    hi = 2.0 * std::max(hi, g);
  }
  for (int it = 0; it < 200 && hi - lo > tol * lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = crossing_gain(real, mid);
    if (g < 0) {
      hi = mid;
    } else {
      lo = std::max(mid, std::min(g, hi));
    }
  }
  return 0.5 * (lo + hi);
}

HinfRiccatiPair hinf_riccati(const GeneralizedPlant& g, double gamma) {
  HinfRiccatiPair out;
  if (!(gamma > 0)) fail(ErrorKind::Input, "gamma must be positive");
  require_regular(g);
  const double gi2 = 1.0 / (gamma * gamma);
  const MatrixXd Gx = g.B2 * g.B2.transpose() - gi2 * g.B1 * g.B1.transpose();
  const MatrixXd Gy = g.C2.transpose() * g.C2 - gi2 * g.C1.transpose() * g.C1;
  try {
    out.X = solve_care_g(g.A, Gx, g.C1.transpose() * g.C1).X;
    out.Y = solve_care_g(g.A.transpose(), Gy, g.B1 * g.B1.transpose()).X;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Solver) throw;
    out.reason = e.what();
    return out;
  }
  auto min_eig = [](const MatrixXd& M) {
    if (M.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(M, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  };
  const double tx = -1e-9 * (1.0 + norm2(out.X)), ty = -1e-9 * (1.0 + norm2(out.Y));
  if (min_eig(out.X) < tx) {
    out.reason = "X is not positive semidefinite";
    return out;
  }
  if (min_eig(out.Y) < ty) {
    out.reason = "Y is not positive semidefinite";
    return out;
  }
  out.spectral_radius = g.n() == 0 ? 0.0 : (out.X * out.Y).eigenvalues().cwiseAbs().maxCoeff();
  if (out.spectral_radius >= gamma * gamma) {
    out.reason = "spectral radius of XY is not below gamma squared";
    return out;
  }
  out.solvable = true;
  return out;
}

bool hinf_solvable(const GeneralizedPlant& g, double gamma) { return hinf_riccati(g, gamma).solvable; }

}  // namespace rlct
