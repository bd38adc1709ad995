#include "lapack.hpp"

#include <lapacke.h>

#include <cmath>
#include <string>

namespace rlct::lapack {

namespace {

thread_local const std::function<bool(double, double)>* g_keep = nullptr;
thread_local double g_ratio = 0.0;

lapack_logical keep_trampoline(const double* re, const double* im) { return (*g_keep)(*re, *im) ? 1 : 0; }

lapack_logical finite_trampoline(const double* ar, const double* ai, const double* beta) {
  return std::abs(*beta) > g_ratio * std::hypot(*ar, *ai) ? 1 : 0;
}

void check_info(lapack_int info, const char* routine) {
  if (info != 0) fail(ErrorKind::Solver, std::string(routine) + " failed with info = " + std::to_string(info));
}

}  // namespace

RealSchur ordered_schur(const MatrixXd& A, const std::function<bool(double, double)>& keep) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  RealSchur out;
  out.T = A;
  out.U.resize(n, n);
  out.wr.resize(n);
  out.wi.resize(n);
  if (n == 0) return out;
  lapack_int sdim = 0;
  g_keep = &keep;
  const lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'S', keep_trampoline, n, out.T.data(), n, &sdim,
                                        out.wr.data(), out.wi.data(), out.U.data(), n);
  g_keep = nullptr;
  // info = n+2 signals reordering roundoff changed a selection; the sdim count is still reported.
  if (info != 0 && info != n + 2) check_info(info, "dgees");
  out.selected = sdim;
  return out;
}

MatrixXd triangular_sylvester(const MatrixXd& T1, const MatrixXd& T2, const MatrixXd& C, bool transpose_t2,
                              int sign) {
  MatrixXd X = C;
  const lapack_int m = static_cast<lapack_int>(T1.rows()), n = static_cast<lapack_int>(T2.rows());
  if (m == 0 || n == 0) return X;
  double scale = 1.0;
  const lapack_int info = LAPACKE_dtrsyl(LAPACK_COL_MAJOR, 'N', transpose_t2 ? 'T' : 'N', sign, m, n, T1.data(),
                                         m, T2.data(), n, X.data(), m, &scale);
  if (info < 0) check_info(info, "dtrsyl");
  if (info == 1) fail(ErrorKind::Solver, "Sylvester equation nearly singular (common eigenvalues)");
  return X / scale;
}

GeneralizedSchur ordered_qz_finite_first(const MatrixXd& A, const MatrixXd& E, double ratio) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  GeneralizedSchur out;
  out.S = A;
  out.T = E;
  out.Q.resize(n, n);
  out.Z.resize(n, n);
  if (n == 0) return out;
  VectorXd ar(n), ai(n), beta(n);
  lapack_int sdim = 0;
  g_ratio = ratio;
  const lapack_int info =
      LAPACKE_dgges(LAPACK_COL_MAJOR, 'V', 'V', 'S', finite_trampoline, n, out.S.data(), n, out.T.data(), n,
                    &sdim, ar.data(), ai.data(), beta.data(), out.Q.data(), n, out.Z.data(), n);
  if (info != 0 && info != n + 3) check_info(info, "dgges");
  out.selected = sdim;
  return out;
}

void generalized_sylvester(const MatrixXd& A, const MatrixXd& B, const MatrixXd& C, const MatrixXd& D,
                           const MatrixXd& E, const MatrixXd& F, MatrixXd& R, MatrixXd& L) {
  const lapack_int m = static_cast<lapack_int>(A.rows()), n = static_cast<lapack_int>(B.rows());
  R = C;
  L = F;
  if (m == 0 || n == 0) return;
  double scale = 1.0, dif = 0.0;
  MatrixXd a = A, b = B, d = D, e = E;
  const lapack_int info = LAPACKE_dtgsyl(LAPACK_COL_MAJOR, 'N', 0, m, n, a.data(), m, b.data(), n, R.data(), m,
                                         d.data(), m, e.data(), n, L.data(), m, &scale, &dif);
  if (info < 0) check_info(info, "dtgsyl");
  if (info > 0) fail(ErrorKind::Solver, "generalized Sylvester equation singular (shared eigenvalues)");
  R /= scale;
  L /= scale;
}

}  // namespace rlct::lapack
