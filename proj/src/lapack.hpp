#pragma once

#include <functional>

#include "rlct/types.hpp"

namespace rlct::lapack {

struct RealSchur {
  MatrixXd T;  // quasi upper triangular
  MatrixXd U;  // orthogonal, A = U T U^T
  VectorXd wr, wi;
  int selected = 0;  // eigenvalues moved to the leading block
};

/// Real Schur form with eigenvalues satisfying `keep(re, im)` ordered first.
RealSchur ordered_schur(const MatrixXd& A, const std::function<bool(double, double)>& keep);

/// Solves op(T1) X + sign * X op(T2) = C for quasi-triangular T1, T2.
MatrixXd triangular_sylvester(const MatrixXd& T1, const MatrixXd& T2, const MatrixXd& C, bool transpose_t2,
                              int sign);

struct GeneralizedSchur {
  MatrixXd S, T;  // Q^T A Z = S, Q^T E Z = T
  MatrixXd Q, Z;
  int selected = 0;
};

/// QZ decomposition of the pencil (A, E) with finite eigenvalues (|beta| > ratio*|alpha|) first.
GeneralizedSchur ordered_qz_finite_first(const MatrixXd& A, const MatrixXd& E, double ratio);

/// Solves A R - L B = C, D R - L E = F for (R, L) with (A, D), (B, E) in generalized Schur form.
void generalized_sylvester(const MatrixXd& A, const MatrixXd& B, const MatrixXd& C, const MatrixXd& D,
                           const MatrixXd& E, const MatrixXd& F, MatrixXd& R, MatrixXd& L);

}  // namespace rlct::lapack
