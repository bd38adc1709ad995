#pragma once

#include "rlct/plant.hpp"
#include "rlct/types.hpp"

namespace rlct {

struct RiccatiSolution {
  MatrixXd X;
  double residual = 0.0;              // Frobenius norm of the equation residual
  double closed_loop_abscissa = 0.0;  // max Re eig(A - G X)
};

/// Stabilizing solution of A^T X + X A - X B R^{-1} B^T X + Q = 0.
RiccatiSolution solve_care(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q, const MatrixXd& R);

/// Stabilizing solution of A^T X + X A - X G X + Q = 0 for symmetric (possibly indefinite) G.
RiccatiSolution solve_care_g(const MatrixXd& A, const MatrixXd& G, const MatrixXd& Q);

double care_residual(const MatrixXd& A, const MatrixXd& G, const MatrixXd& Q, const MatrixXd& X);

/// Solves A P + P A^T + W = 0 for Hurwitz A.
MatrixXd solve_lyapunov(const MatrixXd& A, const MatrixXd& W);

double spectral_abscissa(const MatrixXd& A);
bool is_hurwitz(const MatrixXd& A);
bool is_stabilizable(const MatrixXd& A, const MatrixXd& B);
bool is_detectable(const MatrixXd& C, const MatrixXd& A);

double h2_norm(const StructuredRealization& real);
double hinf_norm(const StructuredRealization& real, double tol = 1e-9);

/// Stabilizing X, Y of the two H-infinity Riccati equations at level gamma.
struct HinfRiccatiPair {
  bool solvable = false;
  MatrixXd X, Y;
  double spectral_radius = 0.0;  // rho(X Y)
  std::string reason;
};

HinfRiccatiPair hinf_riccati(const GeneralizedPlant& g, double gamma);
bool hinf_solvable(const GeneralizedPlant& g, double gamma);

}  // namespace rlct
