#pragma once

#include "rlct/simulate.hpp"
#include "rlct/types.hpp"

namespace rlct {

/// Data describing internal element currents and voltages alongside a realization.
struct InternalData {
  MatrixXd theta;  // n_dag x n_dag
  MatrixXd gamma;  // n_int x n_dag
  MatrixXd phi;    // n_int x n_int
  Signature sigma_int_dagger, sigma_int, sigma_ext;
  int n_C = 0, n_L = 0;
  MatrixXd P;  // n x n permutation, n = n_dag + n_int + n_ext

  int n_dag() const { return static_cast<int>(theta.rows()); }
  int n_int() const { return static_cast<int>(phi.rows()); }
  int n_ext() const { return sigma_ext.size(); }
  int n() const { return n_dag() + n_int() + n_ext(); }
};

/// Orthogonal eigenvectors of symmetric M that commute with the signature.
MatrixXd commuting_eigvecs(const MatrixXd& M, const Signature& sigma);

/// Each failed condition is listed separately in the report.
ValidationReport validate_internal_data(const StructuredRealization& real, const InternalData& data);

/// The 2n x (n_int + m + p) map from (x, u, y) to (i, v).
MatrixXd build_F(const StructuredRealization& real, const InternalData& data);

/// Element law residual along a simulated trajectory, using fourth-order central differences.
/// Returns max |i - c dv/dt| over capacitors and |v - l di/dt| over inductors, relative to 1 + max |(i, v)|.
double element_law_residual(const StructuredRealization& real, const InternalData& data, const SimulationResult& sim);

}  // namespace rlct
