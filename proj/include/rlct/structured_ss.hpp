#pragma once

#include <optional>
#include <utility>

#include "rlct/types.hpp"

namespace rlct {

/// Checks the zero pattern and definiteness conditions of a network class.
/// Lossy classes and the port-partitioned lossless classes need a block
/// partition; LCT without one falls back to A = -A^T, C = B^T, D = -D^T.
ValidationReport validate_structure(const StructuredRealization& real, ClassTag tag);

/// Checks Sigma*M = M^T*Sigma and M + M^T >= 0 for M = [-A -B; C D].
ValidationReport check_signature_symmetry(const StructuredRealization& real, const Signature& sigma_int,
                                          const Signature& sigma_ext);

/// Solves sigma_i M_ij = sigma_j M_ji by union-find over sign-coupled pairs.
std::optional<std::pair<Signature, Signature>> infer_signatures(const StructuredRealization& real);

/// C (sI - A)^{-1} B + D.
MatrixXcd transfer_eval(const StructuredRealization& real, Complex s);

/// Orthonormal basis of the controllable subspace of (A, B).
MatrixXd controllable_basis(const MatrixXd& A, const MatrixXd& B);

int numerical_rank(const MatrixXd& M);

StructuredRealization reduce_to_controllable(const StructuredRealization& real);

StructuredRealization build_lct(const MatrixXd& A12, const MatrixXd& B12, const MatrixXd& B21,
                                const MatrixXd& D12 = MatrixXd());
StructuredRealization build_lt(const MatrixXd& B1, const MatrixXd& D12 = MatrixXd());
StructuredRealization build_ct(const MatrixXd& B2, const MatrixXd& D12 = MatrixXd());
StructuredRealization build_rlt(const MatrixXd& A, const MatrixXd& B1, const MatrixXd& B2,
                                const MatrixXd& D11, const MatrixXd& D12, const MatrixXd& D22);
StructuredRealization build_rct(const MatrixXd& A, const MatrixXd& B1, const MatrixXd& B2,
                                const MatrixXd& D11, const MatrixXd& D12, const MatrixXd& D22);

}  // namespace rlct
