#pragma once

#include <optional>

#include "rlct/types.hpp"

namespace rlct {

/// Generalized plant with exogenous input w, control u, regulated output z and measurement y.
struct GeneralizedPlant {
  MatrixXd A, B1, B2, C1, C2, D11, D12, D21, D22;
  std::optional<Signature> sigma_int, sigma_ext, sigma_K;

  int n() const { return static_cast<int>(A.rows()); }
  int nw() const { return static_cast<int>(B1.cols()); }
  int nu() const { return static_cast<int>(B2.cols()); }
  int nz() const { return static_cast<int>(C1.rows()); }
  int ny() const { return static_cast<int>(C2.rows()); }

  /// Throws on inconsistent block dimensions.
  void check_dims() const;
  /// The realization from [w; u] to [z; y].
  StructuredRealization realization() const;
  bool has_signatures() const { return sigma_int && sigma_ext && sigma_K; }
  /// max |S*M - M^T*S| for M = [-A -B1 -B2; C1 D11 D12; C2 D21 D22].
  double symmetry_residual() const;
};

/// Names the first violated regularity assumption, or returns an empty string.
std::string regularity_violation(const GeneralizedPlant& g);

/// Throws ErrorKind::Structure when a regularity assumption fails.
void require_regular(const GeneralizedPlant& g);

}  // namespace rlct
