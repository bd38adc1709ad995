#include "rlct/plant.hpp"

#include "rlct/riccati.hpp"

namespace rlct {

void GeneralizedPlant::check_dims() const {
  const auto n = A.rows();
  auto need = [](bool ok, const char* what) {
    if (!ok) fail(ErrorKind::Input, std::string("generalized plant: ") + what);
  };
  need(A.cols() == n, "A must be square");
  need(B1.rows() == n && B2.rows() == n, "B1, B2 must have n rows");
  need(C1.cols() == n && C2.cols() == n, "C1, C2 must have n columns");
  need(D11.rows() == C1.rows() && D11.cols() == B1.cols(), "D11 must be nz x nw");
  need(D12.rows() == C1.rows() && D12.cols() == B2.cols(), "D12 must be nz x nu");
  need(D21.rows() == C2.rows() && D21.cols() == B1.cols(), "D21 must be ny x nw");
  need(D22.rows() == C2.rows() && D22.cols() == B2.cols(), "D22 must be ny x nu");
  if (sigma_int) need(sigma_int->size() == n, "sigma_int length");
  if (sigma_ext) need(sigma_ext->size() == nw() && nw() == nz(), "sigma_ext length");
  if (sigma_K) need(sigma_K->size() == nu() && nu() == ny(), "sigma_K length");
}

StructuredRealization GeneralizedPlant::realization() const {
  check_dims();
  const int nin = nw() + nu(), nout = nz() + ny();
  MatrixXd B(n(), nin), C(nout, n()), D(nout, nin);
  B << B1, B2;
  C << C1, C2;
  D << D11, D12, D21, D22;
  return StructuredRealization(A, B, C, D);
}

double GeneralizedPlant::symmetry_residual() const {
  if (!has_signatures()) fail(ErrorKind::Input, "plant signatures are not set");
  const StructuredRealization r = realization();
  const MatrixXd S = sigma_int->concat(*sigma_ext).concat(*sigma_K).matrix();
  return sym_residual(S, r.M());
}

std::string regularity_violation(const GeneralizedPlant& g) {
  g.check_dims();
  const double eps = 1e-9;
  auto max_abs = [](const MatrixXd& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); };
  if (!is_stabilizable(g.A, g.B1)) return "A.1: (A, B₁) is not stabilisable";
  if (!is_detectable(g.C1, g.A)) return "A.1: (C₁, A) is not detectable";
  if (!is_stabilizable(g.A, g.B2)) return "(A, B₂) is not stabilisable";
  if (!is_detectable(g.C2, g.A)) return "(C₂, A) is not detectable";
  const MatrixXd I_u = MatrixXd::Identity(g.nu(), g.nu());
  if (max_abs(g.D12.transpose() * g.C1) > eps || max_abs(g.D12.transpose() * g.D12 - I_u) > eps)
    return "A.2: D₁₂ᵀ[C₁ D₁₂] ≠ [0 I]";
  const MatrixXd I_y = MatrixXd::Identity(g.ny(), g.ny());
  if (max_abs(g.B1 * g.D21.transpose()) > eps || max_abs(g.D21 * g.D21.transpose() - I_y) > eps)
    return "A.2 (dual): [B₁; D₂₁]D₂₁ᵀ ≠ [0; I]";
  if (max_abs(g.D11) > eps) return "A.3: D₁₁ ≠ 0";
  if (max_abs(g.D22) > eps) return "D₂₂ ≠ 0";
  return {};
}

void require_regular(const GeneralizedPlant& g) {
  const std::string v = regularity_violation(g);
  if (!v.empty()) fail(ErrorKind::Structure, "regularity assumption violated: " + v);
}

}  // namespace rlct
