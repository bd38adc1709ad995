#include "rlct/types.hpp"

#include <sstream>

namespace rlct {

ParseError::ParseError(int line, int column, const std::string& msg)
    : Error(ErrorKind::Parse,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

Signature::Signature(std::vector<int> entries) : e_(std::move(entries)) {
  for (int v : e_) {
    if (v != 1 && v != -1) fail(ErrorKind::Input, "signature entries must be +1 or -1");
  }
}

Signature Signature::identity(int n) { return Signature(std::vector<int>(n, 1)); }

Signature Signature::blocks(int n_plus, int n_minus) {
  std::vector<int> e(n_plus, 1);
  e.insert(e.end(), n_minus, -1);
  return Signature(std::move(e));
}

MatrixXd Signature::matrix() const { return diagonal().asDiagonal(); }

VectorXd Signature::diagonal() const {
  VectorXd d(size());
  for (int i = 0; i < size(); ++i) d(i) = e_[i];
  return d;
}

int Signature::trace() const {
  int t = 0;
  for (int v : e_) t += v;
  return t;
}

Signature Signature::concat(const Signature& other) const {
  std::vector<int> e = e_;
  e.insert(e.end(), other.e_.begin(), other.e_.end());
  return Signature(std::move(e));
}

Signature Signature::negated() const {
  std::vector<int> e = e_;
  for (int& v : e) v = -v;
  return Signature(std::move(e));
}

std::string to_string(ClassTag tag) {
  switch (tag) {
    case ClassTag::T: return "T";
    case ClassTag::LT: return "LT";
    case ClassTag::CT: return "CT";
    case ClassTag::LCT: return "LCT";
    case ClassTag::RT: return "RT";
    case ClassTag::RLT: return "RLT";
    case ClassTag::RCT: return "RCT";
    case ClassTag::RLCT: return "RLCT";
    case ClassTag::Unstructured: return "Unstructured";
  }
  return "Unstructured";
}

ClassTag class_tag_from_string(std::string_view s) {
  static const std::pair<std::string_view, ClassTag> table[] = {
      {"T", ClassTag::T},     {"LT", ClassTag::LT},   {"CT", ClassTag::CT},
      {"LCT", ClassTag::LCT}, {"RT", ClassTag::RT},   {"RLT", ClassTag::RLT},
      {"RCT", ClassTag::RCT}, {"RLCT", ClassTag::RLCT}, {"Unstructured", ClassTag::Unstructured}};
  for (const auto& [name, tag] : table) {
    if (name == s) return tag;
  }
  fail(ErrorKind::Input, "unknown class tag '" + std::string(s) + "'");
}

void ValidationReport::require(bool ok, const std::string& condition, double residual) {
  worst_residual = std::max(worst_residual, residual);
  if (!ok) {
    pass = false;
    violations.push_back(condition);
  }
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << (pass ? "pass" : "fail") << " (worst residual " << worst_residual << ")";
  for (const auto& v : violations) os << "\n  violated: " << v;
  return os.str();
}

StructuredRealization::StructuredRealization(MatrixXd A, MatrixXd B, MatrixXd C, MatrixXd D,
                                             std::optional<Signature> sigma_int,
                                             std::optional<Signature> sigma_ext, ClassTag tag,
                                             std::optional<BlockPartition> partition)
    : A_(std::move(A)),
      B_(std::move(B)),
      C_(std::move(C)),
      D_(std::move(D)),
      sigma_int_(std::move(sigma_int)),
      sigma_ext_(std::move(sigma_ext)),
      tag_(tag),
      partition_(partition) {
  const auto n = A_.rows();
  if (A_.cols() != n) fail(ErrorKind::Input, "A must be square");
  if (B_.rows() != n) fail(ErrorKind::Input, "B must have as many rows as A");
  if (C_.cols() != n) fail(ErrorKind::Input, "C must have as many columns as A");
  if (D_.rows() != C_.rows() || D_.cols() != B_.cols())
    fail(ErrorKind::Input, "D must be p x m");
  if (sigma_int_ && sigma_int_->size() != n)
    fail(ErrorKind::Input, "sigma_int length must equal the state dimension");
  if (sigma_ext_) {
    if (p() != m()) fail(ErrorKind::Input, "sigma_ext requires p = m");
    if (sigma_ext_->size() != m()) fail(ErrorKind::Input, "sigma_ext length must equal m");
  }
  if (partition_) {
    if (partition_->row_split < 0 || partition_->row_split > p() || partition_->col_split < 0 ||
        partition_->col_split > m())
      fail(ErrorKind::Input, "block partition out of range");
    if (partition_->state_split && (*partition_->state_split < 0 || *partition_->state_split > n))
      fail(ErrorKind::Input, "state split out of range");
  }
}

StructuredRealization StructuredRealization::static_gain(const MatrixXd& D) {
  return StructuredRealization(MatrixXd(0, 0), MatrixXd(0, D.cols()), MatrixXd(D.rows(), 0), D);
}

StructuredRealization StructuredRealization::with_signatures(const Signature& sigma_int,
                                                             const Signature& sigma_ext) const {
  return StructuredRealization(A_, B_, C_, D_, sigma_int, sigma_ext, tag_, partition_);
}

StructuredRealization StructuredRealization::with_tag(ClassTag tag,
                                                      std::optional<BlockPartition> partition) const {
  return StructuredRealization(A_, B_, C_, D_, sigma_int_, sigma_ext_, tag,
                               partition ? partition : partition_);
}

MatrixXd StructuredRealization::M() const {
  const int n = this->n(), m = this->m(), p = this->p();
  MatrixXd M(n + p, n + m);
  M.topLeftCorner(n, n) = -A_;
  M.topRightCorner(n, m) = -B_;
  M.bottomLeftCorner(p, n) = C_;
  M.bottomRightCorner(p, m) = D_;
  return M;
}

double sym_residual(const MatrixXd& S, const MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  return (S * M - M.transpose() * S).cwiseAbs().maxCoeff();
}

double min_sym_eig(const MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  const MatrixXd H = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace rlct
