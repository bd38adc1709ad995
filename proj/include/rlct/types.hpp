#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace rlct {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Complex = std::complex<double>;

namespace tol {
inline constexpr double kStruct = 1e-9;
inline constexpr double kPsd = 1e-9;
inline constexpr double kRiccati = 1e-9;
inline constexpr double kImagAxis = 1e-8;
inline constexpr double kRank = 1e-12;
}  // namespace tol

enum class ErrorKind { Input, Parse, Structure, Solver, Convergence };

/// Library error carrying a classification used for CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& msg);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

/// Diagonal sign matrix stored as its entries.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<int> entries);
  static Signature identity(int n);
  static Signature blocks(int n_plus, int n_minus);

  int size() const { return static_cast<int>(e_.size()); }
  int operator[](int i) const { return e_[i]; }
  const std::vector<int>& entries() const { return e_; }
  MatrixXd matrix() const;
  VectorXd diagonal() const;
  int trace() const;
  Signature concat(const Signature& other) const;
  Signature negated() const;
  bool operator==(const Signature& o) const { return e_ == o.e_; }

 private:
  std::vector<int> e_;
};

enum class ClassTag { T, LT, CT, LCT, RT, RLT, RCT, RLCT, Unstructured };

std::string to_string(ClassTag tag);
ClassTag class_tag_from_string(std::string_view s);

/// Split points between the +1 and -1 blocks; state_split is used by LCT.
struct BlockPartition {
  int row_split = 0;
  int col_split = 0;
  std::optional<int> state_split;
  bool operator==(const BlockPartition&) const = default;
};

struct ValidationReport {
  bool pass = true;
  std::vector<std::string> violations;
  double worst_residual = 0.0;

  void require(bool ok, const std::string& condition, double residual);
  std::string summary() const;
};

/// State-space quadruple (A, B, C, D) with optional signature data.
class StructuredRealization {
 public:
  StructuredRealization() = default;
  StructuredRealization(MatrixXd A, MatrixXd B, MatrixXd C, MatrixXd D,
                        std::optional<Signature> sigma_int = std::nullopt,
                        std::optional<Signature> sigma_ext = std::nullopt,
                        ClassTag tag = ClassTag::Unstructured,
                        std::optional<BlockPartition> partition = std::nullopt);

  static StructuredRealization static_gain(const MatrixXd& D);

  const MatrixXd& A() const { return A_; }
  const MatrixXd& B() const { return B_; }
  const MatrixXd& C() const { return C_; }
  const MatrixXd& D() const { return D_; }
  int n() const { return static_cast<int>(A_.rows()); }
  int m() const { return static_cast<int>(B_.cols()); }
  int p() const { return static_cast<int>(C_.rows()); }
  const std::optional<Signature>& sigma_int() const { return sigma_int_; }
  const std::optional<Signature>& sigma_ext() const { return sigma_ext_; }
  ClassTag tag() const { return tag_; }
  const std::optional<BlockPartition>& partition() const { return partition_; }

  StructuredRealization with_signatures(const Signature& sigma_int, const Signature& sigma_ext) const;
  StructuredRealization with_tag(ClassTag tag, std::optional<BlockPartition> partition = std::nullopt) const;

  /// The block matrix [-A -B; C D].
  MatrixXd M() const;

 private:
  MatrixXd A_{0, 0}, B_{0, 0}, C_{0, 0}, D_{0, 0};
  std::optional<Signature> sigma_int_;
  std::optional<Signature> sigma_ext_;
  ClassTag tag_ = ClassTag::Unstructured;
  std::optional<BlockPartition> partition_;
};

double sym_residual(const MatrixXd& S, const MatrixXd& M);
double min_sym_eig(const MatrixXd& M);

}  // namespace rlct
