#include "rlct/structured_ss.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace rlct {

namespace {

double max_abs(const MatrixXd& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

double spectral_norm(const MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(M);
  return svd.singularValues()(0);
}

double min_eig_sym(const MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

struct Checker {
  ValidationReport report;
  std::string prefix;

  void zero(const MatrixXd& M, const std::string& name) {
    const double r = max_abs(M);
    report.require(r < tol::kStruct, prefix + name, r);
  }
  void equal(const MatrixXd& X, const MatrixXd& Y, const std::string& name) {
    const double r = max_abs(X - Y);
    report.require(r < tol::kStruct, prefix + name, r);
  }
  void symmetric(const MatrixXd& M, const std::string& name) { equal(M, M.transpose(), name); }
  void psd(const MatrixXd& M, const std::string& name) {
    if (M.size() == 0) return;
    const double lmin = min_eig_sym(M);
    const double thresh = -tol::kPsd * (1.0 + spectral_norm(M));
    report.require(lmin > thresh, prefix + name, lmin < 0 ? -lmin : 0.0);
  }
};

// Shared checks on the static part for the port-partitioned classes.
void check_t_feedthrough(Checker& c, const MatrixXd& D, int k, int kc, bool lossy) {
  const int p = static_cast<int>(D.rows()), m = static_cast<int>(D.cols());
  const MatrixXd D11 = D.topLeftCorner(k, kc);
  const MatrixXd D12 = D.topRightCorner(k, m - kc);
  const MatrixXd D21 = D.bottomLeftCorner(p - k, kc);
  const MatrixXd D22 = D.bottomRightCorner(p - k, m - kc);
  if (lossy) {
    c.symmetric(D11, "D₁₁ = D₁₁ᵀ");
    c.symmetric(D22, "D₂₂ = D₂₂ᵀ");
  } else {
    c.zero(D11, "D₁₁ = 0");
    c.zero(D22, "D₂₂ = 0");
  }
  if (D21.rows() == D12.cols() && D21.cols() == D12.rows()) {
    c.equal(D21, -D12.transpose(), "D₂₁ = −D₁₂ᵀ");
  } else {
    c.report.require(false, c.prefix + "D₂₁ = −D₁₂ᵀ (block shapes incompatible)", 0.0);
  }
}

const BlockPartition& need_partition(const StructuredRealization& real, ClassTag tag) {
  if (!real.partition())
    fail(ErrorKind::Input, to_string(tag) + " validation requires a block partition");
  return *real.partition();
}

}  // namespace

ValidationReport check_signature_symmetry(const StructuredRealization& real, const Signature& sigma_int,
                                          const Signature& sigma_ext) {
  ValidationReport rep;
  if (sigma_int.size() != real.n() || sigma_ext.size() != real.m() || real.p() != real.m())
    fail(ErrorKind::Input, "signature dimensions do not match the realization");
  const MatrixXd M = real.M();
  const MatrixXd S = sigma_int.concat(sigma_ext).matrix();
  const double r = sym_residual(S, M);
  rep.require(r < tol::kStruct, "Σ·M = Mᵀ·Σ", r);
  const MatrixXd H = M + M.transpose();
  const double lmin = min_eig_sym(H);
  rep.require(lmin > -tol::kPsd * (1.0 + spectral_norm(H)), "M + Mᵀ ⪰ 0", lmin < 0 ? -lmin : 0.0);
  return rep;
}

ValidationReport validate_structure(const StructuredRealization& real, ClassTag tag) {
  Checker c;
  c.prefix = to_string(tag) + ": ";
  const MatrixXd &A = real.A(), &B = real.B(), &C = real.C(), &D = real.D();
  const int n = real.n(), m = real.m(), p = real.p();
  auto square_ports = [&] {
    c.report.require(p == m, c.prefix + "p = m", 0.0);
    return p == m;
  };

  switch (tag) {
    case ClassTag::Unstructured:
      break;

    case ClassTag::RLCT: {
      std::optional<std::pair<Signature, Signature>> sig;
      if (real.sigma_int() && real.sigma_ext())
        sig = std::make_pair(*real.sigma_int(), *real.sigma_ext());
      else if (p == m)
        sig = infer_signatures(real);
      if (!sig) {
        c.report.require(false, c.prefix + "Σ·[−A −B; C D] = [−A −B; C D]ᵀ·Σ", 0.0);
        break;
      }
      const auto rep = check_signature_symmetry(real, sig->first, sig->second);
      for (const auto& v : rep.violations) c.report.require(false, c.prefix + v, 0.0);
      c.report.worst_residual = std::max(c.report.worst_residual, rep.worst_residual);
      break;
    }

    case ClassTag::T:
    case ClassTag::RT:
    case ClassTag::LT:
    case ClassTag::CT: {
      if (!square_ports()) break;
      const auto& part = need_partition(real, tag);
      const int k = part.row_split, kc = part.col_split;
      const bool lossy = tag == ClassTag::RT;
      if (tag == ClassTag::T || tag == ClassTag::RT) {
        c.report.require(n == 0, c.prefix + "no states", static_cast<double>(n));
      } else {
        c.zero(A, "A = 0");
        if (tag == ClassTag::LT) {
          c.zero(B.rightCols(m - kc), "B = [B₁ 0]");
          c.equal(C.topRows(k), B.leftCols(kc).transpose(), "C = [B₁ᵀ; 0]");
          c.zero(C.bottomRows(p - k), "C = [B₁ᵀ; 0]");
        } else {
          c.zero(B.leftCols(kc), "B = [0 B₂]");
          c.zero(C.topRows(k), "C = [0; B₂ᵀ]");
          c.equal(C.bottomRows(p - k), B.rightCols(m - kc).transpose(), "C = [0; B₂ᵀ]");
        }
      }
      check_t_feedthrough(c, D, k, kc, lossy);
      if (lossy) {
        c.psd(D.topLeftCorner(k, kc), "D₁₁ ⪰ 0");
        c.psd(D.bottomRightCorner(p - k, m - kc), "D₂₂ ⪰ 0");
      }
      break;
    }

    case ClassTag::LCT: {
      if (!square_ports()) break;
      std::optional<int> s;
      if (real.partition() && real.partition()->state_split) s = real.partition()->state_split;
      if (!real.partition() || !s) {
        c.equal(A, -A.transpose(), "A = −Aᵀ");
        c.equal(C, B.transpose(), "C = Bᵀ");
        c.equal(D, -D.transpose(), "D = −Dᵀ");
        break;
      }
      const int k = real.partition()->row_split, kc = real.partition()->col_split;
      const int s1 = *s, s2 = n - s1;
      c.zero(A.topLeftCorner(s1, s1), "A₁₁ = 0");
      c.zero(A.bottomRightCorner(s2, s2), "A₂₂ = 0");
      c.equal(A.bottomLeftCorner(s2, s1), -A.topRightCorner(s1, s2).transpose(), "A = −Aᵀ");
      c.zero(B.topLeftCorner(s1, kc), "B = [0 B₁₂; B₂₁ 0]");
      c.zero(B.bottomRightCorner(s2, m - kc), "B = [0 B₁₂; B₂₁ 0]");
      c.zero(C.topLeftCorner(k, s1), "C = [0 B₂₁ᵀ; B₁₂ᵀ 0]");
      c.zero(C.bottomRightCorner(p - k, s2), "C = [0 B₂₁ᵀ; B₁₂ᵀ 0]");
      c.equal(C.topRightCorner(k, s2), B.bottomLeftCorner(s2, kc).transpose(), "C = [0 B₂₁ᵀ; B₁₂ᵀ 0]");
      c.equal(C.bottomLeftCorner(p - k, s1), B.topRightCorner(s1, m - kc).transpose(),
              "C = [0 B₂₁ᵀ; B₁₂ᵀ 0]");
      check_t_feedthrough(c, D, k, kc, false);
      break;
    }

    case ClassTag::RLT:
    case ClassTag::RCT: {
      if (!square_ports()) break;
      const auto& part = need_partition(real, tag);
      const int k = part.row_split, kc = part.col_split;
      const MatrixXd B1 = B.leftCols(kc), B2 = B.rightCols(m - kc);
      c.symmetric(A, "A = Aᵀ");
      if (tag == ClassTag::RLT) {
        c.equal(C.topRows(k), B1.transpose(), "C = [B₁ᵀ; −B₂ᵀ]");
        c.equal(C.bottomRows(p - k), -B2.transpose(), "C = [B₁ᵀ; −B₂ᵀ]");
      } else {
        c.equal(C.topRows(k), -B1.transpose(), "C = [−B₁ᵀ; B₂ᵀ]");
        c.equal(C.bottomRows(p - k), B2.transpose(), "C = [−B₁ᵀ; B₂ᵀ]");
      }
      check_t_feedthrough(c, D, k, kc, true);
      const MatrixXd D11 = D.topLeftCorner(k, kc), D22 = D.bottomRightCorner(p - k, m - kc);
      auto joint = [&](const MatrixXd& Bx, const MatrixXd& Dx) {
        MatrixXd J(n + Bx.cols(), n + Bx.cols());
        J << -A, Bx, Bx.transpose(), Dx;
        return J;
      };
      if (tag == ClassTag::RLT) {
        c.psd(joint(B2, D22), "[−A B₂; B₂ᵀ D₂₂] ⪰ 0");
        c.psd(D11, "D₁₁ ⪰ 0");
      } else {
        c.psd(joint(B1, D11), "[−A B₁; B₁ᵀ D₁₁] ⪰ 0");
        c.psd(D22, "D₂₂ ⪰ 0");
      }
      break;
    }
  }
  return c.report;
}

std::optional<std::pair<Signature, Signature>> infer_signatures(const StructuredRealization& real) {
  if (real.p() != real.m()) fail(ErrorKind::Input, "infer_signatures requires p = m");
  const MatrixXd M = real.M();
  const int N = static_cast<int>(M.rows());
  std::vector<int> parent(N), parity(N, 0);
  std::iota(parent.begin(), parent.end(), 0);

  // find returns the root and the parity of i relative to it
  auto find = [&](int i) {
    int par = 0, r = i;
    while (parent[r] != r) {
      par ^= parity[r];
      r = parent[r];
    }
    int cur = i, cur_par = par;
    while (parent[cur] != cur) {
      const int next = parent[cur];
      const int next_par = cur_par ^ parity[cur];
      parent[cur] = r;
      parity[cur] = cur_par;
      cur = next;
      cur_par = next_par;
    }
    return std::make_pair(r, par);
  };

  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      const double a = M(i, j), b = M(j, i);
      const double scale = 1.0 + std::max(std::abs(a), std::abs(b));
      if (std::abs(a) < tol::kStruct && std::abs(b) < tol::kStruct) continue;
      int rel;
      if (std::abs(a - b) < tol::kStruct * scale)
        rel = 0;
      else if (std::abs(a + b) < tol::kStruct * scale)
        rel = 1;
      else
        return std::nullopt;
      auto [ri, pi] = find(i);
      auto [rj, pj] = find(j);
      if (ri == rj) {
        if ((pi ^ pj) != rel) return std::nullopt;
      } else {
        parent[ri] = rj;
        parity[ri] = pi ^ pj ^ rel;
      }
    }
  }

  std::vector<int> sign(N);
  for (int i = 0; i < N; ++i) sign[i] = find(i).second ? -1 : 1;
  const int n = real.n();
  if (real.m() > 0) {
    const auto [root, par] = find(n);
    if (par) {
      for (int i = 0; i < N; ++i)
        if (find(i).first == root) sign[i] = -sign[i];
    }
  }
  std::vector<int> si(sign.begin(), sign.begin() + n), se(sign.begin() + n, sign.end());
  return std::make_pair(Signature(si), Signature(se));
}

MatrixXcd transfer_eval(const StructuredRealization& real, Complex s) {
  MatrixXcd G = real.D().cast<Complex>();
  if (real.n() == 0) return G;
  MatrixXcd R = -real.A().cast<Complex>();
  R.diagonal().array() += s;
  Eigen::PartialPivLU<MatrixXcd> lu(R);
  const double rc = lu.rcond();
  if (!(rc > 1e-15)) {
    std::ostringstream os;
    os << "resolvent sI − A singular at s = " << s.real() << (s.imag() < 0 ? "-" : "+") << std::abs(s.imag())
       << "j";
    fail(ErrorKind::Solver, os.str());
  }
  G += real.C().cast<Complex>() * lu.solve(real.B().cast<Complex>());
  return G;
}

int numerical_rank(const MatrixXd& M) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0) return 0;
  const double thresh = static_cast<double>(std::max(M.rows(), M.cols())) * sv(0) * tol::kRank;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++r;
  return r;
}

namespace {

// Orthonormal basis for range(M) with singular values above the rank threshold.
MatrixXd range_basis(const MatrixXd& M, double abs_floor) {
  if (M.cols() == 0 || M.rows() == 0) return MatrixXd(M.rows(), 0);
  Eigen::JacobiSVD<MatrixXd> svd(M, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double thresh = std::max(abs_floor, static_cast<double>(M.rows()) * sv(0) * tol::kRank);
  int r = 0;
  while (r < sv.size() && sv(r) > thresh) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace

MatrixXd controllable_basis(const MatrixXd& A, const MatrixXd& B) {
  const int n = static_cast<int>(A.rows());
  if (n == 0) return MatrixXd(0, 0);
  const double a_norm = std::max(spectral_norm(A), 1e-300);
  const double b_norm = spectral_norm(B);
  if (b_norm == 0.0) return MatrixXd(n, 0);
  const MatrixXd As = A / a_norm;
  // Block Krylov sequence with full reorthogonalization against the basis so far.
  MatrixXd Q = range_basis(B / b_norm, 0.0);
  MatrixXd last = Q;
  const double floor = static_cast<double>(n) * tol::kRank * 10.0;
  while (Q.cols() < n && last.cols() > 0) {
    MatrixXd W = As * last;
    for (int pass = 0; pass < 2; ++pass) W -= Q * (Q.transpose() * W);
    MatrixXd Nw = range_basis(W, floor);
    if (Nw.cols() == 0) break;
    for (int pass = 0; pass < 2; ++pass) Nw -= Q * (Q.transpose() * Nw);
    Nw = range_basis(Nw, 0.0);
    MatrixXd Qn(n, Q.cols() + Nw.cols());
    Qn << Q, Nw;
    Q = std::move(Qn);
    last = Nw;
  }
  return Q;
}

StructuredRealization reduce_to_controllable(const StructuredRealization& real) {
  const ClassTag tag = real.tag();
  if (tag != ClassTag::LCT && tag != ClassTag::RLT && tag != ClassTag::RCT && tag != ClassTag::LT &&
      tag != ClassTag::CT && tag != ClassTag::T && tag != ClassTag::RT)
    fail(ErrorKind::Input, "reduce_to_controllable requires an LCT, RLT or RCT class tag (got " +
                               to_string(tag) + ")");
  const int n = real.n();
  MatrixXd Q = controllable_basis(real.A(), real.B());
  std::optional<Signature> sig_int = real.sigma_int();
  std::optional<BlockPartition> part = real.partition();

  if (tag == ClassTag::LCT || sig_int) {
    // Split the basis along the +1/-1 coordinates so the reduced state keeps a block signature.
    std::vector<int> sign(n, 1);
    if (sig_int) {
      sign = sig_int->entries();
    } else if (part && part->state_split) {
      for (int i = *part->state_split; i < n; ++i) sign[i] = -1;
    }
    MatrixXd Pp = MatrixXd::Zero(n, n), Pm = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) (sign[i] > 0 ? Pp : Pm)(i, i) = 1.0;
    const MatrixXd Qp = range_basis(Pp * Q, static_cast<double>(n) * tol::kRank * 10.0);
    const MatrixXd Qm = range_basis(Pm * Q, static_cast<double>(n) * tol::kRank * 10.0);
    if (Qp.cols() + Qm.cols() == Q.cols()) {
      MatrixXd Qs(n, Q.cols());
      Qs << Qp, Qm;
      Q = Qs;
      const int np = static_cast<int>(Qp.cols()), nm = static_cast<int>(Qm.cols());
      if (sig_int) sig_int = Signature::blocks(np, nm);
      if (part && part->state_split) part->state_split = np;
    }
  }

  const int r = static_cast<int>(Q.cols());
  MatrixXd Ar = Q.transpose() * real.A() * Q;
  MatrixXd Br = Q.transpose() * real.B();
  MatrixXd Cr = real.C() * Q;
  if (r == 0) {
    Ar.resize(0, 0);
    Br.resize(0, real.m());
    Cr.resize(real.p(), 0);
  }
  if (sig_int && sig_int->size() != r) sig_int.reset();
  return StructuredRealization(Ar, Br, Cr, real.D(), sig_int, real.sigma_ext(), tag, part);
}

namespace {

MatrixXd or_zero(const MatrixXd& M, Eigen::Index rows, Eigen::Index cols) {
  if (M.size() == 0 && (rows == 0 || cols == 0 || M.rows() == 0)) return MatrixXd::Zero(rows, cols);
  if (M.rows() != rows || M.cols() != cols) fail(ErrorKind::Input, "block dimension mismatch");
  return M;
}

[[noreturn]] void definiteness_error(const std::string& cls, const std::string& cond, double lmin,
                                     const std::string& detail = "") {
  std::ostringstream os;
  os << cls << ": " << cond << " violated";
  if (!detail.empty()) os << " (" << detail << ")";
  os << ", minimum eigenvalue " << lmin;
  fail(ErrorKind::Structure, os.str());
}

void require_psd(const std::string& cls, const std::string& cond, const MatrixXd& M,
                 const std::string& detail = "") {
  if (M.size() == 0) return;
  const double lmin = min_eig_sym(M);
  if (lmin <= -tol::kPsd * (1.0 + spectral_norm(M))) definiteness_error(cls, cond, lmin, detail);
}

StructuredRealization build_lossy(bool rlt, const MatrixXd& A, const MatrixXd& B1_in, const MatrixXd& B2_in,
                                  const MatrixXd& D11_in, const MatrixXd& D12_in, const MatrixXd& D22_in) {
  const std::string cls = rlt ? "RLT" : "RCT";
  const Eigen::Index n = A.rows();
  if (A.cols() != n) fail(ErrorKind::Input, cls + ": A must be square");
  const Eigen::Index k = B1_in.cols() > 0 ? B1_in.cols() : D11_in.rows();
  const Eigen::Index l = B2_in.cols() > 0 ? B2_in.cols() : D22_in.rows();
  const MatrixXd B1 = or_zero(B1_in, n, k), B2 = or_zero(B2_in, n, l);
  const MatrixXd D11 = or_zero(D11_in, k, k), D22 = or_zero(D22_in, l, l), D12 = or_zero(D12_in, k, l);
  if (max_abs(A - A.transpose()) >= tol::kStruct) fail(ErrorKind::Structure, cls + ": A = Aᵀ violated");
  if (max_abs(D11 - D11.transpose()) >= tol::kStruct)
    fail(ErrorKind::Structure, cls + ": D₁₁ = D₁₁ᵀ violated");
  if (max_abs(D22 - D22.transpose()) >= tol::kStruct)
    fail(ErrorKind::Structure, cls + ": D₂₂ = D₂₂ᵀ violated");

  const MatrixXd& Bj = rlt ? B2 : B1;
  const MatrixXd& Dj = rlt ? D22 : D11;
  MatrixXd J(n + Bj.cols(), n + Bj.cols());
  J << -A, Bj, Bj.transpose(), Dj;
  const std::string jname = rlt ? "[−A B₂; B₂ᵀ D₂₂] ⪰ 0" : "[−A B₁; B₁ᵀ D₁₁] ⪰ 0";
  std::string detail;
  if (n > 0 && min_eig_sym(-A) <= -tol::kPsd * (1.0 + spectral_norm(A))) detail = "−A ⪰ 0 violated";
  require_psd(cls, jname, J, detail);
  require_psd(cls, rlt ? "D₁₁ ⪰ 0" : "D₂₂ ⪰ 0", rlt ? D11 : D22);

  MatrixXd B(n, k + l), C(k + l, n), D(k + l, k + l);
  B << B1, B2;
  if (rlt)
    C << B1.transpose(), -B2.transpose();
  else
    C << -B1.transpose(), B2.transpose();
  D << D11, D12, -D12.transpose(), D22;
  const Signature sint = rlt ? Signature::blocks(0, static_cast<int>(n)) : Signature::identity(static_cast<int>(n));
  const Signature sext = Signature::blocks(static_cast<int>(k), static_cast<int>(l));
  BlockPartition part{static_cast<int>(k), static_cast<int>(k), std::nullopt};
  return StructuredRealization(A, B, C, D, sint, sext, rlt ? ClassTag::RLT : ClassTag::RCT, part);
}

}  // namespace

StructuredRealization build_lct(const MatrixXd& A12, const MatrixXd& B12, const MatrixXd& B21,
                                const MatrixXd& D12_in) {
  const Eigen::Index n1 = std::max(A12.rows(), B12.rows());
  const Eigen::Index n2 = std::max(A12.cols(), B21.rows());
  const Eigen::Index m1 = B21.cols() > 0 ? B21.cols() : D12_in.rows();
  const Eigen::Index m2 = B12.cols() > 0 ? B12.cols() : D12_in.cols();
  const MatrixXd a12 = or_zero(A12, n1, n2);
  const MatrixXd b12 = or_zero(B12, n1, m2);
  const MatrixXd b21 = or_zero(B21, n2, m1);
  const MatrixXd d12 = or_zero(D12_in, m1, m2);
  const Eigen::Index n = n1 + n2, m = m1 + m2;
  MatrixXd A = MatrixXd::Zero(n, n), B = MatrixXd::Zero(n, m), C = MatrixXd::Zero(m, n), D = MatrixXd::Zero(m, m);
  A.topRightCorner(n1, n2) = a12;
  A.bottomLeftCorner(n2, n1) = -a12.transpose();
  B.topRightCorner(n1, m2) = b12;
  B.bottomLeftCorner(n2, m1) = b21;
  C.topRightCorner(m1, n2) = b21.transpose();
  C.bottomLeftCorner(m2, n1) = b12.transpose();
  D.topRightCorner(m1, m2) = d12;
  D.bottomLeftCorner(m2, m1) = -d12.transpose();
  BlockPartition part{static_cast<int>(m1), static_cast<int>(m1), static_cast<int>(n1)};
  return StructuredRealization(A, B, C, D, Signature::blocks(static_cast<int>(n1), static_cast<int>(n2)),
                               Signature::blocks(static_cast<int>(m1), static_cast<int>(m2)), ClassTag::LCT, part);
}

StructuredRealization build_lt(const MatrixXd& B1, const MatrixXd& D12_in) {
  const Eigen::Index n = B1.rows(), k = B1.cols() > 0 ? B1.cols() : D12_in.rows();
  const Eigen::Index l = D12_in.cols();
  const MatrixXd d12 = or_zero(D12_in, k, l);
  MatrixXd B = MatrixXd::Zero(n, k + l), C = MatrixXd::Zero(k + l, n), D = MatrixXd::Zero(k + l, k + l);
  B.leftCols(k) = or_zero(B1, n, k);
  C.topRows(k) = B.leftCols(k).transpose();
  D.topRightCorner(k, l) = d12;
  D.bottomLeftCorner(l, k) = -d12.transpose();
  BlockPartition part{static_cast<int>(k), static_cast<int>(k), std::nullopt};
  return StructuredRealization(MatrixXd::Zero(n, n), B, C, D, Signature::blocks(0, static_cast<int>(n)),
                               Signature::blocks(static_cast<int>(k), static_cast<int>(l)), ClassTag::LT, part);
}

StructuredRealization build_ct(const MatrixXd& B2, const MatrixXd& D12_in) {
  const Eigen::Index n = B2.rows(), l = B2.cols() > 0 ? B2.cols() : D12_in.cols();
  const Eigen::Index k = D12_in.rows();
  const MatrixXd d12 = or_zero(D12_in, k, l);
  MatrixXd B = MatrixXd::Zero(n, k + l), C = MatrixXd::Zero(k + l, n), D = MatrixXd::Zero(k + l, k + l);
  B.rightCols(l) = or_zero(B2, n, l);
  C.bottomRows(l) = B.rightCols(l).transpose();
  D.topRightCorner(k, l) = d12;
  D.bottomLeftCorner(l, k) = -d12.transpose();
  BlockPartition part{static_cast<int>(k), static_cast<int>(k), std::nullopt};
  return StructuredRealization(MatrixXd::Zero(n, n), B, C, D, Signature::identity(static_cast<int>(n)),
                               Signature::blocks(static_cast<int>(k), static_cast<int>(l)), ClassTag::CT, part);
}

StructuredRealization build_rlt(const MatrixXd& A, const MatrixXd& B1, const MatrixXd& B2, const MatrixXd& D11,
                                const MatrixXd& D12, const MatrixXd& D22) {
  return build_lossy(true, A, B1, B2, D11, D12, D22);
}

StructuredRealization build_rct(const MatrixXd& A, const MatrixXd& B1, const MatrixXd& B2, const MatrixXd& D11,
                                const MatrixXd& D12, const MatrixXd& D22) {
  return build_lossy(false, A, B1, B2, D11, D12, D22);
}

}  // namespace rlct
