#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "rlct/netgraph.hpp"
#include "rlct/structured_ss.hpp"

namespace rlct {

namespace {

void check_laplacian(const MatrixXd& L) {
  const Eigen::Index n = L.rows();
  if (L.cols() != n) fail(ErrorKind::Input, "Laplacian must be square");
  const double scale = 1.0 + (n > 0 ? L.cwiseAbs().maxCoeff() : 0.0);
  if (n > 0 && (L - L.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    fail(ErrorKind::Input, "Laplacian must be symmetric");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(L.row(i).sum()) > 1e-9 * scale) fail(ErrorKind::Input, "Laplacian rows must sum to zero");
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && L(i, j) > 1e-12 * scale) fail(ErrorKind::Input, "Laplacian off-diagonals must be nonpositive");
  }
}

std::vector<int> components(const MatrixXd& L) {
  const int n = static_cast<int>(L.rows());
  std::vector<int> comp(n, -1);
  int c = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = c;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v)
        if (v != u && L(u, v) != 0.0 && comp[v] < 0) {
          comp[v] = c;
          stack.push_back(v);
        }
    }
    ++c;
  }
  return comp;
}

std::string bus(int i) { return "b" + std::to_string(i); }

void check_grid_inputs(const MatrixXd& L, const std::vector<int>& renewable, const std::map<int, double>& inertias) {
  check_laplacian(L);
  const int n = static_cast<int>(L.rows());
  if (renewable.empty()) fail(ErrorKind::Input, "at least one renewable bus is required");
  std::set<int> seen;
  for (int r : renewable) {
    if (r < 0 || r >= n) fail(ErrorKind::Input, "renewable bus index out of range");
    if (!seen.insert(r).second) fail(ErrorKind::Input, "renewable bus listed twice");
    if (inertias.count(r)) fail(ErrorKind::Input, "a bus cannot be both renewable and a machine");
  }
  for (auto [k, M] : inertias) {
    if (k < 0 || k >= n) fail(ErrorKind::Input, "machine bus index out of range");
    if (!(M > 0.0)) fail(ErrorKind::Input, "inertias must be positive");
  }
  const auto comp = components(L);
  if (std::any_of(comp.begin(), comp.end(), [&](int c) { return c != comp[renewable.front()]; }))
    fail(ErrorKind::Structure, "disconnected renewable bus set: the grid graph is not connected");
}

}  // namespace

MatrixXd kron_reduce(const MatrixXd& L, const std::vector<int>& boundary) {
  check_laplacian(L);
  const int n = static_cast<int>(L.rows());
  std::vector<bool> is_b(n, false);
  for (int b : boundary) {
    if (b < 0 || b >= n) fail(ErrorKind::Input, "boundary index out of range");
    if (is_b[b]) fail(ErrorKind::Input, "boundary index repeated");
    is_b[b] = true;
  }
  std::vector<int> interior;
  for (int i = 0; i < n; ++i)
    if (!is_b[i]) interior.push_back(i);
  const int nb = static_cast<int>(boundary.size()), ni = static_cast<int>(interior.size());
  MatrixXd L11(nb, nb), L12(nb, ni), L22(ni, ni);
  for (int i = 0; i < nb; ++i) {
    for (int j = 0; j < nb; ++j) L11(i, j) = L(boundary[i], boundary[j]);
    for (int j = 0; j < ni; ++j) L12(i, j) = L(boundary[i], interior[j]);
  }
  for (int i = 0; i < ni; ++i)
    for (int j = 0; j < ni; ++j) L22(i, j) = L(interior[i], interior[j]);
  MatrixXd Y = L11;
  if (ni > 0) {
    Eigen::PartialPivLU<MatrixXd> lu(L22);
    if (!(lu.rcond() > 1e-12))
      fail(ErrorKind::Structure, "interior block is singular: an interior node is isolated from the boundary");
    Y -= L12 * lu.solve(L12.transpose());
  }
  Y = 0.5 * (Y + Y.transpose());
  for (int i = 0; i < nb; ++i) {
    double off = 0.0;
    for (int j = 0; j < nb; ++j)
      if (j != i) off += Y(i, j);
    Y(i, i) = -off;
  }
  return Y;
}

StructuredRealization build_swing_grid(const MatrixXd& L, const std::vector<int>& renewable,
                                       const std::map<int, double>& inertias) {
  check_grid_inputs(L, renewable, inertias);
  std::vector<int> gens = renewable;
  std::vector<double> M;
  for (auto [k, m] : inertias) {
    gens.push_back(k);
    M.push_back(m);
  }
  const MatrixXd Y = kron_reduce(L, gens);
  // Y = F^T F with F of full row rank.
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(Y);
  const auto& lam = es.eigenvalues();
  const double thresh = static_cast<double>(Y.rows()) * 1e-12 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  std::vector<int> keep;
  for (int i = 0; i < lam.size(); ++i)
    if (lam(i) > thresh) keep.push_back(i);
  const int k = static_cast<int>(keep.size());
  MatrixXd F(k, Y.cols());
  for (int r = 0; r < k; ++r) F.row(r) = std::sqrt(lam(keep[r])) * es.eigenvectors().col(keep[r]).transpose();
  const int nr = static_cast<int>(renewable.size()), nm = static_cast<int>(M.size());
  const MatrixXd B1 = F.leftCols(nr);
  MatrixXd A12 = F.rightCols(nm);
  for (int j = 0; j < nm; ++j) A12.col(j) /= std::sqrt(M[j]);
  return build_lct(A12, B1, MatrixXd::Zero(nm, 0));
}

Netlist swing_grid_netlist(const MatrixXd& L, const std::vector<int>& renewable,
                           const std::map<int, double>& inertias) {
  check_grid_inputs(L, renewable, inertias);
  Netlist net;
  net.nodes.push_back("0");
  const int n = static_cast<int>(L.rows());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (L(i, j) < 0.0) net.add(ElementKind::L, bus(i), bus(j), -1.0 / L(i, j));
  for (auto [k, m] : inertias) net.add(ElementKind::C, bus(k), "0", m);
  for (int r : renewable) net.add_port(bus(r), "0");
  return net;
}

Netlist swing_controller_netlist(const MatrixXd& L, const std::vector<int>& renewable,
                                 const std::map<int, double>& inertias, double ohms) {
  Netlist net = swing_grid_netlist(L, renewable, inertias);
  net.ports.clear();
  for (int r : renewable) {
    const std::string t = "t" + std::to_string(r);
    net.add(ElementKind::R, t, bus(r), ohms);
    net.add_port(t, "0");
  }
  return net;
}

LeastSquaresCircuit build_least_squares_circuit(const MatrixXd& A_ls, const MatrixXd& C_ls) {
  const Eigen::Index m = A_ls.rows(), n = A_ls.cols();
  const Eigen::Index p = C_ls.rows();
  if (p > 0 && C_ls.cols() != n) fail(ErrorKind::Input, "C_ls must have as many columns as A_ls");
  const MatrixXd C = p > 0 ? C_ls : MatrixXd(0, n);
  LeastSquaresCircuit out;
  out.plant = build_lct(-C.transpose(), A_ls.transpose(), MatrixXd::Zero(p, 0));
  out.B_r1 = -out.plant.B();
  out.B_r2 = MatrixXd::Zero(n + p, p);
  out.B_r2.bottomRows(p).setIdentity();
  out.c_right_invertible = p == 0 || numerical_rank(C) == p;
  MatrixXd stacked(m + p, n);
  stacked << A_ls, C;
  out.stacked_left_invertible = numerical_rank(stacked) == n;
  return out;
}

}  // namespace rlct
