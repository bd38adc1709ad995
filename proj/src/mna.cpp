#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "lapack.hpp"
#include "rlct/netgraph.hpp"
#include "rlct/structured_ss.hpp"

namespace rlct {

namespace {

double norm2(const MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(M);
  return svd.singularValues()(0);
}

double rel_err(const MatrixXcd& X, const MatrixXcd& Y) {
  if (X.size() == 0) return 0.0;
  return (X - Y).norm() / std::max(1.0, Y.norm());
}

std::string fmt_s(Complex s) {
  std::ostringstream os;
  os << s.real() << (s.imag() < 0 ? "-" : "+") << std::abs(s.imag()) << "j";
  return os.str();
}

// Nodes touched by elements or ports, grouped into galvanic components.
struct NodeMap {
  std::map<std::string, int> index;  // unknown index, or -1 for a reference node
  int count = 0;
};

NodeMap number_nodes(const Netlist& net) {
  std::vector<std::string> used;
  std::map<std::string, int> id;
  auto touch = [&](const std::string& n) {
    if (!id.count(n)) {
      id[n] = static_cast<int>(used.size());
      used.push_back(n);
    }
  };
  for (const auto& e : net.elements)
    for (const auto& n : e.nodes) touch(n);
  for (const auto& p : net.ports) {
    touch(p.plus);
    touch(p.minus);
  }
  std::vector<int> parent(used.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  auto unite = [&](const std::string& a, const std::string& b) { parent[find(id[a])] = find(id[b]); };
  for (const auto& e : net.elements) {
    unite(e.nodes[0], e.nodes[1]);
    if (e.kind == ElementKind::T) unite(e.nodes[2], e.nodes[3]);
  }
  for (const auto& p : net.ports) unite(p.plus, p.minus);

  // One reference per component: ground if present, else the first node in netlist order.
  std::map<int, std::string> ref;
  if (id.count("0")) ref[find(id["0"])] = "0";
  for (const auto& n : net.nodes) {
    if (!id.count(n)) continue;
    const int r = find(id[n]);
    if (!ref.count(r)) ref[r] = n;
  }
  NodeMap m;
  for (const auto& n : net.nodes) {
    if (!id.count(n)) continue;
    if (ref[find(id[n])] == n) {
      m.index[n] = -1;
    } else {
      m.index[n] = m.count++;
    }
  }
  return m;
}

}  // namespace

MatrixXcd descriptor_response(const DescriptorModel& d, Complex s) {
  MatrixXcd G = d.D.cast<Complex>();
  if (d.E.rows() == 0) return G;
  const MatrixXcd P = s * d.E.cast<Complex>() - d.A.cast<Complex>();
  Eigen::PartialPivLU<MatrixXcd> lu(P);
  if (!(lu.rcond() > 1e-14)) fail(ErrorKind::Solver, "pencil sE - A is singular at s = " + fmt_s(s));
  G += d.C.cast<Complex>() * lu.solve(d.B.cast<Complex>());
  return G;
}

DescriptorModel mna_descriptor(const Netlist& net, const std::vector<Drive>& drive_in) {
  validate_netlist(net);
  std::vector<Drive> drive = drive_in;
  if (drive.empty()) drive.assign(net.ports.size(), Drive::Current);
  if (drive.size() != net.ports.size()) fail(ErrorKind::Input, "one drive type is needed per port");

  const NodeMap nm = number_nodes(net);
  int nd = nm.count;
  std::vector<int> branch(net.elements.size(), -1);  // first extra unknown of L / T elements
  for (size_t i = 0; i < net.elements.size(); ++i) {
    const auto k = net.elements[i].kind;
    if (k == ElementKind::L) {
      branch[i] = nd;
      nd += 1;
    } else if (k == ElementKind::T) {
      branch[i] = nd;
      nd += 2;
    }
  }
  std::vector<int> vsrc(net.ports.size(), -1);
  for (size_t j = 0; j < net.ports.size(); ++j)
    if (drive[j] == Drive::Voltage) vsrc[j] = nd++;
  // Transformer constraint rows reuse their current unknowns' indices.
  const int m = static_cast<int>(net.ports.size());
  DescriptorModel d;
  d.E = MatrixXd::Zero(nd, nd);
  d.A = MatrixXd::Zero(nd, nd);
  d.B = MatrixXd::Zero(nd, m);
  d.C = MatrixXd::Zero(m, nd);
  d.D = MatrixXd::Zero(m, m);
  auto v = [&](const std::string& n) { return nm.index.at(n); };

  // Two-terminal stamp of a symmetric admittance into matrix M with sign.
  auto stamp = [&](MatrixXd& M, int a, int b, double g) {
    if (a >= 0) M(a, a) += g;
    if (b >= 0) M(b, b) += g;
    if (a >= 0 && b >= 0) {
      M(a, b) -= g;
      M(b, a) -= g;
    }
  };
  // Current x_col leaving node a and entering node b.
  auto incidence = [&](int a, int b, int col) {
    if (a >= 0) d.A(a, col) -= 1.0;
    if (b >= 0) d.A(b, col) += 1.0;
  };
  auto across = [&](int row, int a, int b, double scale) {
    if (a >= 0) d.A(row, a) += scale;
    if (b >= 0) d.A(row, b) -= scale;
  };

  for (size_t i = 0; i < net.elements.size(); ++i) {
    const auto& e = net.elements[i];
    const int a = v(e.nodes[0]), b = v(e.nodes[1]);
    switch (e.kind) {
      case ElementKind::R: {
        MatrixXd G = MatrixXd::Zero(nd, nd);
        stamp(G, a, b, 1.0 / e.value);
        d.A -= G;
        break;
      }
      case ElementKind::C:
        stamp(d.E, a, b, e.value);
        break;
      case ElementKind::L: {
        const int k = branch[i];
        incidence(a, b, k);
        d.E(k, k) = e.value;  // L di/dt = v_a - v_b
        across(k, a, b, 1.0);
        break;
      }
      case ElementKind::T: {
        const int k1 = branch[i], k2 = branch[i] + 1;
        const int c = v(e.nodes[2]), dd = v(e.nodes[3]);
        incidence(a, b, k1);
        incidence(c, dd, k2);
        // v1 - n v2 = 0
        across(k1, a, b, 1.0);
        across(k1, c, dd, -e.value);
        // i2 + n i1 = 0
        d.A(k2, k2) = 1.0;
        d.A(k2, k1) = e.value;
        break;
      }
    }
  }
  for (int j = 0; j < m; ++j) {
    const int a = v(net.ports[j].plus), b = v(net.ports[j].minus);
    if (drive[j] == Drive::Current) {
      if (a >= 0) d.B(a, j) += 1.0;
      if (b >= 0) d.B(b, j) -= 1.0;
      if (a >= 0) d.C(j, a) += 1.0;
      if (b >= 0) d.C(j, b) -= 1.0;
    } else {
      const int k = vsrc[j];
      // source current enters the + node
      if (a >= 0) d.A(a, k) += 1.0;
      if (b >= 0) d.A(b, k) -= 1.0;
      across(k, a, b, 1.0);
      d.B(k, j) = -1.0;
      d.C(j, k) = 1.0;
    }
  }

  // Regularity probes at seeded random s with |s| in [0.1, 10].
  if (nd > 0) {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> logmag(-1.0, 1.0), ang(-M_PI, M_PI);
    std::vector<Complex> probes;
    bool any_regular = false;
    for (int t = 0; t < 3; ++t) {
      const Complex s = std::polar(std::pow(10.0, logmag(rng)), ang(rng));
      probes.push_back(s);
      Eigen::PartialPivLU<MatrixXcd> lu(s * d.E.cast<Complex>() - d.A.cast<Complex>());
      if (lu.rcond() > 1e-13) any_regular = true;
    }
    if (!any_regular) {
      std::string msg = "irregular pencil: sE - A singular at s =";
      for (auto s : probes) msg += " " + fmt_s(s);
      fail(ErrorKind::Structure, msg);
    }
  }
  return d;
}

MatrixXcd impedance_at(const Netlist& net, Complex s, const std::vector<Drive>& drive) {
  return descriptor_response(mna_descriptor(net, drive), s);
}

StructuredRealization descriptor_to_statespace(const DescriptorModel& d) {
  const Eigen::Index nd = d.E.rows();
  const Eigen::Index m = d.B.cols(), p = d.C.rows();
  if (nd == 0) return StructuredRealization(MatrixXd(0, 0), MatrixXd(0, m), MatrixXd(p, 0), d.D);

  const double an = std::max(norm2(d.A), 1e-300), en = norm2(d.E);
  const MatrixXd Es = en > 0 ? MatrixXd(d.E / en) : d.E;
  const auto qz = lapack::ordered_qz_finite_first(d.A / an, Es, 1e-10);
  const Eigen::Index nf = qz.selected, ni = nd - nf;
  const MatrixXd S = qz.Q.transpose() * d.A * qz.Z;
  const MatrixXd T = qz.Q.transpose() * d.E * qz.Z;
  const MatrixXd Bt = qz.Q.transpose() * d.B;
  const MatrixXd Ct = d.C * qz.Z;

  const MatrixXd S11 = S.topLeftCorner(nf, nf), S12 = S.topRightCorner(nf, ni), S22 = S.bottomRightCorner(ni, ni);
  const MatrixXd T11 = T.topLeftCorner(nf, nf), T12 = T.topRightCorner(nf, ni), T22 = T.bottomRightCorner(ni, ni);
  MatrixXd X = MatrixXd::Zero(nf, ni), Y = MatrixXd::Zero(nf, ni);
  if (nf > 0 && ni > 0) {
    MatrixXd R, L;
    // S11 X + Y S22 = -S12, T11 X + Y T22 = -T12 with R = X, L = -Y.
    lapack::generalized_sylvester(S11, S22, -S12, T11, T22, -T12, R, L);
    X = R;
    Y = -L;
  }
  const MatrixXd B1 = Bt.topRows(nf) + Y * Bt.bottomRows(ni);
  const MatrixXd B2 = Bt.bottomRows(ni);
  const MatrixXd C1 = Ct.leftCols(nf);
  const MatrixXd C2 = Ct.leftCols(nf) * X + Ct.rightCols(ni);

  MatrixXd Dn = d.D;
  if (ni > 0) {
    Eigen::PartialPivLU<MatrixXd> lu22(S22);
    if (!(lu22.rcond() > 1e-14)) fail(ErrorKind::Solver, "infinite part of the pencil is singular");
    const MatrixXd S22iB = lu22.solve(B2);
    const MatrixXd N = lu22.solve(T22);
    // Markov parameters of the polynomial part, scaled by the pencil's frequency scale.
    const double w0 = en > 0 ? an / en : 1.0;
    const double ref = 1.0 + norm2(Dn) + norm2(C2) * norm2(S22iB);
    MatrixXd Nk = N;
    for (Eigen::Index k = 1; k <= ni; ++k) {
      const double mk = norm2(C2 * Nk * S22iB) * std::pow(w0, static_cast<double>(k));
      if (mk > 1e-8 * ref)
        fail(ErrorKind::Structure, "improper behavior: transfer function grows like s^" + std::to_string(k) +
                                       " (e.g. a voltage-driven capacitor loop or current-driven inductor cutset)");
      Nk = Nk * N;
    }
    Dn -= C2 * S22iB;
  }
  MatrixXd As(nf, nf), Bs(nf, m), Cs = C1;
  if (nf > 0) {
    Eigen::PartialPivLU<MatrixXd> lu11(T11);
    As = lu11.solve(S11);
    Bs = lu11.solve(B1);
  }
  StructuredRealization out(As, Bs, Cs, Dn);

  // Self-check against the pencil at seeded probes.
  std::mt19937_64 rng(0xc0ffee);
  std::uniform_real_distribution<double> logmag(-1.0, 1.0), ang(-M_PI / 2, M_PI / 2);
  const double w0 = en > 0 ? an / en : 1.0;
  int checked = 0;
  for (int t = 0; t < 40 && checked < 10; ++t) {
    const Complex s = w0 * std::polar(std::pow(10.0, logmag(rng)), ang(rng));
    MatrixXcd ref, got;
    try {
      ref = descriptor_response(d, s);
      got = transfer_eval(out, s);
    } catch (const Error&) {
      continue;
    }
    ++checked;
    const double err = rel_err(got, ref);
    if (err > 1e-8)
      fail(ErrorKind::Solver, "state-space extraction mismatch at s = " + fmt_s(s) + " (relative error " +
                                  std::to_string(err) + ")");
  }
  return out;
}

}  // namespace rlct
