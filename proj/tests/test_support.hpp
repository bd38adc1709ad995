#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

#include "rlct/internal_map.hpp"
#include "rlct/netgraph.hpp"
#include "rlct/plant.hpp"
#include "rlct/riccati.hpp"
#include "rlct/serialize.hpp"
#include "rlct/structured_ss.hpp"
#include "rlct/synthesis.hpp"

namespace rlct::testing {

inline std::string data_path(const std::string& name) { return std::string(RLCT_TEST_DATA) + "/" + name; }

inline MatrixXd randn(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> nd(0.0, 1.0);
  MatrixXd M(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) M(i, j) = nd(rng);
  return M;
}

inline int randint(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Signature random_signature(std::mt19937_64& rng, int n) {
  std::vector<int> e(n);
  for (auto& v : e) v = randint(rng, 0, 1) ? 1 : -1;
  return Signature(e);
}

inline double rel_err(const MatrixXcd& a, const MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

/// The six-state one-port realization with D = 1.
inline StructuredRealization bott_duffin_realization() {
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
  MatrixXd A(6, 6);
  A << -2, 0, 0, -r3, 0, 0,
       0, 0, 0, -r2, 0, 0,
       0, 0, 0, 0, r2, -r3,
       r3, r2, 0, 0, 0, 0,
       0, 0, -r2, 0, 0, 0,
       0, 0, r3, 0, 0, -2;
  MatrixXd B(6, 1), C(1, 6), D(1, 1);
  B << -r2, 0, 0, std::sqrt(1.5), 0, 1 / r2;
  C << r2, 0, 0, std::sqrt(1.5), 0, 1 / r2;
  D << 1;
  return StructuredRealization(A, B, C, D);
}

/// Internal data matching the element values of the Bott-Duffin netlist.
inline InternalData bott_duffin_internal() {
  InternalData d;
  d.theta = MatrixXd(0, 0);
  d.gamma = MatrixXd(6, 0);
  d.phi = VectorXd((VectorXd(6) << 0.5, 0.75, 1.0 / 6.0, 2.0 / 3.0, 3.0, 2.0).finished()).asDiagonal();
  d.sigma_int_dagger = Signature(std::vector<int>{});
  d.sigma_int = Signature({-1, -1, -1, 1, 1, 1});
  d.sigma_ext = Signature({-1});
  d.n_C = 3;
  d.n_L = 3;
  d.P = MatrixXd::Identity(7, 7);
  return d;
}

inline std::pair<StructuredRealization, InternalData> single_capacitor(double c) {
  MatrixXd A = MatrixXd::Zero(1, 1), B(1, 1), C(1, 1), D = MatrixXd::Zero(1, 1);
  B << 1 / std::sqrt(c);
  C << 1 / std::sqrt(c);
  InternalData d;
  d.theta = MatrixXd(0, 0);
  d.gamma = MatrixXd(1, 0);
  d.phi = MatrixXd::Constant(1, 1, c);
  d.sigma_int_dagger = Signature(std::vector<int>{});
  d.sigma_int = Signature({1});
  d.sigma_ext = Signature({-1});
  d.n_C = 1;
  d.n_L = 0;
  d.P = MatrixXd::Identity(2, 2);
  return {StructuredRealization(A, B, C, D), d};
}

/// Random LCT plant with D = 0.
inline StructuredRealization random_lct(std::mt19937_64& rng) {
  const int n1 = randint(rng, 1, 4), n2 = randint(rng, 0, 3);
  const int m1 = randint(rng, 0, 2), m2 = randint(rng, 1, 2);
  for (;;) {
    StructuredRealization r =
        reduce_to_controllable(build_lct(randn(rng, n1, n2), randn(rng, n1, m2), randn(rng, n2, m1)));
    if (r.n() > 0) return r;
  }
}

/// Random plant in generalized form satisfying the signature-symmetric structure and regularity.
inline GeneralizedPlant random_symmetric_plant(std::mt19937_64& rng, int n) {
  const int k = randint(rng, 1, 3), nu = randint(rng, 1, 3);
  const Signature si = random_signature(rng, n), sa = random_signature(rng, k), sb = random_signature(rng, nu),
                  sk = random_signature(rng, nu);
  const MatrixXd S = randn(rng, n, n);
  const MatrixXd Si = si.matrix(), Sa = sa.matrix(), Sb = sb.matrix(), SK = sk.matrix();
  GeneralizedPlant g;
  g.A = Si * (S + S.transpose()) * 0.5;
  const MatrixXd B1a = randn(rng, n, k);
  g.B1 = MatrixXd::Zero(n, k + nu);
  g.B1.leftCols(k) = B1a;
  g.B2 = randn(rng, n, nu);
  g.C1 = MatrixXd::Zero(k + nu, n);
  g.C1.topRows(k) = -Sa * B1a.transpose() * Si;
  g.D11 = MatrixXd::Zero(k + nu, k + nu);
  g.D12 = MatrixXd::Zero(k + nu, nu);
  g.D12.bottomRows(nu).setIdentity();
  g.C2 = -SK * g.B2.transpose() * Si;
  g.D21 = MatrixXd::Zero(nu, k + nu);
  g.D21.rightCols(nu) = SK * Sb;
  g.D22 = MatrixXd::Zero(nu, nu);
  g.sigma_int = si;
  g.sigma_ext = sa.concat(sb);
  g.sigma_K = sk;
  return g;
}

/// Random strict RLT (rlt = true) or RCT instance.
inline StructuredRealization random_lossy(std::mt19937_64& rng, bool rlt) {
  const int n = randint(rng, 1, 8), k = randint(rng, 1, 3), l = randint(rng, 1, 3);
  const MatrixXd R = randn(rng, n, n);
  const MatrixXd A = -(R * R.transpose() + 0.5 * MatrixXd::Identity(n, n));
  const MatrixXd B1 = randn(rng, n, k), B2 = randn(rng, n, l);
  const MatrixXd P1 = randn(rng, k, k), P2 = randn(rng, l, l);
  const MatrixXd Ainv = A.inverse();
  MatrixXd D11 = P1 * P1.transpose() * 0.5, D22 = P2 * P2.transpose() * 0.5;
  if (rlt)
    D22 += -B2.transpose() * Ainv * B2 + 0.1 * MatrixXd::Identity(l, l);
  else
    D11 += -B1.transpose() * Ainv * B1 + 0.1 * MatrixXd::Identity(k, k);
  const MatrixXd D12 = randn(rng, k, l);
  return rlt ? build_rlt(A, B1, B2, D11, D12, D22) : build_rct(A, B1, B2, D11, D12, D22);
}

/// Random connected weighted Laplacian.
inline MatrixXd random_laplacian(std::mt19937_64& rng, int n) {
  MatrixXd L = MatrixXd::Zero(n, n);
  auto link = [&](int i, int j) {
    const double w = uniform(rng, 0.5, 3.0);
    L(i, j) -= w;
    L(j, i) -= w;
    L(i, i) += w;
    L(j, j) += w;
  };
  for (int i = 1; i < n; ++i) link(i, randint(rng, 0, i - 1));
  for (int extra = randint(rng, 0, n); extra > 0; --extra) {
    const int i = randint(rng, 0, n - 1), j = randint(rng, 0, n - 1);
    if (i != j && L(i, j) == 0.0) link(i, j);
  }
  return L;
}

struct RandomGrid {
  MatrixXd L;
  std::vector<int> renewable;
  std::map<int, double> inertias;
};

inline RandomGrid random_grid(std::mt19937_64& rng, int n) {
  RandomGrid g;
  g.L = random_laplacian(rng, n);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  const int q = randint(rng, 1, std::max(1, n / 3));
  const int machines = randint(rng, 1, std::max(1, (n - q) / 2));
  g.renewable.assign(perm.begin(), perm.begin() + q);
  for (int i = 0; i < machines && q + i < n; ++i) g.inertias[perm[q + i]] = uniform(rng, 0.5, 4.0);
  return g;
}

/// Random series-parallel resistor one-port with a face embedding.
inline Netlist random_series_parallel(std::mt19937_64& rng, int ops) {
  struct E {
    std::string a, b;
    double r;
  };
  std::vector<E> es{{"1", "2", uniform(rng, 0.5, 5.0)}, {"2", "0", uniform(rng, 0.5, 5.0)}};
  std::vector<std::vector<std::string>> faces{{"1", "0", "2"}, {"1", "2", "0"}};
  int next = 3;
  auto adjacent = [](const std::vector<std::string>& f, const std::string& u, const std::string& v) {
    for (size_t i = 0; i < f.size(); ++i)
      if (f[i] == u && f[(i + 1) % f.size()] == v) return static_cast<int>(i);
    return -1;
  };
  for (int op = 0; op < ops; ++op) {
    const int ei = randint(rng, 0, static_cast<int>(es.size()) - 1);
    const E e = es[ei];
    const std::string w = std::to_string(next++);
    if (randint(rng, 0, 1) == 0) {
      // Series: split the edge at a new node.
      es[ei] = {e.a, w, uniform(rng, 0.5, 5.0)};
      es.push_back({w, e.b, uniform(rng, 0.5, 5.0)});
      for (auto& f : faces) {
        int i = adjacent(f, e.a, e.b);
        if (i < 0) i = adjacent(f, e.b, e.a);
        if (i >= 0) f.insert(f.begin() + i + 1, w);
      }
    } else {
      // Parallel: a new two-resistor path beside the edge.
      es.push_back({e.a, w, uniform(rng, 0.5, 5.0)});
      es.push_back({w, e.b, uniform(rng, 0.5, 5.0)});
      for (auto& f : faces) {
        int i = adjacent(f, e.a, e.b);
        if (i >= 0) {
          f.insert(f.begin() + i + 1, w);
          faces.push_back({e.a, e.b, w});
          break;
        }
        i = adjacent(f, e.b, e.a);
        if (i >= 0) {
          f.insert(f.begin() + i + 1, w);
          faces.push_back({e.b, e.a, w});
          break;
        }
      }
    }
  }
  std::string text;
  for (const auto& e : es) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "R %s %s %.17g\n", e.a.c_str(), e.b.c_str(), e.r);
    text += buf;
  }
  text += "P 1 0\n";
  for (const auto& f : faces) {
    text += "F";
    for (const auto& v : f) text += " " + v;
    text += "\n";
  }
  return parse_netlist(text);
}

/// Isomorphism of resistor/port multigraphs that fixes node "0" and preserves values.
inline bool isomorphic(const Netlist& a, const Netlist& b, double tol = 1e-12) {
  if (a.nodes.size() != b.nodes.size() || a.elements.size() != b.elements.size() || a.ports.size() != b.ports.size())
    return false;
  struct Arc {
    std::string u, v;
    double w;  // resistance, or -1 for a port
  };
  auto arcs = [](const Netlist& n) {
    std::vector<Arc> out;
    for (const auto& e : n.elements) out.push_back({e.nodes[0], e.nodes[1], e.value});
    for (const auto& p : n.ports) out.push_back({p.plus, p.minus, -1.0});
    return out;
  };
  const auto ea = arcs(a), eb = arcs(b);
  std::map<std::string, std::string> fwd;
  std::set<std::string> used;
  fwd["0"] = "0";
  used.insert("0");
  auto count_between = [&](const std::vector<Arc>& es, const std::string& x, const std::string& y, double w) {
    int c = 0;
    for (const auto& e : es)
      if (((e.u == x && e.v == y) || (e.u == y && e.v == x)) && std::abs(e.w - w) <= tol * (1 + std::abs(w))) ++c;
    return c;
  };
  auto consistent = [&]() {
    for (const auto& e : ea) {
      auto iu = fwd.find(e.u), iv = fwd.find(e.v);
      if (iu == fwd.end() || iv == fwd.end()) continue;
      if (count_between(ea, e.u, e.v, e.w) != count_between(eb, iu->second, iv->second, e.w)) return false;
    }
    return true;
  };
  std::vector<std::string> order;
  for (const auto& n : a.nodes)
    if (n != "0") order.push_back(n);
  std::function<bool(size_t)> search = [&](size_t i) -> bool {
    if (i == order.size()) return true;
    for (const auto& cand : b.nodes) {
      if (used.count(cand)) continue;
      fwd[order[i]] = cand;
      used.insert(cand);
      if (consistent() && search(i + 1)) return true;
      used.erase(cand);
      fwd.erase(order[i]);
    }
    return false;
  };
  return search(0);
}

}  // namespace rlct::testing
