#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include "rlct/netgraph.hpp"

namespace rlct {

namespace {

struct Edge {
  std::string a, b;
  bool is_port;
  int index;  // element or port index
};

std::vector<Edge> embedded_edges(const Netlist& net) {
  std::vector<Edge> edges;
  for (size_t i = 0; i < net.elements.size(); ++i) {
    const auto& e = net.elements[i];
    if (e.kind == ElementKind::T) fail(ErrorKind::Structure, "transformers cannot be placed in a planar embedding");
    edges.push_back(Edge{e.nodes[0], e.nodes[1], false, static_cast<int>(i)});
  }
  for (size_t i = 0; i < net.ports.size(); ++i)
    edges.push_back(Edge{net.ports[i].plus, net.ports[i].minus, true, static_cast<int>(i)});
  return edges;
}

int dart_id(const Dart& d) { return 2 * d.edge + (d.forward ? 0 : 1); }
Dart from_id(int id) { return Dart{id / 2, id % 2 == 0}; }

const std::string& tail(const std::vector<Edge>& edges, const Dart& d) {
  return d.forward ? edges[d.edge].a : edges[d.edge].b;
}

// Face cycles of the map after deleting `removed` edges, keeping the first face's identity.
std::vector<std::vector<Dart>> delete_edges(const std::vector<std::vector<Dart>>& faces, int num_edges,
                                            const std::vector<bool>& removed) {
  const int nd = 2 * num_edges;
  std::vector<int> phi(nd, -1);
  for (const auto& f : faces)
    for (size_t i = 0; i < f.size(); ++i) phi[dart_id(f[i])] = dart_id(f[(i + 1) % f.size()]);
  // sigma(d) = phi(theta(d)) rotates darts around their tail vertex.
  std::vector<int> sigma(nd, -1);
  for (int d = 0; d < nd; ++d)
    if (phi[d ^ 1] >= 0) sigma[d] = phi[d ^ 1];
  // Drop removed darts from every rotation cycle.
  std::vector<int> sig2(nd, -1);
  for (int d = 0; d < nd; ++d) {
    if (sigma[d] < 0 || removed[d / 2]) continue;
    int nx = sigma[d];
    while (removed[nx / 2]) nx = sigma[nx];
    sig2[d] = nx;
  }
  // phi = sigma o theta
  std::vector<int> phi2(nd, -1);
  for (int d = 0; d < nd; ++d)
    if (sig2[d ^ 1] >= 0) phi2[d] = sig2[d ^ 1];
  std::vector<std::vector<Dart>> out;
  std::vector<bool> seen(nd, false);
  auto trace = [&](int start) {
    std::vector<Dart> cyc;
    int d = start;
    while (!seen[d]) {
      seen[d] = true;
      cyc.push_back(from_id(d));
      d = phi2[d];
    }
    return cyc;
  };
  // Keep the original face order, seeding each from its first surviving dart.
  for (const auto& f : faces) {
    for (const auto& d : f) {
      const int id = dart_id(d);
      if (!removed[d.edge] && !seen[id] && phi2[id] >= 0) {
        out.push_back(trace(id));
        break;
      }
    }
  }
  for (int d = 0; d < nd; ++d)
    if (!seen[d] && phi2[d] >= 0) out.push_back(trace(d));
  return out;
}


std::vector<std::string> node_cycle(const std::vector<Edge>& edges, const std::vector<Dart>& face) {
  std::vector<std::string> cyc;
  for (const auto& d : face) cyc.push_back(tail(edges, d));
  return cyc;
}

// Orients the faces consistently and checks rotations and Euler's formula; returns an error or "".
std::string orient_and_check(const std::vector<Edge>& edges, std::vector<std::vector<Dart>>& faces) {
  const int ne = static_cast<int>(edges.size());
  const int nf = static_cast<int>(faces.size());
  std::vector<std::vector<std::pair<int, bool>>> occ(ne);  // (face, forward)
  for (int f = 0; f < nf; ++f)
    for (const auto& d : faces[f]) occ[d.edge].push_back({f, d.forward});
  for (int e = 0; e < ne; ++e)
    if (occ[e].size() != 2)
      return "edge " + edges[e].a + "-" + edges[e].b + " lies on " + std::to_string(occ[e].size()) +
             " face sides (expected 2)";
  std::vector<std::vector<std::pair<int, int>>> adj(nf);  // neighbour, required flip parity
  for (int e = 0; e < ne; ++e) {
    const auto [f1, d1] = occ[e][0];
    const auto [f2, d2] = occ[e][1];
    if (f1 == f2) {
      if (d1 == d2) return "face traverses edge " + edges[e].a + "-" + edges[e].b + " twice in one direction";
      continue;
    }
    const int par = d1 == d2 ? 1 : 0;
    adj[f1].push_back({f2, par});
    adj[f2].push_back({f1, par});
  }
  std::vector<int> flip(nf, -1);
  for (int s = 0; s < nf; ++s) {
    if (flip[s] >= 0) continue;
    flip[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int f = q.front();
      q.pop();
      for (auto [g, par] : adj[f]) {
        const int want = flip[f] ^ par;
        if (flip[g] < 0) {
          flip[g] = want;
          q.push(g);
        } else if (flip[g] != want) {
          return "face orientations cannot be made consistent";
        }
      }
    }
  }
  for (int f = 0; f < nf; ++f) {
    if (!flip[f]) continue;
    auto& fc = faces[f];
    std::reverse(fc.begin(), fc.end());
    for (auto& d : fc) d.forward = !d.forward;
  }

  // Vertex rotations must match the graph's vertices, and Euler's formula must hold.
  const int nd = 2 * ne;
  std::vector<int> phi(nd, -1);
  for (const auto& f : faces)
    for (size_t i = 0; i < f.size(); ++i) phi[dart_id(f[i])] = dart_id(f[(i + 1) % f.size()]);
  std::vector<bool> seen(nd, false);
  std::set<std::string> verts;
  int orbits = 0;
  for (int d = 0; d < nd; ++d) {
    if (seen[d]) continue;
    ++orbits;
    const std::string& v = tail(edges, from_id(d));
    verts.insert(v);
    int x = d;
    while (!seen[x]) {
      seen[x] = true;
      if (tail(edges, from_id(x)) != v) return "face cycles do not close around vertex " + v;
      x = phi[x ^ 1];
    }
  }
  if (orbits != static_cast<int>(verts.size())) return "faces do not define a consistent rotation at every vertex";
  const int euler = static_cast<int>(verts.size()) - ne + nf;
  if (euler != 2) return "Euler check failed: V - E + F = " + std::to_string(euler) + " (expected 2)";
  return {};
}

}  // namespace

std::vector<std::vector<Dart>> embedding_darts(const Netlist& net) {
  if (net.faces.empty()) fail(ErrorKind::Structure, "netlist has no planar embedding");
  const auto edges = embedded_edges(net);
  const int ne = static_cast<int>(edges.size());
  const int nf = static_cast<int>(net.faces.size());
  std::map<std::pair<std::string, std::string>, int> class_of;
  std::vector<std::vector<int>> members;
  for (int e = 0; e < ne; ++e) {
    auto [it, fresh] = class_of.emplace(std::minmax(edges[e].a, edges[e].b), static_cast<int>(members.size()));
    if (fresh) members.emplace_back();
    members[it->second].push_back(e);
  }

  // Face sides as (face, class, u, w).
  struct Side {
    int face, cls;
    std::string u, w;
  };
  std::vector<std::vector<Side>> sides(nf);
  std::vector<std::vector<std::pair<int, int>>> by_class(members.size());  // (face, position)
  size_t total = 0;
  for (int f = 0; f < nf; ++f) {
    const auto& cyc = net.faces[f];
    for (size_t i = 0; i < cyc.size(); ++i) {
      const std::string& u = cyc[i];
      const std::string& w = cyc[(i + 1) % cyc.size()];
      auto it = class_of.find(std::minmax(u, w));
      if (u == w || it == class_of.end())
        fail(ErrorKind::Structure, "face " + std::to_string(f) + ": no edge joins " + u + " and " + w);
      sides[f].push_back(Side{f, it->second, u, w});
      by_class[it->second].push_back({f, static_cast<int>(i)});
    }
    total += cyc.size();
  }
  if (static_cast<int>(total) != 2 * ne)
    fail(ErrorKind::Structure, "faces have " + std::to_string(total) + " sides but the " + std::to_string(ne) +
                                   " edges need " + std::to_string(2 * ne));
  for (size_t c = 0; c < members.size(); ++c)
    if (by_class[c].size() != 2 * members[c].size()) {
      const auto& e = edges[members[c][0]];
      fail(ErrorKind::Structure, "edges between " + e.a + " and " + e.b + " lie on " +
                                     std::to_string(by_class[c].size()) + " face sides (expected " +
                                     std::to_string(2 * members[c].size()) + ")");
    }

  // Orientation: a single edge must be traversed in opposite directions by its two sides.
  std::vector<std::vector<std::pair<int, int>>> adj(nf);
  for (size_t c = 0; c < members.size(); ++c) {
    if (members[c].size() != 1) continue;
    const auto [f1, i1] = by_class[c][0];
    const auto [f2, i2] = by_class[c][1];
    const int par = sides[f1][i1].u == sides[f2][i2].u ? 1 : 0;
    if (f1 == f2) {
      if (par) fail(ErrorKind::Structure, "face traverses an edge twice in one direction");
      continue;
    }
    adj[f1].push_back({f2, par});
    adj[f2].push_back({f1, par});
  }
  std::vector<int> flip(nf, -1), comp(nf, -1);
  std::vector<int> roots;
  for (int s0 = 0; s0 < nf; ++s0) {
    if (flip[s0] >= 0) continue;
    const int id = static_cast<int>(roots.size());
    roots.push_back(s0);
    flip[s0] = 0;
    comp[s0] = id;
    std::queue<int> q;
    q.push(s0);
    while (!q.empty()) {
      const int f = q.front();
      q.pop();
      for (auto [g, par] : adj[f]) {
        const int want = flip[f] ^ par;
        if (flip[g] < 0) {
          flip[g] = want;
          comp[g] = id;
          q.push(g);
        } else if (flip[g] != want) {
          fail(ErrorKind::Structure, "face orientations cannot be made consistent");
        }
      }
    }
  }
  // Components joined only through parallel edges: pick flips that balance every class.
  auto balanced = [&](const std::vector<int>& cflip) {
    for (size_t c = 0; c < members.size(); ++c) {
      int forward = 0;
      const std::string& a = edges[members[c][0]].a;
      for (auto [f, i] : by_class[c]) {
        const bool fl = (flip[f] ^ cflip[comp[f]]) != 0;
        forward += ((sides[f][i].u == a) != fl) ? 1 : 0;
      }
      if (forward != static_cast<int>(members[c].size())) return false;
    }
    return true;
  };
  // Only components with a face of three or more sides have a meaningful orientation choice.
  const int nc = static_cast<int>(roots.size());
  std::vector<int> free_comps;
  {
    std::vector<bool> matters(nc, false);
    for (int f = 0; f < nf; ++f)
      if (sides[f].size() > 2) matters[comp[f]] = true;
    for (int c = 1; c < nc; ++c)
      if (matters[c]) free_comps.push_back(c);
  }
  const int free_bits = std::min(static_cast<int>(free_comps.size()), 16);
  const auto base_sides = sides;
  std::vector<int> cflip(nc, 0);
  auto orient = [&](long mask) {
    std::fill(cflip.begin(), cflip.end(), 0);
    for (int k = 0; k < free_bits; ++k) cflip[free_comps[k]] = static_cast<int>((mask >> k) & 1);
    if (!balanced(cflip)) return false;
    sides = base_sides;
    for (int f = 0; f < nf; ++f) {
      if (!(flip[f] ^ cflip[comp[f]])) continue;
      auto& sf = sides[f];
      std::reverse(sf.begin(), sf.end());
      for (auto& sd : sf) std::swap(sd.u, sd.w);
    }
    return true;
  };

  // Assign edges to sides: each edge takes one side per direction, and no vertex rotation may close early.
  std::map<std::string, int> degree;
  for (const auto& e : edges) {
    ++degree[e.a];
    ++degree[e.b];
  }
  // Visit faces breadth-first across shared node pairs so constraints meet early.
  std::vector<int> face_seq;
  {
    std::vector<bool> seen(nf, false);
    for (int s0 = 0; s0 < nf; ++s0) {
      if (seen[s0]) continue;
      seen[s0] = true;
      std::queue<int> q;
      q.push(s0);
      while (!q.empty()) {
        const int f = q.front();
        q.pop();
        face_seq.push_back(f);
        for (const auto& sd : sides[f])
          for (auto [g, pos] : by_class[sd.cls])
            if (!seen[g]) {
              seen[g] = true;
              q.push(g);
            }
      }
    }
  }
  std::vector<std::pair<int, int>> order;
  for (int f : face_seq)
    for (int i = 0; i < static_cast<int>(sides[f].size()); ++i) order.push_back({f, i});
  std::vector<std::vector<int>> pick(nf);
  for (int f = 0; f < nf; ++f) pick[f].assign(sides[f].size(), -1);
  std::vector<std::array<bool, 2>> dir_used(ne, {false, false});
  std::vector<int> sigma(2 * ne, -1);
  auto dart_of = [&](int f, int i) {
    const int e = pick[f][i];
    return 2 * e + (edges[e].a == sides[f][i].u ? 0 : 1);
  };
  // Adds sigma(x) = y and reports whether a rotation closed short of the vertex degree.
  auto link_ok = [&](int x, int y) {
    sigma[x] = y;
    int len = 1, z = y;
    while (z != x) {
      if (sigma[z] < 0) return true;
      z = sigma[z];
      if (++len > 2 * ne) return false;
    }
    return len == degree[tail(edges, from_id(x))];
  };
  // With slots [0, assigned) filled, a group of faces glued along edges used twice must keep an
  // open side until it contains every face; otherwise it closes into a separate sphere.
  std::vector<int> slot_face(order.size());
  for (size_t k = 0; k < order.size(); ++k) slot_face[k] = order[k].first;
  auto closes_early = [&](size_t assigned) {
    std::vector<int> parent(nf);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::vector<int> first(ne, -1), uses(ne, 0);
    for (size_t k = 0; k < assigned; ++k) {
      const int e = pick[order[k].first][order[k].second];
      if (uses[e]++ == 0)
        first[e] = slot_face[k];
      else
        parent[find(first[e])] = find(slot_face[k]);
    }
    std::vector<int> open(nf, 0), size(nf, 0);
    for (int f = 0; f < nf; ++f) ++size[find(f)];
    for (size_t k = assigned; k < order.size(); ++k) ++open[find(slot_face[k])];
    for (int e = 0; e < ne; ++e)
      if (uses[e] == 1) ++open[find(first[e])];
    for (int f = 0; f < nf; ++f)
      if (find(f) == f && open[f] == 0 && size[f] < nf) return true;
    return false;
  };
  long steps = 0;
  const long max_steps = 200000;
  std::function<bool(size_t)> search = [&](size_t k) -> bool {
    if (k == order.size()) return true;
    if (++steps > max_steps) return false;
    const auto [f, i] = order[k];
    const Side& sd = sides[f][i];
    std::vector<int> cands;
    for (int e : members[sd.cls])
      if (!dir_used[e][edges[e].a == sd.u ? 0 : 1]) cands.push_back(e);
    std::stable_sort(cands.begin(), cands.end(),
                     [&](int x, int y) { return edges[x].is_port > edges[y].is_port; });
    const int len = static_cast<int>(sides[f].size());
    for (int e : cands) {
      const int dir = edges[e].a == sd.u ? 0 : 1;
      dir_used[e][dir] = true;
      pick[f][i] = e;
      std::vector<int> undo;
      bool ok = true;
      // Consecutive sides d, d' of a face give sigma(reverse(d)) = d'.
      if (i > 0) {
        const int x = dart_of(f, i - 1) ^ 1;
        undo.push_back(x);
        ok = link_ok(x, dart_of(f, i));
      }
      if (ok && i == len - 1) {
        const int x = dart_of(f, i) ^ 1;
        undo.push_back(x);
        ok = link_ok(x, dart_of(f, 0));
      }
      ok = ok && !closes_early(k + 1);
      if (ok && search(k + 1)) return true;
      for (int x : undo) sigma[x] = -1;
      pick[f][i] = -1;
      dir_used[e][dir] = false;
      if (steps > max_steps) return false;
    }
    return false;
  };
  // Any orientation-consistent pairing of sides that keeps the faces connected is a sphere whose
  // vertices match the labels (Euler characteristic), so pair greedily across components first.
  std::vector<int> class_seq;
  {
    std::vector<bool> seen(members.size(), false);
    for (const auto& [f, i] : order)
      if (!seen[sides[f][i].cls]) {
        seen[sides[f][i].cls] = true;
        class_seq.push_back(sides[f][i].cls);
      }
  }
  using SlotRef = std::pair<int, int>;
  using Link = std::pair<SlotRef, SlotRef>;
  auto greedy = [&]() {
    std::map<SlotRef, int> rank_of;  // position in the visiting order
    for (size_t k = 0; k < order.size(); ++k) rank_of[order[k]] = static_cast<int>(k);
    std::vector<int> parent(nf);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::vector<std::vector<Link>> links(members.size());
    for (int c : class_seq) {
      const std::string& lo = std::min(edges[members[c][0]].a, edges[members[c][0]].b);
      std::vector<SlotRef> fwd, bwd;
      for (auto [f, i] : by_class[c]) {
        const int pos = (flip[f] ^ cflip[comp[f]]) ? static_cast<int>(sides[f].size()) - 1 - i : i;
        (sides[f][pos].u == lo ? fwd : bwd).push_back({f, pos});
      }
      if (fwd.size() != bwd.size()) return false;
      auto by_rank = [&](const SlotRef& x, const SlotRef& y) { return rank_of[x] < rank_of[y]; };
      std::sort(fwd.begin(), fwd.end(), by_rank);
      std::sort(bwd.begin(), bwd.end(), by_rank);
      std::vector<bool> used(bwd.size(), false);
      for (const auto& fs : fwd) {
        int choice = -1;
        for (size_t j = 0; j < bwd.size(); ++j)
          if (!used[j] && (choice < 0 || (find(bwd[choice].first) == find(fs.first) &&
                                          find(bwd[j].first) != find(fs.first))))
            choice = static_cast<int>(j);
        used[choice] = true;
        parent[find(fs.first)] = find(bwd[choice].first);
        links[c].push_back({fs, bwd[choice]});
      }
    }

    // Repair: swapping partners of two same-class links in different components merges them
    // whenever one of the links lies on a cycle.
    for (int round = 0; round < 4 * nf + 16; ++round) {
      struct Arc {
        int to, id;
      };
      std::vector<std::vector<Arc>> g(nf);
      std::vector<std::pair<int, int>> ids;  // (class, link index)
      for (size_t c = 0; c < links.size(); ++c)
        for (size_t k = 0; k < links[c].size(); ++k) {
          const int x = links[c][k].first.first, y = links[c][k].second.first, id = static_cast<int>(ids.size());
          ids.push_back({static_cast<int>(c), static_cast<int>(k)});
          g[x].push_back({y, id});
          g[y].push_back({x, id});
        }
      std::vector<int> cid(nf, -1), tin(nf, -1), low(nf, 0);
      std::vector<bool> bridge(ids.size(), false);
      int timer = 0, ncomp = 0;
      std::function<void(int, int)> dfs = [&](int v, int via) {
        tin[v] = low[v] = timer++;
        cid[v] = ncomp;
        for (const auto& a : g[v]) {
          if (a.id == via) continue;
          if (tin[a.to] >= 0) {
            low[v] = std::min(low[v], tin[a.to]);
          } else {
            dfs(a.to, a.id);
            low[v] = std::min(low[v], low[a.to]);
            if (low[a.to] > tin[v]) bridge[a.id] = true;
          }
        }
      };
      for (int v = 0; v < nf; ++v)
        if (tin[v] < 0) {
          dfs(v, -1);
          ++ncomp;
        }
      if (ncomp == 1) break;
      bool swapped = false;
      for (size_t c = 0; c < links.size() && !swapped; ++c) {
        auto& lc = links[c];
        for (size_t p = 0; p < lc.size() && !swapped; ++p)
          for (size_t q = 0; q < lc.size() && !swapped; ++q) {
            if (cid[lc[p].first.first] == cid[lc[q].first.first]) continue;
            int idp = -1;
            for (size_t t = 0; t < ids.size(); ++t)
              if (ids[t] == std::make_pair(static_cast<int>(c), static_cast<int>(p))) idp = static_cast<int>(t);
            if (bridge[idp]) continue;
            std::swap(lc[p].second, lc[q].second);
            swapped = true;
          }
      }
      if (!swapped) return false;
    }

    // Edges go to links in visiting order, ports first.
    for (size_t c = 0; c < links.size(); ++c) {
      auto& lc = links[c];
      std::sort(lc.begin(), lc.end(), [&](const Link& x, const Link& y) {
        return std::min(rank_of[x.first], rank_of[x.second]) < std::min(rank_of[y.first], rank_of[y.second]);
      });
      std::vector<int> pool = members[c];
      std::stable_sort(pool.begin(), pool.end(), [&](int x, int y) { return edges[x].is_port > edges[y].is_port; });
      for (size_t k = 0; k < lc.size(); ++k) {
        pick[lc[k].first.first][lc[k].first.second] = pool[k];
        pick[lc[k].second.first][lc[k].second.second] = pool[k];
      }
    }
    return true;
  };

  bool any_balanced = false, solved = false;
  for (long mask = 0; mask < (1L << free_bits) && !solved; ++mask) {
    if (!orient(mask)) continue;
    any_balanced = true;
    for (int f = 0; f < nf; ++f) std::fill(pick[f].begin(), pick[f].end(), -1);
    if (greedy()) {
      std::vector<std::vector<Dart>> faces(nf);
      for (int f = 0; f < nf; ++f)
        for (int i = 0; i < static_cast<int>(sides[f].size()); ++i) faces[f].push_back(from_id(dart_of(f, i)));
      if (orient_and_check(edges, faces).empty()) return faces;
    }
    for (int f = 0; f < nf; ++f) std::fill(pick[f].begin(), pick[f].end(), -1);
    std::fill(dir_used.begin(), dir_used.end(), std::array<bool, 2>{false, false});
    std::fill(sigma.begin(), sigma.end(), -1);
    steps = 0;
    solved = search(0);
  }
  if (!any_balanced) fail(ErrorKind::Structure, "face orientations cannot be made consistent");
  if (!solved)
    fail(ErrorKind::Structure, steps > max_steps ? "face assignment search exceeded its step limit"
                                                 : "faces do not define a consistent rotation at every vertex");

  std::vector<std::vector<Dart>> faces(nf);
  for (int f = 0; f < nf; ++f)
    for (int i = 0; i < static_cast<int>(sides[f].size()); ++i) faces[f].push_back(from_id(dart_of(f, i)));
  const std::string err = orient_and_check(edges, faces);
  if (!err.empty()) fail(ErrorKind::Structure, err);
  return faces;
}

Netlist open_circuit_capacitors(const Netlist& net) {
  Netlist out = net;
  std::vector<bool> removed;
  for (const auto& e : net.elements) removed.push_back(e.kind == ElementKind::C);
  out.elements.clear();
  for (const auto& e : net.elements)
    if (e.kind != ElementKind::C) out.elements.push_back(e);
  if (net.faces.empty() || std::none_of(removed.begin(), removed.end(), [](bool b) { return b; })) return out;

  const auto edges = embedded_edges(net);
  removed.resize(edges.size(), false);
  const auto faces = delete_edges(embedding_darts(net), static_cast<int>(edges.size()), removed);
  out.faces.clear();
  for (const auto& f : faces) out.faces.push_back(node_cycle(edges, f));
  return out;
}

namespace {

// Node-cycle faces cannot name one of several parallel edges, so the parsed embedding may differ from
// the intended one. Match the two as rooted maps and move resistor values onto the parsed positions.
bool match_parallel_edges(Netlist& net, const std::vector<std::vector<Dart>>& intended) {
  const auto parsed = embedding_darts(net);
  const auto edges = embedded_edges(net);
  const int nd = 2 * static_cast<int>(edges.size());
  auto successor = [nd](const std::vector<std::vector<Dart>>& faces) {
    std::vector<int> phi(nd, -1), face(nd, -1);
    for (size_t f = 0; f < faces.size(); ++f)
      for (size_t i = 0; i < faces[f].size(); ++i) {
        phi[dart_id(faces[f][i])] = dart_id(faces[f][(i + 1) % faces[f].size()]);
        face[dart_id(faces[f][i])] = static_cast<int>(f);
      }
    return std::make_pair(phi, face);
  };
  const auto [phi_i, face_i] = successor(intended);
  if (net.ports.empty() || intended.empty()) return false;
  const int port = static_cast<int>(net.elements.size());

  // A mirrored embedding has the same dual graph, so try the parse in both orientations.
  auto mirrored = parsed;
  for (auto& f : mirrored) {
    std::reverse(f.begin(), f.end());
    for (auto& d : f) d.forward = !d.forward;
  }
  std::vector<int> to;
  auto try_match = [&](const std::vector<std::vector<Dart>>& faces) {
    const auto [phi_p, face_p] = successor(faces);
    for (int root : {2 * port, 2 * port + 1}) {
      if (face_i[root] != 0 || face_p[root] != 0) continue;
      to.assign(nd, -1);
      std::vector<int> stack{root};
      to[root] = root;
      auto bind = [&](int x, int y) {
        if (x < 0 || y < 0) return false;
        if (to[x] >= 0) return to[x] == y;
        if (edges[x / 2].is_port != edges[y / 2].is_port) return false;
        if (tail(edges, from_id(x)) != tail(edges, from_id(y))) return false;
        to[x] = y;
        stack.push_back(x);
        return true;
      };
      bool ok = true;
      while (ok && !stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        ok = bind(phi_p[x], phi_i[to[x]]) && bind(x ^ 1, to[x] ^ 1);
      }
      if (ok && std::find(to.begin(), to.end(), -1) == to.end()) return true;
    }
    return false;
  };
  if (!try_match(parsed) && !try_match(mirrored)) return false;
  std::vector<double> values(net.elements.size());
  for (size_t e = 0; e < net.elements.size(); ++e) values[e] = net.elements[to[2 * static_cast<int>(e)] / 2].value;
  for (size_t e = 0; e < net.elements.size(); ++e) net.elements[e].value = values[e];
  return true;
}

// Rewrites the dual with inner faces and elements in the given orders, keeping `intended` in step.
Netlist reorder_dual(const Netlist& dual, const std::vector<int>& face_order, const std::vector<int>& elem_order,
                     std::vector<std::vector<Dart>>& intended) {
  Netlist out;
  out.nodes = dual.nodes;
  const int ne = static_cast<int>(dual.elements.size());
  std::vector<int> new_index(ne + dual.ports.size());
  for (int k = 0; k < ne; ++k) {
    const auto& el = dual.elements[elem_order[k]];
    out.add(el.kind, el.nodes[0], el.nodes[1], el.value);
    new_index[elem_order[k]] = k;
  }
  for (size_t k = 0; k < dual.ports.size(); ++k) {
    out.add_port(dual.ports[k].plus, dual.ports[k].minus);
    new_index[ne + k] = ne + static_cast<int>(k);
  }
  std::vector<std::vector<Dart>> moved;
  for (int f : face_order) {
    out.faces.push_back(dual.faces[f]);
    moved.push_back(intended[f]);
    for (auto& d : moved.back()) d.edge = new_index[d.edge];
  }
  intended = std::move(moved);
  return out;
}

}  // namespace

Netlist planar_dual(const Netlist& net) {
  if (net.faces.empty()) fail(ErrorKind::Structure, "planar_dual requires a face embedding (F lines)");
  for (const auto& e : net.elements)
    if (e.kind != ElementKind::R)
      fail(ErrorKind::Structure, "planar_dual requires a resistor-only network; open-circuit capacitors first");
  const auto edges = embedded_edges(net);
  const int ne = static_cast<int>(edges.size());
  auto faces = embedding_darts(net);

  // Prune hanging branches: repeatedly drop elements at degree-1 non-port nodes.
  std::set<std::string> port_nodes;
  for (const auto& p : net.ports) {
    port_nodes.insert(p.plus);
    port_nodes.insert(p.minus);
  }
  std::vector<bool> removed(ne, false);
  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::string, int> degree;
    for (int e = 0; e < ne; ++e) {
      if (removed[e]) continue;
      ++degree[edges[e].a];
      ++degree[edges[e].b];
    }
    for (int e = 0; e < ne; ++e) {
      if (removed[e] || edges[e].is_port) continue;
      for (const auto* v : {&edges[e].a, &edges[e].b}) {
        if (degree[*v] == 1 && !port_nodes.count(*v)) {
          removed[e] = true;
          changed = true;
          break;
        }
      }
      if (changed) break;
    }
  }
  if (std::any_of(removed.begin(), removed.end(), [](bool b) { return b; }))
    faces = delete_edges(faces, ne, removed);

  std::vector<int> face_of(2 * ne, -1);
  for (size_t f = 0; f < faces.size(); ++f)
    for (const auto& d : faces[f]) face_of[dart_id(d)] = static_cast<int>(f);
  auto face_name = [](int f) { return f == 0 ? std::string("0") : "f" + std::to_string(f); };

  Netlist dual;
  dual.nodes.push_back("0");
  for (int e = 0; e < ne; ++e) {
    if (removed[e]) continue;
    const int fl = face_of[2 * e], fr = face_of[2 * e + 1];
    if (fl < 0 || fr < 0 || fl == fr) {
      const std::string what = edges[e].is_port ? "port " : "element ";
      fail(ErrorKind::Structure, what + std::to_string(edges[e].index) + " (" + edges[e].a + "-" + edges[e].b +
                                     ") is adjacent to fewer than two faces after hanging-branch removal");
    }
  }
  for (int e = 0; e < ne; ++e) {
    if (removed[e] || edges[e].is_port) continue;
    const double r = net.elements[edges[e].index].value;
    dual.add(ElementKind::R, face_name(face_of[2 * e]), face_name(face_of[2 * e + 1]), 1.0 / r);
  }
  for (int e = 0; e < ne; ++e) {
    if (!edges[e].is_port) continue;
    dual.add_port(face_name(face_of[2 * e]), face_name(face_of[2 * e + 1]));
  }

  // Dual faces: one per surviving primal vertex, traced by sigma = phi o theta.
  std::vector<int> phi(2 * ne, -1);
  for (const auto& f : faces)
    for (size_t i = 0; i < f.size(); ++i) phi[dart_id(f[i])] = dart_id(f[(i + 1) % f.size()]);
  std::map<std::string, int> start;
  for (int d = 0; d < 2 * ne; ++d) {
    if (removed[d / 2]) continue;
    start.emplace(tail(edges, from_id(d)), d);
  }
  // Start each dual face at a port side so the parser's port preference picks the intended edge.
  for (int d = 0; d < 2 * ne; ++d)
    if (!removed[d / 2] && edges[d / 2].is_port) start[tail(edges, from_id(d))] = d;
  std::vector<std::string> order;
  if (start.count("0")) order.push_back("0");
  for (const auto& n : net.nodes)
    if (n != "0" && start.count(n)) order.push_back(n);
  std::vector<int> dual_index(ne, -1);
  {
    int k = 0;
    for (int e = 0; e < ne; ++e)
      if (!removed[e] && !edges[e].is_port) dual_index[e] = k++;
    for (int e = 0; e < ne; ++e)
      if (!removed[e] && edges[e].is_port) dual_index[e] = k++;
  }
  std::vector<std::vector<Dart>> intended;
  for (const auto& v : order) {
    std::vector<std::string> cyc;
    intended.emplace_back();
    int d = start[v];
    const int d0 = d;
    do {
      cyc.push_back(face_name(face_of[d]));
      intended.back().push_back(Dart{dual_index[d / 2], d % 2 == 0});
      d = phi[d ^ 1];
    } while (d != d0);
    dual.faces.push_back(std::move(cyc));
  }
  // Node-cycle faces can admit several embeddings; try a few written orders until the parse
  // reproduces the intended one.
  const int nf = static_cast<int>(dual.faces.size());
  const int nel = static_cast<int>(dual.elements.size());
  std::vector<int> face_order(nf), elem_order(nel);
  std::mt19937 shuffler(0x5eed);
  for (int attempt = 0; attempt < 2000; ++attempt) {
    std::iota(face_order.begin(), face_order.end(), 0);
    std::iota(elem_order.begin(), elem_order.end(), 0);
    if (attempt > 0) {
      std::shuffle(face_order.begin() + 1, face_order.end(), shuffler);
      std::shuffle(elem_order.begin(), elem_order.end(), shuffler);
    }
    auto want = intended;
    Netlist candidate = reorder_dual(dual, face_order, elem_order, want);
    if (match_parallel_edges(candidate, want)) return candidate;
  }
  return dual;
}

}  // namespace rlct
