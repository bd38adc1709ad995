#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlct/internal_map.hpp"
#include "rlct/netgraph.hpp"
#include "rlct/riccati.hpp"
#include "rlct/serialize.hpp"
#include "rlct/simulate.hpp"
#include "rlct/structured_ss.hpp"
#include "rlct/sweep.hpp"
#include "rlct/synthesis.hpp"

using namespace rlct;
using nlohmann::json;

namespace {

struct Common {
  std::string out;
  std::string trace;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "Write the result to this file instead of stdout");
  cmd->add_option("--trace", c.trace, "Write time or frequency data as CSV");
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty())
    std::cout << text;
  else
    write_file(c.out, text);
}

void report(const std::string& line) { std::cerr << line << '\n'; }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<double> trace_frequencies() { return logspace(1e-3, 1e3, 200); }

CsvTable response_table(const std::vector<double>& omegas, const std::vector<MatrixXcd>& resp) {
  CsvTable t;
  t.header.push_back("omega");
  const Eigen::Index rows = resp.empty() ? 0 : resp.front().rows(), cols = resp.empty() ? 0 : resp.front().cols();
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      const std::string ij = std::to_string(i) + "_" + std::to_string(j);
      t.header.push_back("re_" + ij);
      t.header.push_back("im_" + ij);
    }
  for (size_t k = 0; k < omegas.size(); ++k) {
    std::vector<double> row{omegas[k]};
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) {
        row.push_back(resp[k](i, j).real());
        row.push_back(resp[k](i, j).imag());
      }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void trace_realization(const Common& c, const StructuredRealization& r) {
  if (c.trace.empty()) return;
  const auto w = trace_frequencies();
  write_file(c.trace, write_csv(response_table(w, frequency_sweep(r, w))));
}

void trace_netlist(const Common& c, const Netlist& net, const std::vector<Drive>& drive = {}) {
  if (c.trace.empty()) return;
  const auto w = trace_frequencies();
  std::vector<Complex> pts;
  for (double x : w) pts.emplace_back(0.0, x);
  write_file(c.trace, write_csv(response_table(w, impedance_sweep(net, pts, drive))));
}

void trace_simulation(const Common& c, const SimulationResult& sim) {
  if (c.trace.empty()) return;
  CsvTable t;
  t.header.push_back("t");
  for (Eigen::Index i = 0; i < sim.states.rows(); ++i) t.header.push_back("x" + std::to_string(i));
  for (size_t k = 0; k < sim.times.size(); ++k) {
    std::vector<double> row{sim.times[k]};
    for (Eigen::Index i = 0; i < sim.states.rows(); ++i) row.push_back(sim.states(i, static_cast<Eigen::Index>(k)));
    t.rows.push_back(std::move(row));
  }
  write_file(c.trace, write_csv(t));
}

Netlist load_netlist(const std::string& path) {
  Netlist net = parse_netlist(read_file(path));
  validate_netlist(net);
  return net;
}

std::vector<Drive> drives(const Netlist& net, const std::string& drive) {
  return std::vector<Drive>(net.ports.size(), drive == "voltage" ? Drive::Voltage : Drive::Current);
}

// Largest relative mismatch between a realization and the netlist impedance at 10 points.
double impedance_mismatch(const StructuredRealization& r, const Netlist& net, const std::vector<Drive>& drive) {
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Complex s(0.05 + 0.3 * k, 0.2 + 0.7 * k);
    const MatrixXcd a = transfer_eval(r, s), b = impedance_at(net, s, drive);
    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff()));
  }
  return worst;
}

constexpr double kProbeTol = 1e-8;

int cmd_parse(const std::string& path, const Common& c) {
  const Netlist net = load_netlist(path);
  json doc;
  doc["nodes"] = net.nodes.size();
  doc["R"] = net.count(ElementKind::R);
  doc["L"] = net.count(ElementKind::L);
  doc["C"] = net.count(ElementKind::C);
  doc["T"] = net.count(ElementKind::T);
  json ports = json::array();
  for (const auto& p : net.ports) ports.push_back({p.plus, p.minus});
  doc["ports"] = ports;
  doc["faces"] = net.faces.size();
  emit(c, doc.dump(2) + "\n");
  trace_netlist(c, net);
  return 0;
}

int cmd_realize(const std::string& path, const std::string& drive, const Common& c) {
  const Netlist net = load_netlist(path);
  const std::vector<Drive> dv = drives(net, drive);
  StructuredRealization r = descriptor_to_statespace(mna_descriptor(net, dv));
  if (const auto sig = infer_signatures(r)) r = r.with_signatures(sig->first, sig->second);
  if (validate_structure(r, ClassTag::LCT).pass) r = r.with_tag(ClassTag::LCT);
  const double mismatch = impedance_mismatch(r, net, dv);
  report("states " + std::to_string(r.n()) + ", impedance check max relative error " + fmt(mismatch));
  if (!(mismatch < kProbeTol))
    fail(ErrorKind::Solver, "realization does not reproduce the netlist impedance (error " + fmt(mismatch) + ")");
  emit(c, write_realization(r));
  trace_realization(c, r);
  return 0;
}

// Netlist text for a controller hint, built from the plant netlist.
std::string hint_netlist(const Netlist& plant_net, const ImplHint& hint) {
  Netlist k;
  if (hint.kind == ImplHint::Kind::TerminateResistors) {
    for (const auto& p : plant_net.ports) {
      k.add(ElementKind::R, p.plus, p.minus, hint.ohms);
      k.add_port(p.plus, p.minus);
    }
  } else if (hint.kind == ImplHint::Kind::CopyNetworkPlusResistors) {
    k = plant_net;
    k.faces.clear();
    k.ports.clear();
    int next = 0;
    for (const auto& p : plant_net.ports) {
      std::string t;
      do t = "k" + std::to_string(next++);
      while (k.has_node(t));
      k.add(ElementKind::R, p.plus, t, hint.ohms);
      k.add_port(t, p.minus);
    }
  } else {
    return {};
  }
  return serialize_netlist(k);
}

int cmd_synthesize(const std::string& path, int problem, const std::string& norm, double gamma, bool has_gamma,
                   const std::string& netlist_path, const std::string& drive, const Common& c) {
  StructuredRealization plant = read_realization(read_file(path));
  Controller k;
  GeneralizedPlant g;
  if (problem == 2) {
    if (plant.tag() == ClassTag::LCT && plant.partition()) {
      const int before = plant.n();
      plant = reduce_to_controllable(plant);
      if (plant.n() != before) report("reduced to the controllable part: " + std::to_string(plant.n()) + " states");
    }
    g = embed_problem2(plant);
    if (norm == "h2") {
      if (validate_structure(plant, ClassTag::LCT).pass)
        k = lct_h2(plant);
      else if (g.has_signatures())
        k = h2_symmetric(g);
      else
        k = h2_general(g);
    } else if (!has_gamma) {
      k = lct_hinf(plant);
    } else {
      k = hinf_symmetric(g, gamma);
    }
  } else {
    g = embed_problem3(plant);
    if (norm == "h2") {
      require_regular(g);
      k = h2_general(g);
    } else if (plant.tag() == ClassTag::RLT || plant.tag() == ClassTag::RCT) {
      k = plant.tag() == ClassTag::RLT ? rlt_static(plant) : rct_static(plant);
      report("optimal level " + fmt(gamma_star(plant)));
    } else {
      fail(ErrorKind::Structure, "problem 3 H-infinity synthesis needs an RLT or RCT plant");
    }
  }
  const StructuredRealization cl = close_loop(g, k);
  if (!is_hurwitz(cl.A())) fail(ErrorKind::Solver, "controller does not stabilize the plant");
  report("achieved " + norm + " norm " + fmt(norm == "h2" ? h2_norm(cl) : hinf_norm(cl)));
  if (k.impl_hint && !netlist_path.empty()) {
    const Netlist net = load_netlist(netlist_path);
    const std::string text = hint_netlist(net, *k.impl_hint);
    if (!text.empty()) {
      const Netlist kn = parse_netlist(text);
      const double mismatch = impedance_mismatch(k.realization(), kn, drives(kn, drive));
      if (mismatch < kProbeTol)
        k.impl_hint->netlist = text;
      else
        report("warning: hint netlist does not match the controller (error " + fmt(mismatch) + "); omitted");
    }
  }
  emit(c, write_controller(k));
  trace_realization(c, cl);
  return 0;
}

int cmd_verify(const std::string& plant_path, const std::string& ctrl_path, int problem, const Common& c) {
  const StructuredRealization plant = read_realization(read_file(plant_path));
  const Controller k = read_controller(read_file(ctrl_path));
  const GeneralizedPlant g = problem == 2 ? embed_problem2(plant) : embed_problem3(plant);
  const StructuredRealization cl = close_loop(g, k);
  json doc;
  const double abscissa = spectral_abscissa(cl.A());
  doc["stable"] = abscissa < 0.0;
  doc["stability_margin"] = -abscissa;
  if (abscissa < 0.0) {
    const bool strictly_proper = cl.D().cwiseAbs().maxCoeff() == 0.0;
    doc["h2"] = strictly_proper ? json(h2_norm(cl)) : json(nullptr);
    doc["hinf"] = hinf_norm(cl);
    if (problem == 2 && g.has_signatures() && regularity_violation(g).empty()) {
      const double ref = h2_norm(close_loop(g, h2_symmetric(g)));
      doc["h2_symmetric_reference"] = ref;
      if (strictly_proper) doc["h2_reference_gap"] = std::abs(h2_norm(cl) - ref);
    }
  }
  emit(c, doc.dump(2) + "\n");
  trace_realization(c, cl);
  return abscissa < 0.0 ? 0 : 4;
}

MatrixXd load_matrix(const std::string& path) { return read_matrix_text(read_file(path)); }

VectorXd as_vector(const MatrixXd& M, const char* what) {
  if (M.size() == 0) return VectorXd(0);
  if (M.cols() != 1 && M.rows() != 1) fail(ErrorKind::Input, std::string(what) + " must be a vector");
  return Eigen::Map<const VectorXd>(M.data(), M.size());
}

int cmd_lsq(const std::string& a, const std::string& b, const std::string& cpath, const std::string& d,
            const Common& c) {
  if (cpath.empty() != d.empty()) fail(ErrorKind::Input, "--C and --d must be given together");
  const MatrixXd A = load_matrix(a);
  const VectorXd bv = as_vector(load_matrix(b), "b");
  const MatrixXd C = cpath.empty() ? MatrixXd(0, A.cols()) : load_matrix(cpath);
  const VectorXd dv = d.empty() ? VectorXd(0) : as_vector(load_matrix(d), "d");
  const LeastSquaresSolution sol = solve_constrained_ls(A, bv, C, dv);
  json doc;
  doc["x"] = std::vector<double>(sol.x.data(), sol.x.data() + sol.x.size());
  doc["z"] = std::vector<double>(sol.z.data(), sol.z.data() + sol.z.size());
  doc["kkt_residual"] = sol.kkt_residual;
  doc["t_final"] = sol.t_final;
  emit(c, doc.dump(2) + "\n");
  trace_simulation(c, sol.trace);
  return 0;
}

std::map<int, double> load_inertias(const std::string& path) {
  const MatrixXd M = load_matrix(path);
  if (M.size() > 0 && M.cols() != 2) fail(ErrorKind::Input, "inertia file needs two columns: bus and inertia");
  std::map<int, double> out;
  for (Eigen::Index i = 0; i < M.rows(); ++i) out[static_cast<int>(M(i, 0))] = M(i, 1);
  return out;
}

int cmd_grid(const std::string& lap, const std::vector<int>& renewable, const std::string& inertia, const Common& c) {
  const MatrixXd L = load_matrix(lap);
  const std::map<int, double> M = load_inertias(inertia);
  const StructuredRealization plant = build_swing_grid(L, renewable, M);
  Controller k = lct_h2(plant);
  const Netlist kn = swing_controller_netlist(L, renewable, M, k.impl_hint ? k.impl_hint->ohms : 2.0);
  const double mismatch =
      impedance_mismatch(k.realization(), kn, std::vector<Drive>(renewable.size(), Drive::Voltage));
  report("controller netlist impedance check max relative error " + fmt(mismatch));
  if (!(mismatch < kProbeTol)) fail(ErrorKind::Solver, "controller netlist does not match the controller");
  if (k.impl_hint) k.impl_hint->netlist = serialize_netlist(kn);
  json doc;
  doc["plant"] = json::parse(write_realization(plant));
  doc["controller"] = json::parse(write_controller(k));
  emit(c, doc.dump(2) + "\n");
  trace_realization(c, close_loop(embed_problem2(plant), k));
  return 0;
}

int cmd_dual(const std::string& path, const Common& c) {
  const Netlist net = load_netlist(path);
  const Netlist dual = planar_dual(net);
  emit(c, serialize_netlist(dual));
  trace_netlist(c, dual);
  return 0;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse:
      return 2;
    case ErrorKind::Structure:
      return 3;
    case ErrorKind::Solver:
      return 4;
    case ErrorKind::Convergence:
      return 5;
    case ErrorKind::Input:
      break;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Passive network modelling and controller synthesis"};
  app.require_subcommand(1);

  Common c_parse, c_realize, c_synth, c_verify, c_lsq, c_grid, c_dual;
  std::string netlist, drive = "current", real_path, plant_path, ctrl_path, hint_path;
  std::string a_path, b_path, cm_path, d_path, lap_path, inertia_path;
  std::string norm = "h2";
  int problem = 2;
  double gamma = 0.0;
  std::vector<int> renewable;

  auto* parse = app.add_subcommand("parse", "Validate a netlist and print a summary");
  parse->add_option("netlist", netlist)->required();
  add_common(parse, c_parse);

  auto* realize = app.add_subcommand("realize", "State-space realization of a netlist");
  realize->add_option("netlist", netlist)->required();
  realize->add_option("--drive", drive)->check(CLI::IsMember({"current", "voltage"}));
  add_common(realize, c_realize);

  auto* synth = app.add_subcommand("synthesize", "Optimal controller for a realization");
  synth->add_option("realization", real_path)->required();
  synth->add_option("--problem", problem)->check(CLI::IsMember({2, 3}));
  synth->add_option("--norm", norm)->check(CLI::IsMember({"h2", "hinf"}));
  auto* gamma_opt = synth->add_option("--gamma", gamma);
  synth->add_option("--netlist", hint_path, "Plant netlist used to build the controller netlist");
  synth->add_option("--drive", drive)->check(CLI::IsMember({"current", "voltage"}));
  add_common(synth, c_synth);

  auto* verify = app.add_subcommand("verify", "Closed-loop norms of a plant and controller");
  verify->add_option("plant", plant_path)->required();
  verify->add_option("controller", ctrl_path)->required();
  verify->add_option("--problem", problem)->check(CLI::IsMember({2, 3}));
  add_common(verify, c_verify);

  auto* lsq = app.add_subcommand("lsq", "Constrained least squares by circuit simulation");
  lsq->add_option("--A", a_path)->required();
  lsq->add_option("--b", b_path)->required();
  lsq->add_option("--C", cm_path);
  lsq->add_option("--d", d_path);
  add_common(lsq, c_lsq);

  auto* grid = app.add_subcommand("grid", "Swing-equation grid plant and its optimal controller");
  grid->add_option("--laplacian", lap_path)->required();
  grid->add_option("--renewable", renewable)->required();
  grid->add_option("--inertia", inertia_path)->required();
  add_common(grid, c_grid);

  auto* dual = app.add_subcommand("dual", "Dual of a planar resistor network");
  dual->add_option("netlist", netlist)->required();
  add_common(dual, c_dual);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*parse) return cmd_parse(netlist, c_parse);
    if (*realize) return cmd_realize(netlist, drive, c_realize);
    if (*synth)
      return cmd_synthesize(real_path, problem, norm, gamma, gamma_opt->count() > 0, hint_path, drive, c_synth);
    if (*verify) return cmd_verify(plant_path, ctrl_path, problem, c_verify);
    if (*lsq) return cmd_lsq(a_path, b_path, cm_path, d_path, c_lsq);
    if (*grid) return cmd_grid(lap_path, renewable, inertia_path, c_grid);
    if (*dual) return cmd_dual(netlist, c_dual);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
