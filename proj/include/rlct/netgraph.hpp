#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rlct/types.hpp"

namespace rlct {

enum class ElementKind { R, L, C, T };

struct Element {
  ElementKind kind = ElementKind::R;
  std::vector<std::string> nodes;  // 2 entries, or 4 for a transformer (n1+, n1-, n2+, n2-)
  double value = 0.0;              // ohms, henries, farads or turns ratio
  bool operator==(const Element&) const = default;
};

struct Port {
  std::string plus, minus;
  bool operator==(const Port&) const = default;
};

/// Typed element list over named nodes; node "0" is ground.
struct Netlist {
  std::vector<std::string> nodes;  // ground first, then order of first appearance
  std::vector<Element> elements;
  std::vector<Port> ports;
  std::vector<std::vector<std::string>> faces;  // node cycles, first is the outer face

  bool operator==(const Netlist&) const = default;
  int count(ElementKind kind) const;
  bool has_node(const std::string& name) const;
  /// Adds a node name if new and returns it.
  const std::string& add_node(const std::string& name);
  void add(ElementKind kind, const std::string& a, const std::string& b, double value);
  void add_port(const std::string& plus, const std::string& minus);
};

Netlist parse_netlist(std::string_view text);
std::string serialize_netlist(const Netlist& net);
/// Throws ParseError-free structural errors (ErrorKind::Structure) for an invalid netlist.
void validate_netlist(const Netlist& net);

/// Half-edge of the planar embedding; edge ids index elements first, then ports.
struct Dart {
  int edge = 0;
  bool forward = true;  // traversed from the first node to the second
  bool operator==(const Dart&) const = default;
};

/// Faces as dart cycles with a consistent orientation.
std::vector<std::vector<Dart>> embedding_darts(const Netlist& net);

enum class Drive { Current, Voltage };

/// Pencil E dx/dt = A x + B u, y = C x + D u.
struct DescriptorModel {
  MatrixXd E, A, B, C, D;
};

DescriptorModel mna_descriptor(const Netlist& net, const std::vector<Drive>& drive = {});
MatrixXcd descriptor_response(const DescriptorModel& d, Complex s);
MatrixXcd impedance_at(const Netlist& net, Complex s, const std::vector<Drive>& drive = {});
StructuredRealization descriptor_to_statespace(const DescriptorModel& d);

MatrixXd kron_reduce(const MatrixXd& L, const std::vector<int>& boundary);

/// Swing-equation plant from frequencies at renewable buses to their power injections.
StructuredRealization build_swing_grid(const MatrixXd& L, const std::vector<int>& renewable,
                                       const std::map<int, double>& inertias);
/// Electrical analogue: lines as inductors 1/w, machines as capacitors M to ground,
/// one voltage-driven port per renewable bus.
Netlist swing_grid_netlist(const MatrixXd& L, const std::vector<int>& renewable,
                           const std::map<int, double>& inertias);
/// Grid copy with a resistor of `ohms` in series with every renewable port.
Netlist swing_controller_netlist(const MatrixXd& L, const std::vector<int>& renewable,
                                 const std::map<int, double>& inertias, double ohms = 2.0);

struct LeastSquaresCircuit {
  StructuredRealization plant;  // (u, y) channels, LCT
  MatrixXd B_r1;                // input matrix of the reference r1
  MatrixXd B_r2;                // input matrix of the reference r2
  bool c_right_invertible = true;
  bool stacked_left_invertible = true;
};

LeastSquaresCircuit build_least_squares_circuit(const MatrixXd& A_ls, const MatrixXd& C_ls);

Netlist open_circuit_capacitors(const Netlist& net);
/// Dual of a planar resistor network; the face opposite ground becomes the dual outer face.
Netlist planar_dual(const Netlist& net);

}  // namespace rlct
