#pragma once

#include <optional>
#include <string>

#include "rlct/plant.hpp"
#include "rlct/types.hpp"

namespace rlct {

/// Passive network that implements a controller.
struct ImplHint {
  enum class Kind { TerminateResistors, CopyNetworkPlusResistors, DualNetwork };
  Kind kind = Kind::TerminateResistors;
  double ohms = 0.0;    // used by the resistor-based kinds
  std::string netlist;  // netlist text, or a reference for DualNetwork
  bool operator==(const ImplHint&) const = default;
};

std::string to_string(ImplHint::Kind kind);
ImplHint::Kind impl_kind_from_string(std::string_view s);

/// Dynamic or static control law with u = -C_K x_K - D_K y and dx_K/dt = A_K x_K + B_K y.
struct Controller {
  MatrixXd A_K, B_K, C_K, D_K;
  std::optional<ImplHint> impl_hint;

  int n() const { return static_cast<int>(A_K.rows()); }
  bool is_static() const { return A_K.size() == 0; }
  /// The map y -> -u.
  StructuredRealization realization() const;
  static Controller from_realization(const StructuredRealization& r);
};

/// Problem 2: disturbances enter at the plant input and output, z = (y, u). Requires D = 0.
GeneralizedPlant embed_problem2(const StructuredRealization& plant);
/// Problem 3: disturbance enters the state directly, y = Cx + Du and z = (y, u).
GeneralizedPlant embed_problem3(const StructuredRealization& plant);

/// Two-Riccati H2 controller for a regular plant.
Controller h2_general(const GeneralizedPlant& g);
/// One-Riccati H2 controller for a signature-symmetric plant.
Controller h2_symmetric(const GeneralizedPlant& g);
/// Central H-infinity controller at level gamma, transformed to be signature-symmetric.
Controller hinf_symmetric(const GeneralizedPlant& g, double gamma);

Controller lct_h2(const StructuredRealization& plant);
Controller lct_hinf(const StructuredRealization& plant);
Controller lct_coprime(const StructuredRealization& plant);

Controller rlt_static(const StructuredRealization& plant);
Controller rct_static(const StructuredRealization& plant);
double gamma_star(const StructuredRealization& plant);

/// Lower LFT of the plant and controller: the map w -> z.
StructuredRealization close_loop(const GeneralizedPlant& g, const Controller& K);

/// max |S*N - N^T*S| for N = [-A_K -B_K; C_K D_K] and S = diag(sigma_int, sigma_K).
double controller_symmetry_residual(const Controller& K, const Signature& sigma_int, const Signature& sigma_K);

}  // namespace rlct
