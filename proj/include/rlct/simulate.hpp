#pragma once

#include <optional>

#include "rlct/types.hpp"

namespace rlct {

struct InputSignal {
  enum class Kind { Step, Zero, Sinusoid };
  Kind kind = Kind::Zero;
  VectorXd amplitude;  // one entry per input channel
  double omega = 1.0;  // Sinusoid: amplitude * sin(omega t + phase)
  double phase = 0.0;

  static InputSignal step(VectorXd amplitude);
  static InputSignal zero(int m);
  static InputSignal sinusoid(VectorXd amplitude, double omega, double phase = 0.0);

  VectorXd value(double t) const;
  /// Time derivative of value(t).
  VectorXd derivative(double t) const;
};

struct SimulationResult {
  std::vector<double> times;
  MatrixXd states;   // n x T, one column per time
  MatrixXd inputs;   // m x T
  MatrixXd outputs;  // p x T
  std::optional<VectorXd> steady_state;
  bool converged = false;
};

inline constexpr double kSteadyStateTol = 1e-8;
inline constexpr double kSteadyStateWindow = 0.05;

/// Fixed-step RK4. The step is shrunk so that the grid ends exactly at t_final.
/// Every record_every-th step is stored, plus the final one.
SimulationResult simulate(const StructuredRealization& real, const InputSignal& input, double t_final, double dt,
                          const VectorXd& x0 = VectorXd(), long record_every = 1);

/// Default horizon 20/|slowest decay rate| and step 1/(20 spectral radius).
std::pair<double, double> default_horizon(const MatrixXd& A);

struct LeastSquaresSolution {
  VectorXd x, z;
  double kkt_residual = 0.0;
  double t_final = 0.0;
  SimulationResult trace;
};

/// Minimizes |A x - b|^2 subject to C x = d by simulating the resistor-terminated circuit to steady state.
LeastSquaresSolution solve_constrained_ls(const MatrixXd& A_ls, const VectorXd& b, const MatrixXd& C_ls,
                                          const VectorXd& d);

/// max-norm residual of [A^T A  C^T; C 0][x; z] - [A^T b; d], relative to 1 + |rhs|.
double kkt_residual(const MatrixXd& A_ls, const VectorXd& b, const MatrixXd& C_ls, const VectorXd& d,
                    const VectorXd& x, const VectorXd& z);

}  // namespace rlct
