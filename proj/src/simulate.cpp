#include "rlct/simulate.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "rlct/netgraph.hpp"
#include "rlct/structured_ss.hpp"

namespace rlct {

InputSignal InputSignal::step(VectorXd amplitude) {
  InputSignal s;
  s.kind = Kind::Step;
  s.amplitude = std::move(amplitude);
  return s;
}

InputSignal InputSignal::zero(int m) {
  InputSignal s;
  s.amplitude = VectorXd::Zero(m);
  return s;
}

InputSignal InputSignal::sinusoid(VectorXd amplitude, double omega, double phase) {
  InputSignal s;
  s.kind = Kind::Sinusoid;
  s.amplitude = std::move(amplitude);
  s.omega = omega;
  s.phase = phase;
  return s;
}

VectorXd InputSignal::value(double t) const {
  switch (kind) {
    case Kind::Step: return t >= 0.0 ? amplitude : VectorXd::Zero(amplitude.size());
    case Kind::Zero: return VectorXd::Zero(amplitude.size());
    case Kind::Sinusoid: return amplitude * std::sin(omega * t + phase);
  }
  return VectorXd::Zero(amplitude.size());
}

VectorXd InputSignal::derivative(double t) const {
  if (kind == Kind::Sinusoid) return amplitude * (omega * std::cos(omega * t + phase));
  return VectorXd::Zero(amplitude.size());
}

SimulationResult simulate(const StructuredRealization& real, const InputSignal& input, double t_final, double dt,
                          const VectorXd& x0, long record_every) {
  if (!(dt > 0.0) || !(t_final > dt)) fail(ErrorKind::Input, "simulate needs dt > 0 and t_final > dt");
  const int n = real.n(), m = real.m();
  if (input.amplitude.size() != m) fail(ErrorKind::Input, "input signal width does not match the realization");
  if (x0.size() != 0 && x0.size() != n) fail(ErrorKind::Input, "initial state has the wrong length");
  const long steps = static_cast<long>(std::ceil(t_final / dt - 1e-12));
  const double h = t_final / static_cast<double>(steps);
  const MatrixXd &A = real.A(), &B = real.B(), &C = real.C(), &D = real.D();

  if (record_every < 1) fail(ErrorKind::Input, "record_every must be positive");
  const long back = std::max<long>(1, std::lround(kSteadyStateWindow * static_cast<double>(steps)));
  const long window_k = steps - std::min(back, steps);
  const long samples = steps / record_every + (steps % record_every ? 2 : 1);

  SimulationResult out;
  out.times.resize(samples);
  out.states.resize(n, samples);
  out.inputs.resize(m, samples);
  VectorXd x = x0.size() ? x0 : VectorXd::Zero(n);
  VectorXd xw = x;
  auto f = [&](double t, const VectorXd& s) -> VectorXd { return A * s + B * input.value(t); };
  long col = 0;
  for (long k = 0; k <= steps; ++k) {
    const double t = k == steps ? t_final : h * static_cast<double>(k);
    if (k == window_k) xw = x;
    if (k % record_every == 0 || k == steps) {
      out.times[col] = t;
      out.states.col(col) = x;
      out.inputs.col(col) = input.value(t);
      ++col;
    }
    if (k == steps) break;
    const VectorXd k1 = f(t, x);
    const VectorXd k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
    const VectorXd k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
    const VectorXd k4 = f(t + h, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite())
      fail(ErrorKind::Convergence, "simulation diverged at t = " + std::to_string(t + h));
  }
  out.outputs = C * out.states + D * out.inputs;

  const VectorXd& xf = x;
  const double scale = 1.0 + (n ? xf.cwiseAbs().maxCoeff() : 0.0);
  out.converged = n == 0 || (xf - xw).cwiseAbs().maxCoeff() < kSteadyStateTol * scale;
  if (out.converged) out.steady_state = xf;
  return out;
}

std::pair<double, double> default_horizon(const MatrixXd& A) {
  if (A.rows() == 0) return {1.0, 0.05};
  const Eigen::VectorXcd lam = A.eigenvalues();
  double slow = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < lam.size(); ++i) slow = std::min(slow, std::abs(lam(i).real()));
  const double rho = lam.cwiseAbs().maxCoeff();
  if (!(slow > 0.0)) fail(ErrorKind::Convergence, "closed loop has a pole on the imaginary axis");
  return {20.0 / slow, 1.0 / (20.0 * std::max(rho, 1e-300))};
}

double kkt_residual(const MatrixXd& A_ls, const VectorXd& b, const MatrixXd& C_ls, const VectorXd& d,
                    const VectorXd& x, const VectorXd& z) {
  const Eigen::Index p = C_ls.rows();
  VectorXd r1 = A_ls.transpose() * (A_ls * x - b);
  if (p > 0) r1 += C_ls.transpose() * z;
  double rhs = A_ls.transpose().size() ? (A_ls.transpose() * b).cwiseAbs().maxCoeff() : 0.0;
  double res = r1.size() ? r1.cwiseAbs().maxCoeff() : 0.0;
  if (p > 0) {
    res = std::max(res, (C_ls * x - d).cwiseAbs().maxCoeff());
    rhs = std::max(rhs, d.cwiseAbs().maxCoeff());
  }
  return res / (1.0 + rhs);
}

LeastSquaresSolution solve_constrained_ls(const MatrixXd& A_ls, const VectorXd& b, const MatrixXd& C_ls,
                                          const VectorXd& d) {
  const Eigen::Index m = A_ls.rows(), n = A_ls.cols(), p = C_ls.rows();
  if (b.size() != m) fail(ErrorKind::Input, "b must have one entry per row of A_ls");
  if (d.size() != p) fail(ErrorKind::Input, "d must have one entry per row of C_ls");
  const LeastSquaresCircuit circ = build_least_squares_circuit(A_ls, C_ls);
  if (!circ.c_right_invertible) fail(ErrorKind::Structure, "assumption violated: C_ls is not right invertible");
  if (!circ.stacked_left_invertible) fail(ErrorKind::Structure, "assumption violated: [A_ls; C_ls] is not left invertible");

  const StructuredRealization& g = circ.plant;
  const MatrixXd Acl = g.A() - g.B() * g.C();
  MatrixXd Bin(n + p, m + p);
  Bin << circ.B_r1, circ.B_r2;
  const StructuredRealization loop(Acl, Bin, MatrixXd::Identity(n + p, n + p), MatrixXd::Zero(n + p, m + p));
  VectorXd r(m + p);
  r << -b, -d;

  auto [t_final, dt] = default_horizon(Acl);
  for (int attempt = 0; attempt < 6; ++attempt, t_final *= 2.0) {
    const long stride = std::max<long>(1, std::lround(t_final / dt / 2000.0));
    SimulationResult sim = simulate(loop, InputSignal::step(r), t_final, dt, VectorXd(), stride);
    if (!sim.converged) continue;
    LeastSquaresSolution out;
    out.x = sim.steady_state->head(n);
    out.z = sim.steady_state->tail(p);
    out.kkt_residual = kkt_residual(A_ls, b, C_ls, d, out.x, out.z);
    out.t_final = t_final;
    out.trace = std::move(sim);
    return out;
  }
  fail(ErrorKind::Convergence, "least-squares circuit did not reach steady state");
}

}  // namespace rlct
