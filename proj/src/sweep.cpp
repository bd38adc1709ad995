#include "rlct/sweep.hpp"

#include <cmath>
#include <exception>

#include <Eigen/SVD>

#include "rlct/structured_ss.hpp"

namespace rlct {

namespace {

/// Runs body(i) for i in [0, n) across threads and rethrows the first error.
template <class Body>
void parallel_for(long n, Body body) {
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace

std::vector<double> logspace(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) fail(ErrorKind::Input, "logspace needs 0 < lo <= hi and count >= 1");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < count; ++i) out[i] = std::pow(10.0, a + (b - a) * i / (count - 1));
  return out;
}

std::vector<MatrixXcd> frequency_sweep(const StructuredRealization& real, const std::vector<double>& omegas) {
  std::vector<MatrixXcd> out;
  out.reserve(omegas.size());
  for (double w : omegas) out.push_back(transfer_eval(real, Complex(0.0, w)));
  return out;
}

std::vector<MatrixXcd> frequency_sweep_parallel(const StructuredRealization& real, const std::vector<double>& omegas) {
  std::vector<MatrixXcd> out(omegas.size());
  parallel_for(static_cast<long>(omegas.size()),
               [&](long i) { out[i] = transfer_eval(real, Complex(0.0, omegas[i])); });
  return out;
}

std::vector<MatrixXcd> impedance_sweep(const Netlist& net, const std::vector<Complex>& points,
                                       const std::vector<Drive>& drive) {
  const DescriptorModel d = mna_descriptor(net, drive);
  std::vector<MatrixXcd> out;
  out.reserve(points.size());
  for (Complex s : points) out.push_back(descriptor_response(d, s));
  return out;
}

std::vector<MatrixXcd> impedance_sweep_parallel(const Netlist& net, const std::vector<Complex>& points,
                                                const std::vector<Drive>& drive) {
  const DescriptorModel d = mna_descriptor(net, drive);
  std::vector<MatrixXcd> out(points.size());
  parallel_for(static_cast<long>(points.size()), [&](long i) { out[i] = descriptor_response(d, points[i]); });
  return out;
}

std::vector<double> sigma_max(const std::vector<MatrixXcd>& responses) {
  std::vector<double> out;
  out.reserve(responses.size());
  for (const auto& G : responses)
    out.push_back(G.size() ? Eigen::JacobiSVD<MatrixXcd>(G).singularValues()(0) : 0.0);
  return out;
}

}  // namespace rlct
