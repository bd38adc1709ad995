#pragma once

#include <vector>

#include "rlct/netgraph.hpp"
#include "rlct/types.hpp"

namespace rlct {

/// Log-spaced frequencies from lo to hi inclusive.
std::vector<double> logspace(double lo, double hi, int count);

/// G(j w) at every frequency.
std::vector<MatrixXcd> frequency_sweep(const StructuredRealization& real, const std::vector<double>& omegas);
/// Same values as frequency_sweep, computed with OpenMP.
std::vector<MatrixXcd> frequency_sweep_parallel(const StructuredRealization& real, const std::vector<double>& omegas);

/// Port impedance of a netlist at every s.
std::vector<MatrixXcd> impedance_sweep(const Netlist& net, const std::vector<Complex>& points,
                                       const std::vector<Drive>& drive = {});
std::vector<MatrixXcd> impedance_sweep_parallel(const Netlist& net, const std::vector<Complex>& points,
                                                const std::vector<Drive>& drive = {});

/// Largest singular value of each response.
std::vector<double> sigma_max(const std::vector<MatrixXcd>& responses);

}  // namespace rlct
