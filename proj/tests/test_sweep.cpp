#include <doctest.h>

#include <omp.h>

#include "rlct/sweep.hpp"
#include "test_support.hpp"

using namespace rlct;
using namespace rlct::testing;

TEST_CASE("logspace endpoints and spacing") {
  const auto w = logspace(1e-2, 1e2, 5);
  REQUIRE(w.size() == 5);
  CHECK(w.front() == doctest::Approx(1e-2));
  CHECK(w[2] == doctest::Approx(1.0));
  CHECK(w.back() == doctest::Approx(1e2));
}

TEST_CASE("serial and parallel frequency sweeps are identical") {
  omp_set_num_threads(4);
  std::mt19937_64 rng(61);
  const StructuredRealization r = random_lossy(rng, true);
  const auto w = logspace(1e-3, 1e3, 257);
  const auto a = frequency_sweep(r, w), b = frequency_sweep_parallel(r, w);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  CHECK(rel_err(a[100], transfer_eval(r, Complex(0, w[100]))) < 1e-14);
}

TEST_CASE("serial and parallel impedance sweeps are identical") {
  omp_set_num_threads(4);
  const Netlist net = parse_netlist(read_file(data_path("bott_duffin.net")));
  std::vector<Complex> pts;
  for (double w : logspace(1e-2, 1e2, 100)) pts.emplace_back(0.1, w);
  const auto a = impedance_sweep(net, pts), b = impedance_sweep_parallel(net, pts);
  REQUIRE(a.size() == pts.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("sigma_max matches an SVD") {
  std::mt19937_64 rng(62);
  std::vector<MatrixXcd> ms;
  for (int i = 0; i < 5; ++i) ms.push_back(randn(rng, 3, 2).cast<Complex>() + Complex(0, 1) * randn(rng, 3, 2));
  const auto s = sigma_max(ms);
  for (size_t i = 0; i < ms.size(); ++i)
    CHECK(s[i] == doctest::Approx(Eigen::JacobiSVD<MatrixXcd>(ms[i]).singularValues()(0)).epsilon(1e-12));
}
