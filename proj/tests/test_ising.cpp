#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "kpo/errors.hpp"
#include "kpo/ising.hpp"
#include "oracles.hpp"

using namespace kpo;

namespace {

CouplingMatrix pair(double j) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 1) = m(1, 0) = j;
  return CouplingMatrix(m);
}

SpinConfiguration random_spins(int n, std::mt19937_64& rng) {
  std::vector<int> s(n);
  for (int& v : s) v = (rng() & 1) ? 1 : -1;
  return SpinConfiguration(s);
}

}  // namespace

TEST_CASE("coupling matrix validation") {
  Eigen::MatrixXd ok = Eigen::MatrixXd::Zero(3, 3);
  ok(0, 1) = ok(1, 0) = 0.5;
  CHECK_NOTHROW(CouplingMatrix{ok});

  Eigen::MatrixXd asym = ok;
  asym(0, 1) = 0.6;
  CHECK_THROWS_AS(CouplingMatrix{asym}, InvalidArgument);

  Eigen::MatrixXd diag = ok;
  diag(2, 2) = 1.0;
  CHECK_THROWS_AS(CouplingMatrix{diag}, InvalidArgument);

  Eigen::MatrixXd nan = ok;
  nan(0, 2) = nan(2, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(CouplingMatrix{nan}, InvalidArgument);

  CHECK_THROWS_AS(CouplingMatrix{Eigen::MatrixXd::Zero(1, 1)}, InvalidArgument);
  CHECK_THROWS_AS(CouplingMatrix{Eigen::MatrixXd::Zero(2, 3)}, InvalidArgument);
}

TEST_CASE("spin configuration accepts only +-1") {
  CHECK_NOTHROW(SpinConfiguration({1, -1, 1}));
  CHECK_THROWS_AS(SpinConfiguration({1, 0}), InvalidArgument);
  CHECK_THROWS_AS(SpinConfiguration({2, -1}), InvalidArgument);
  CHECK(SpinConfiguration({1, -1}).flipped() == SpinConfiguration({-1, 1}));
}

TEST_CASE("ising energy examples") {
  CHECK(ising_energy(pair(1.0), SpinConfiguration({1, 1})) == -2.0);
  CHECK(ising_energy(pair(1.0), SpinConfiguration({1, -1})) == 2.0);

  const CouplingMatrix chain = make_chain(8, 0.1);
  CHECK(ising_energy(chain, SpinConfiguration(std::vector<int>(8, 1))) ==
        doctest::Approx(-1.6).epsilon(1e-14));
  CHECK(ising_energy(chain, SpinConfiguration({1, -1, 1, -1, 1, -1, 1, -1})) ==
        doctest::Approx(1.6).epsilon(1e-14));

  CHECK_THROWS_AS(ising_energy(chain, SpinConfiguration({1, 1})),
                  DimensionMismatch);
}

TEST_CASE("ising energy agrees with the brute-force double sum") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 10;
    const Eigen::MatrixXd m = oracle::random_symmetric(n, 1.0, rng);
    const CouplingMatrix J(m);
    const std::uint64_t bits = rng() & ((std::uint64_t{1} << n) - 1);
    std::vector<int> s(n);
    for (int j = 0; j < n; ++j) s[j] = (bits >> j) & 1 ? -1 : 1;
    CHECK(ising_energy(J, SpinConfiguration(s)) ==
          doctest::Approx(oracle::energy_of_bits(m, bits)).epsilon(1e-13));
  }
}

TEST_CASE("global flip leaves the energy exactly unchanged") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 15;
    const CouplingMatrix J(oracle::random_symmetric(n, 2.0, rng));
    const SpinConfiguration s = random_spins(n, rng);
    CHECK(ising_energy(J, s) == ising_energy(J, s.flipped()));
  }
}

TEST_CASE("xy energy examples") {
  const CouplingMatrix chain = make_chain(8, 0.1);
  CHECK(xy_energy(chain, std::vector<double>(8, 0.0)) ==
        doctest::Approx(-1.6).epsilon(1e-14));
  CHECK(xy_energy(chain, std::vector<double>(8, 0.7)) ==
        doctest::Approx(-chain.entries().sum()).epsilon(1e-14));
  CHECK(std::abs(xy_energy(pair(1.0), {0.0, std::numbers::pi / 2})) < 1e-15);
  CHECK_THROWS_AS(xy_energy(chain, {0.0, 1.0}), DimensionMismatch);
}

TEST_CASE("xy energy of binarized phases reduces to the ising energy") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ref(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> jitter(-1e-9, 1e-9);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 12;
    const CouplingMatrix J(oracle::random_symmetric(n, 1.0, rng));
    const SpinConfiguration s = random_spins(n, rng);
    const double base = ref(rng);
    std::vector<double> phases(n);
    for (int j = 0; j < n; ++j)
      phases[j] = base + (s[j] < 0 ? std::numbers::pi : 0.0) + jitter(rng);
    CHECK(std::abs(xy_energy(J, phases) - ising_energy(J, s)) < 1e-6 * n * n);
  }
}

TEST_CASE("chain spectrum matches the enumeration oracle") {
  const CouplingMatrix chain = make_chain(8, 0.1);
  const IsingSpectrum spec = enumerate_spectrum(chain);
  REQUIRE(spec.levels.size() == 5);
  const double expected[] = {-1.6, -0.8, 0.0, 0.8, 1.6};
  const std::uint64_t degeneracy[] = {2, 56, 140, 56, 2};
  for (int i = 0; i < 5; ++i) {
    CHECK(spec.levels[i].energy == doctest::Approx(expected[i]).epsilon(1e-12));
    CHECK(spec.levels[i].degeneracy == degeneracy[i]);
  }
  CHECK(spec.min_energy() == doctest::Approx(-1.6));
  CHECK(spec.max_energy() == doctest::Approx(1.6));
  CHECK(spec.total_degeneracy() == 256);
}

TEST_CASE("pair spectrum") {
  const IsingSpectrum spec = enumerate_spectrum(pair(1.0));
  REQUIRE(spec.levels.size() == 2);
  CHECK(spec.levels[0].energy == -2.0);
  CHECK(spec.levels[0].degeneracy == 2);
  CHECK(spec.levels[1].energy == 2.0);
  CHECK(spec.levels[1].degeneracy == 2);
}

TEST_CASE("spectrum invariants on random instances against brute force") {
  std::mt19937_64 rng(21);
  // n = 17 and 18 exercise the incremental enumeration path.
  for (int n : {3, 5, 8, 11, 17, 18}) {
    CAPTURE(n);
    const Eigen::MatrixXd m = oracle::random_symmetric(n, 1.0, rng);
    const CouplingMatrix J(m);
    const IsingSpectrum spec = enumerate_spectrum(J);
    CHECK(spec.total_degeneracy() == (std::uint64_t{1} << n));
    for (std::size_t i = 0; i < spec.levels.size(); ++i) {
      CHECK(spec.levels[i].degeneracy % 2 == 0);
      if (i > 0) CHECK(spec.levels[i].energy > spec.levels[i - 1].energy);
    }
    const auto oracle_counts = oracle::spectrum_counts(m, 1e-10);
    REQUIRE(oracle_counts.size() == spec.levels.size());
    for (std::size_t i = 0; i < oracle_counts.size(); ++i) {
      CHECK(std::abs(spec.levels[i].energy - oracle_counts[i].first) < 1e-10);
      CHECK(spec.levels[i].degeneracy == oracle_counts[i].second);
    }
  }
}

TEST_CASE("min and max levels bound every configuration") {
  std::mt19937_64 rng(3);
  const CouplingMatrix J = make_random_binary(10, 0.1, 0.8, 4);
  const IsingSpectrum spec = enumerate_spectrum(J);
  for (int t = 0; t < 2000; ++t) {
    const double e = ising_energy(J, random_spins(10, rng));
    CHECK(e >= spec.min_energy() - spec.tolerance);
    CHECK(e <= spec.max_energy() + spec.tolerance);
    CHECK(spec.find_level(e).has_value());
  }
}

TEST_CASE("random binary spectrum counts every configuration") {
  const IsingSpectrum spec = enumerate_spectrum(make_random_binary(8, 0.1, 0.8, 7));
  CHECK(spec.total_degeneracy() == 256);
}

TEST_CASE("enumeration refuses large instances") {
  const CouplingMatrix big = make_chain(25, 0.1);
  CHECK_THROWS_AS(enumerate_spectrum(big), SizeGuardError);
}

TEST_CASE("chain construction") {
  const CouplingMatrix c = make_chain(8, 0.1);
  for (int j = 0; j < 8; ++j) {
    CHECK(c.entries().row(j).sum() == doctest::Approx(0.2).epsilon(1e-15));
    int nonzero = 0;
    for (int k = 0; k < 8; ++k)
      if (c(j, k) != 0.0) {
        ++nonzero;
        CHECK(c(j, k) == 0.1);
      }
    CHECK(nonzero == 2);
  }
  const CouplingMatrix tri = make_chain(3, 1.0);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) CHECK(tri(j, k) == (j == k ? 0.0 : 1.0));
  CHECK_THROWS_AS(make_chain(2, 0.1), InvalidArgument);
  CHECK_THROWS_AS(make_chain(5, 0.0), InvalidArgument);
}

TEST_CASE("chain eigenvalues follow the circulant formula") {
  const CouplingMatrix c = make_chain(8, 0.1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.entries());
  const std::vector<double> want = oracle::ring_eigenvalues(8, 0.1);
  for (int q = 0; q < 8; ++q)
    CHECK(std::abs(es.eigenvalues()(q) - want[q]) < 1e-12);
  CHECK(want.front() == doctest::Approx(-0.2));
  CHECK(want.back() == doctest::Approx(0.2));
  CHECK(want[1] == doctest::Approx(-0.1414214).epsilon(1e-6));
}

TEST_CASE("random binary graph construction") {
  const CouplingMatrix empty = make_random_binary(8, 0.1, 0.0, 1);
  CHECK(empty.entries().isZero(0.0));

  const CouplingMatrix full = make_random_binary(8, 1.0, 1.0, 1);
  for (int j = 0; j < 8; ++j)
    for (int k = 0; k < 8; ++k)
      if (j != k) CHECK(std::abs(full(j, k)) == 1.0);

  CHECK(make_random_binary(8, 0.1, 0.8, 42) == make_random_binary(8, 0.1, 0.8, 42));
  CHECK_FALSE(make_random_binary(8, 0.1, 0.8, 42) ==
              make_random_binary(8, 0.1, 0.8, 43));

  CHECK_THROWS_AS(make_random_binary(8, 0.1, 1.3, 1), InvalidArgument);
  CHECK_THROWS_AS(make_random_binary(8, 0.1, -0.1, 1), InvalidArgument);
  CHECK_THROWS_AS(make_random_binary(8, -0.1, 0.5, 1), InvalidArgument);
  CHECK_THROWS_AS(make_random_binary(1, 0.1, 0.5, 1), InvalidArgument);
}

TEST_CASE("random binary edge count and sign balance over many seeds") {
  const int seeds = 10000;
  double sum = 0.0, sum2 = 0.0;
  long long positive = 0, edges_total = 0;
  for (int s = 0; s < seeds; ++s) {
    const CouplingMatrix J = make_random_binary(8, 0.1, 0.8, s);
    int edges = 0;
    for (int j = 0; j < 8; ++j)
      for (int k = j + 1; k < 8; ++k)
        if (J(j, k) != 0.0) {
          ++edges;
          if (J(j, k) > 0.0) ++positive;
        }
    sum += edges;
    sum2 += double(edges) * edges;
    edges_total += edges;
  }
  const double mean = sum / seeds;
  const double sd = std::sqrt(sum2 / seeds - mean * mean);
  CHECK(std::abs(mean - 22.4) < 3.0 * sd / std::sqrt(double(seeds)));
  const double frac = double(positive) / edges_total;
  CHECK(std::abs(frac - 0.5) < 3.0 * 0.5 / std::sqrt(double(edges_total)));
}

TEST_CASE("graph spec validation and names") {
  GraphSpec g;
  CHECK_NOTHROW(g.validate());
  g.kind = GraphKind::kRandomBinary;
  g.density = 1.3;
  CHECK_THROWS_WITH_AS(g.validate(), doctest::Contains("density"), InvalidArgument);
  g.density = 0.5;
  g.coupling = 0.0;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  CHECK(graph_kind_from_string(to_string(GraphKind::kFerroChain)) ==
        GraphKind::kFerroChain);
  CHECK(graph_kind_from_string(to_string(GraphKind::kRandomBinary)) ==
        GraphKind::kRandomBinary);
  CHECK_THROWS_AS(graph_kind_from_string("lattice"), InvalidArgument);
}

TEST_CASE("coupling CSV round trip is bit exact") {
  std::mt19937_64 rng(2);
  const CouplingMatrix J(oracle::random_symmetric(6, 1.0, rng));
  const CouplingMatrix back = coupling_from_csv(coupling_to_csv(J));
  CHECK(back == J);
  CHECK_THROWS_AS(coupling_from_csv("0,1\n1,0,2\n"), InvalidArgument);
  CHECK_THROWS_AS(coupling_from_csv("0,x\nx,0\n"), InvalidArgument);
}
