#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kpo/errors.hpp"
#include "kpo/linear.hpp"
#include "kpo/meanfield.hpp"
#include "kpo/rng.hpp"
#include "oracles.hpp"

using namespace kpo;

namespace {

KpoParams single(double g = 1.0, double delta = 0.0) {
  KpoParams p;
  p.delta = delta;
  p.g = g;
  p.u = 0.01;
  p.gamma = 1.0;
  return p;
}

AmplitudeState random_state(int n, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  AmplitudeState a(n);
  for (int j = 0; j < n; ++j) a[j] = Complex(u(rng), u(rng));
  return a;
}

// Independent fixed-step RK4 for one oscillator, run for exactly `steps`.
Complex oracle_rk4(Complex a, const KpoParams& p, double dt, int steps) {
  auto f = [&](Complex z) {
    return oracle::single_kpo_rhs(z, p.delta, p.g, p.u, p.gamma);
  };
  for (int i = 0; i < steps; ++i) {
    const Complex k1 = f(a);
    const Complex k2 = f(a + 0.5 * dt * k1);
    const Complex k3 = f(a + 0.5 * dt * k2);
    const Complex k4 = f(a + dt * k3);
    a += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return a;
}

IntegratorConfig fixed_horizon(double dt, double t) {
  IntegratorConfig c;
  c.dt = dt;
  c.t_max = t;
  c.convergence_tol = 1e-300;
  c.record_stride = 1 << 30;
  return c;
}

}  // namespace

TEST_CASE("drift examples") {
  CHECK(drift(AmplitudeState(3), single(), make_chain(3, 0.1)) == AmplitudeState(3));

  const AmplitudeState a({Complex(0.1, 0.0)});
  const Complex d = drift(a, single())[0];
  // -i (G A* + U |A|^2 A) - A / 2 with A = 0.1: U |A|^2 A = 1e-5
  CHECK(d.real() == doctest::Approx(-0.05).epsilon(1e-14));
  CHECK(d.imag() == doctest::Approx(-0.10001).epsilon(1e-14));
  CHECK(std::abs(d - oracle::single_kpo_rhs(0.1, 0.0, 1.0, 0.01, 1.0)) < 1e-16);

  CHECK_THROWS_AS(drift(AmplitudeState(2), single(), make_chain(3, 0.1)),
                  DimensionMismatch);
}

TEST_CASE("drift matches the direct formula on coupled states") {
  std::mt19937_64 rng(1);
  const CouplingMatrix J = make_random_binary(6, 0.1, 0.8, 3);
  KpoParams p = single(0.7, -0.13);
  const AmplitudeState a = random_state(6, 5.0, rng);
  const AmplitudeState d = drift(a, p, J);
  const Complex i(0.0, 1.0);
  for (int j = 0; j < 6; ++j) {
    Complex coupling = 0.0;
    for (int k = 0; k < 6; ++k) coupling += J(j, k) * a[k];
    const Complex want = -i * (-p.delta * a[j] + p.g * std::conj(a[j]) +
                               p.u * std::norm(a[j]) * a[j] - 0.5 * coupling) -
                         0.5 * p.gamma * a[j];
    CHECK(std::abs(d[j] - want) < 1e-14);
  }
}

TEST_CASE("complex and block forms of the drift agree") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-0.4, 0.4), g(0.0, 1.2);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 9;
    const CouplingMatrix J(oracle::random_symmetric(n, 0.3, rng));
    const KpoParams p = single(g(rng), d(rng));
    const AmplitudeState a = random_state(n, 3.0, rng);
    const Eigen::VectorXd block = block_drift(a.to_quadratures(), p, J);
    const Eigen::VectorXd complex_form = drift(a, p, J).to_quadratures();
    worst = std::max(worst, (block - complex_form).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("drift is odd under global sign flip") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 7;
    const CouplingMatrix J(oracle::random_symmetric(n, 0.3, rng));
    const AmplitudeState a = random_state(n, 4.0, rng);
    const KpoParams p = single(0.8, 0.05);
    CHECK(drift(a.negated(), p, J) == drift(a, p, J).negated());
  }
}

TEST_CASE("quadrature layout round trip") {
  const AmplitudeState a({Complex(1, 2), Complex(3, 4), Complex(5, 6)});
  const Eigen::VectorXd xy = a.to_quadratures();
  CHECK(xy(0) == 1);
  CHECK(xy(2) == 5);
  CHECK(xy(3) == 2);
  CHECK(xy(5) == 6);
  CHECK(AmplitudeState::from_quadratures(xy) == a);
}

TEST_CASE("single KPO fixed point") {
  const FixedPoint fp = single_kpo_fixed_point(single());
  const double s = std::sqrt(0.75);
  CHECK(fp.radius == doctest::Approx(std::sqrt(s / 0.01)).epsilon(1e-14));
  CHECK(fp.radius == doctest::Approx(9.30605).epsilon(1e-6));
  CHECK(std::tan(fp.phase) == doctest::Approx(0.5 / (s - 1.0)).epsilon(1e-12));
  // tan(phi) = -(2 + sqrt 3), phi = 105 degrees
  CHECK(fp.phase == doctest::Approx(std::numbers::pi - std::atan(2.0 + std::sqrt(3.0)))
                        .epsilon(1e-14));
  CHECK(fp.phase == doctest::Approx(1.8325957).epsilon(1e-7));
  CHECK(fp.phase > std::numbers::pi / 2);
  CHECK(fp.phase < std::numbers::pi);

  CHECK(std::abs(drift(AmplitudeState({fp.amplitude()}), single())[0]) < 1e-9);
  CHECK(binarization_residual(AmplitudeState({fp.amplitude()}), single()) < 1e-9);

  // Exactly at threshold with zero detuning the amplitude vanishes.
  CHECK(single_kpo_fixed_point(single(0.5)).radius == 0.0);
  CHECK_THROWS_AS(single_kpo_fixed_point(single(0.4)), BelowThresholdError);
  KpoParams no_kerr = single();
  no_kerr.u = 0.0;
  CHECK_THROWS_AS(single_kpo_fixed_point(no_kerr), InvalidArgument);
}

TEST_CASE("fixed point holds across detuning and pump") {
  for (double delta : {-0.3, -0.1, 0.0, 0.2, 0.5})
    for (double g : {0.7, 1.0, 1.5}) {
      const KpoParams p = single(g, delta);
      if (g < std::sqrt(0.25 + delta * delta)) continue;
      const FixedPoint fp = single_kpo_fixed_point(p);
      const Complex rhs =
          oracle::single_kpo_rhs(fp.amplitude(), p.delta, p.g, p.u, p.gamma);
      CHECK(std::abs(rhs) < 1e-9 * std::max(1.0, fp.radius));
    }
}

TEST_CASE("integrator basics") {
  IntegratorConfig bad;
  bad.dt = 0.06;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = {};
  bad.convergence_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);

  const TrajectoryRecord zero = integrate(AmplitudeState(3), single(),
                                          make_chain(3, 0.1), IntegratorConfig{});
  CHECK(zero.converged);
  CHECK(zero.final_time == 0.0);
  CHECK(zero.final == AmplitudeState(3));

  IntegratorConfig cfg;
  cfg.record_stride = 7;
  const TrajectoryRecord rec =
      integrate(random_initial(1, 0.01, 5), single(), cfg);
  REQUIRE(rec.times.size() == rec.states.size());
  for (std::size_t i = 1; i < rec.times.size(); ++i)
    CHECK(rec.times[i] > rec.times[i - 1]);
  CHECK(rec.times.back() == rec.final_time);
  CHECK(rec.states.back() == rec.final);
}

TEST_CASE("integration reaches the closed-form fixed point") {
  const FixedPoint fp = single_kpo_fixed_point(single());
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const TrajectoryRecord rec =
        integrate(random_initial(1, 0.01, seed), single(), IntegratorConfig{});
    REQUIRE(rec.converged);
    const Complex a = rec.final[0];
    CHECK(std::abs(std::abs(a) - fp.radius) < 1e-6 * fp.radius);
    double phase = std::arg(a);
    if (phase < 0) phase += std::numbers::pi;
    CHECK(std::abs(phase - fp.phase) < 1e-6 * fp.phase);
  }
}

TEST_CASE("integrator agrees with an independent RK4") {
  const Complex a0(0.01, -0.02);
  const KpoParams p = single(0.9, 0.1);
  const TrajectoryRecord rec =
      integrate(AmplitudeState({a0}), p, fixed_horizon(0.01, 30.0));
  CHECK(rec.final_time == doctest::Approx(30.0));
  const Complex want = oracle_rk4(a0, p, 0.01, 3000);
  CHECK(std::abs(rec.final[0] - want) < 1e-12 * std::max(1.0, std::abs(want)));
}

TEST_CASE("RK4 global error is fourth order") {
  const Complex a0(0.5, 0.3);
  const KpoParams p = single();
  const double t = 20.0;
  const Complex reference = oracle_rk4(a0, p, 0.00125, 16000);
  auto error = [&](double dt) {
    const TrajectoryRecord r =
        integrate(AmplitudeState({a0}), p, fixed_horizon(dt, t));
    return std::abs(r.final[0] - reference);
  };
  const double ratio = error(0.02) / error(0.01);
  CAPTURE(ratio);
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.0);
}

TEST_CASE("integrator detects blowup") {
  KpoParams p = single();
  p.u = 0.0;  // no saturation: exponential growth
  IntegratorConfig cfg;
  cfg.t_max = 200.0;
  CHECK_THROWS_AS(integrate(random_initial(1, 0.01, 1), p, cfg), NumericalError);

  AmplitudeState nan({Complex(std::nan(""), 0.0)});
  CHECK_THROWS_AS(integrate(nan, single(), cfg), NumericalError);
}

TEST_CASE("trajectories map under global sign flip") {
  const CouplingMatrix J = make_random_binary(8, 0.1, 0.8, 1);
  KpoParams p = single(0.0, -0.1);
  p.g = 1.05 * threshold(p, J);
  IntegratorConfig cfg;
  cfg.dt = 0.05;
  cfg.t_max = 20000.0;
  const AmplitudeState a0 = random_initial(8, 0.01, 12);
  const TrajectoryRecord plus = integrate(a0, p, J, cfg);
  const TrajectoryRecord minus = integrate(a0.negated(), p, J, cfg);
  REQUIRE(plus.converged);
  CHECK(minus.final == plus.final.negated());
  CHECK(readout_spins(minus.final) == readout_spins(plus.final).flipped());
}

TEST_CASE("spin readout") {
  CHECK(readout_spins(AmplitudeState(std::vector<Complex>(4, Complex(0, 1)))) ==
        SpinConfiguration({1, 1, 1, 1}));
  CHECK(readout_spins(AmplitudeState(
            {std::polar(1.0, 1.8), std::polar(1.0, -1.3)})) ==
        SpinConfiguration({1, -1}));
  CHECK_THROWS_AS(readout_spins(AmplitudeState(2)), UndefinedSpinError);
  CHECK_FALSE(try_readout_spins(AmplitudeState(2)).has_value());
  // Boundaries phi = 0 and phi = pi (including the -pi branch) read +1.
  CHECK(readout_spins(AmplitudeState({Complex(1, 0), Complex(-1, 0),
                                      Complex(-1, -0.0)})) ==
        SpinConfiguration({1, 1, 1}));
  CHECK(readout_spins(AmplitudeState({Complex(1, -1e-300)})) ==
        SpinConfiguration({-1}));
}

TEST_CASE("binarization residual") {
  const AmplitudeState up(std::vector<Complex>(3, Complex(0, 2)));
  CHECK(binarization_residual(up, single()) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(binarization_residual(AmplitudeState(2), single()),
                  UndefinedSpinError);
}

TEST_CASE("chain steady state just above threshold is binarized") {
  const CouplingMatrix chain = make_chain(8, 0.1);
  KpoParams p = single(0.0, -0.25);
  p.g = 1.001 * threshold(p, chain);
  IntegratorConfig cfg;
  cfg.dt = 0.05;
  cfg.t_max = 1e5;
  const TrajectoryRecord rec = integrate(random_initial(8, 0.01, 2), p, chain, cfg);
  REQUIRE(rec.converged);
  CHECK(binarization_residual(rec.final, p) < 1e-3);
}

TEST_CASE("near-threshold chain dynamics finds the ground state") {
  const CouplingMatrix chain = make_chain(8, 0.1);
  KpoParams p = single(0.0, -0.25);
  p.g = 1.001 * threshold(p, chain);
  IntegratorConfig cfg;
  cfg.dt = 0.05;
  cfg.t_max = 1e5;
  int ground = 0;
  for (int r = 0; r < 50; ++r) {
    const TrajectoryRecord rec = integrate(
        random_initial(8, kDefaultInitialScale, derive_seed(77, {std::uint64_t(r)})),
        p, chain, cfg);
    if (rec.converged &&
        std::abs(ising_energy(chain, readout_spins(rec.final)) + 1.6) < 1e-9)
      ++ground;
  }
  CAPTURE(ground);
  CHECK(ground >= 45);
}

TEST_CASE("random initial conditions") {
  CHECK_THROWS_AS(random_initial(3, 0.0, 1), InvalidArgument);
  CHECK(random_initial(5, 0.01, 9) == random_initial(5, 0.01, 9));
  CHECK_FALSE(random_initial(5, 0.01, 9) == random_initial(5, 0.01, 10));

  const int draws = 10000;
  double sx = 0.0, sx2 = 0.0;
  for (int s = 0; s < draws; ++s) {
    const Complex a = random_initial(1, 0.01, s)[0];
    CHECK(std::abs(a.real()) <= 0.01);
    CHECK(std::abs(a.imag()) <= 0.01);
    sx += a.real();
    sx2 += a.real() * a.real();
  }
  const double mean = sx / draws;
  const double sd = std::sqrt(sx2 / draws - mean * mean);
  CHECK(std::abs(mean) < 3.0 * sd / std::sqrt(double(draws)));
  // Uniform on [-s, s] has standard deviation s / sqrt(3).
  CHECK(sd == doctest::Approx(0.01 / std::sqrt(3.0)).epsilon(0.03));
}
