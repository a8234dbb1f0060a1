#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kpo/ising.hpp"
#include "kpo/linear.hpp"
#include "kpo/meanfield.hpp"
#include "kpo/rng.hpp"

namespace kpo {

// Truncated-Wigner run protocol. Times in units of 1/gamma.
struct SdeConfig {
  double dt = 0.005;
  double t_final = 10000.0;
  double sample_interval = 1.0;
  int n_repeats = 10;
  double burn_in = 0.0;
  // Multiplies the noise term; 1 is the physical TWA value, 0 gives the
  // deterministic limit.
  double noise_scale = 1.0;
  double initial_scale = kDefaultInitialScale;

  void validate() const;
  // Steps of size dt per sample interval (sample_interval must be a multiple
  // of dt).
  long long steps_per_sample() const;
  long long burn_in_steps() const;
  // floor((t_final - burn_in) / sample_interval)
  long long samples_per_repeat() const;

  bool operator==(const SdeConfig&) const = default;
};

// Complex Gaussian white noise chi(t) discretized over one step:
// chi = (u + i v) / sqrt(2 dt) with u, v independent standard normals, so
// <chi chi^*> = 1/dt and <chi chi> = 0.
class WhiteNoise {
 public:
  explicit WhiteNoise(std::uint64_t seed) : rng_(seed) {}

  Complex sample(double dt);
  // Integrated noise term sqrt(gamma/2) chi dt = (sqrt(gamma dt) / 2)(u + i v).
  Complex increment(double dt, double gamma);

 private:
  Rng rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Deterministic part of the TWA equation:
//   d alpha_j/dt = i[delta - U(|alpha_j|^2 - 1)] alpha_j - gamma/2 alpha_j
//                  - i G alpha_j^* + (i/2) sum_k J_jk alpha_k
AmplitudeState twa_drift(const AmplitudeState& alpha, const KpoParams& params,
                         const CouplingMatrix& J);

struct SdeTrajectory {
  std::vector<double> times;
  std::vector<AmplitudeState> samples;
};

// Euler-Maruyama integration from alpha0; the noise stream is the kNoise
// substream of seed, one complex increment per oscillator per step in
// oscillator order. Records the state at burn_in + k * sample_interval for
// k = 1..samples_per_repeat(). Throws NumericalError on blowup.
SdeTrajectory integrate_sde(const AmplitudeState& alpha0,
                            const KpoParams& params, const CouplingMatrix& J,
                            const SdeConfig& cfg, std::uint64_t seed);

// Streaming variant: calls visit(time, state) at every sample point instead
// of storing the samples.
void integrate_sde(
    const AmplitudeState& alpha0, const KpoParams& params,
    const CouplingMatrix& J, const SdeConfig& cfg, std::uint64_t seed,
    const std::function<void(double, const AmplitudeState&)>& visit);

// Uncoupled oscillators (J = 0), e.g. the single damped mode.
SdeTrajectory integrate_sde(const AmplitudeState& alpha0,
                            const KpoParams& params, const SdeConfig& cfg,
                            std::uint64_t seed);

struct SpinSamples {
  std::vector<SpinConfiguration> configs;
  std::size_t discarded = 0;
};

// readout_spins on every sample; samples with any amplitude at or below the
// floor are discarded and counted.
SpinSamples sample_spins(const std::vector<AmplitudeState>& samples,
                         double floor = kAmplitudeFloor);

// Probability mass over the exact Ising spectrum levels of an instance.
struct EnergyHistogram {
  std::vector<double> support;
  std::vector<double> mass;
  std::vector<std::uint64_t> counts;
  std::uint64_t total_samples = 0;

  std::size_t argmax() const;
  double mean_energy() const;
};

// Accumulates configuration energies onto a fixed spectrum.
class HistogramAccumulator {
 public:
  HistogramAccumulator(const CouplingMatrix& J, IsingSpectrum spectrum);

  // Throws Error if the energy matches no spectrum level.
  void add(const SpinConfiguration& config);
  void merge(const HistogramAccumulator& other);

  std::uint64_t total() const { return total_; }
  const IsingSpectrum& spectrum() const { return spectrum_; }
  // Throws InvalidArgument when nothing was added.
  EnergyHistogram histogram() const;

 private:
  CouplingMatrix J_;
  IsingSpectrum spectrum_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

EnergyHistogram energy_histogram(const std::vector<SpinConfiguration>& configs,
                                 const CouplingMatrix& J);
EnergyHistogram energy_histogram(const std::vector<SpinConfiguration>& configs,
                                 const CouplingMatrix& J,
                                 const IsingSpectrum& spectrum);

struct FailedRepeat {
  int repeat = 0;
  std::string reason;
};

struct DistributionRun {
  EnergyHistogram histogram;
  std::uint64_t discarded = 0;
  std::vector<FailedRepeat> failed;
  std::uint64_t master_seed = 0;
  double min_sampled_energy = 0.0;
  double max_sampled_energy = 0.0;
};

// n_repeats independent trajectories pooled into one histogram. Repeat r
// starts from random_initial(n, initial_scale,
// derive_seed(master_seed, {kInitial, r})) and draws its noise from
// derive_seed(master_seed, {kNoise, r}). Repeats run on up to `threads`
// workers; the pooled result does not depend on the worker count. Throws
// NumericalError if more than half of the repeats fail.
DistributionRun run_distribution(const CouplingMatrix& J,
                                 const KpoParams& params, const SdeConfig& cfg,
                                 std::uint64_t master_seed, int threads = 1);

}  // namespace kpo
