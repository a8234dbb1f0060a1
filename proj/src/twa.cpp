#include "kpo/twa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drift_kernel.hpp"
#include "kpo/errors.hpp"
#include "kpo/parallel.hpp"

namespace kpo {

namespace {

long long exact_multiple(double span, double dt, const char* what) {
  const long long steps = std::llround(span / dt);
  if (std::abs(static_cast<double>(steps) * dt - span) > 1e-9 * std::max(1.0, span))
    throw InvalidArgument(std::string("sde.") + what +
                          " must be an integer multiple of sde.dt");
  return steps;
}

}  // namespace

void SdeConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidArgument("sde.dt must be > 0");
  if (!(sample_interval >= dt))
    throw InvalidArgument("sde.sample_interval must be >= sde.dt");
  if (!(burn_in >= 0.0)) throw InvalidArgument("sde.burn_in must be >= 0");
  if (!(t_final >= burn_in))
    throw InvalidArgument("sde.t_final must be >= sde.burn_in");
  if (n_repeats < 1) throw InvalidArgument("sde.n_repeats must be >= 1");
  if (!(noise_scale >= 0.0))
    throw InvalidArgument("sde.noise_scale must be >= 0");
  if (!(initial_scale > 0.0))
    throw InvalidArgument("sde.initial_scale must be > 0");
  exact_multiple(sample_interval, dt, "sample_interval");
  exact_multiple(burn_in, dt, "burn_in");
}

long long SdeConfig::steps_per_sample() const {
  return exact_multiple(sample_interval, dt, "sample_interval");
}

long long SdeConfig::burn_in_steps() const {
  return exact_multiple(burn_in, dt, "burn_in");
}

long long SdeConfig::samples_per_repeat() const {
  return static_cast<long long>(
      std::floor((t_final - burn_in) / sample_interval + 1e-9));
}

Complex WhiteNoise::sample(double dt) {
  const double u = normal_(rng_);
  const double v = normal_(rng_);
  return Complex(u, v) / std::sqrt(2.0 * dt);
}

Complex WhiteNoise::increment(double dt, double gamma) {
  const double u = normal_(rng_);
  const double v = normal_(rng_);
  return 0.5 * std::sqrt(gamma * dt) * Complex(u, v);
}

AmplitudeState twa_drift(const AmplitudeState& alpha, const KpoParams& params,
                         const CouplingMatrix& J) {
  const int n = J.size();
  if (alpha.size() != n)
    throw DimensionMismatch("twa_drift: state size " +
                            std::to_string(alpha.size()) +
                            " vs coupling size " + std::to_string(n));
  const Complex i(0.0, 1.0);
  AmplitudeState out(n);
  for (int j = 0; j < n; ++j) {
    Complex hop(0.0, 0.0);
    for (int k = 0; k < n; ++k) hop += J(j, k) * alpha[k];
    const Complex a = alpha[j];
    out[j] = i * (params.delta - params.u * (std::norm(a) - 1.0)) * a -
             0.5 * params.gamma * a - i * std::conj(a) * params.g +
             0.5 * i * hop;
  }
  return out;
}

namespace {

// The TWA drift equals the mean-field drift with delta -> delta + U, so both
// share the real-arithmetic kernel; twa_drift() is the independent complex
// route checked against it in the tests.
void euler_maruyama(
    const AmplitudeState& alpha0, const detail::DriftKernel& f,
    const KpoParams& params, const SdeConfig& cfg, std::uint64_t seed,
    const std::function<void(double, const AmplitudeState&)>& visit) {
  cfg.validate();
  const int n = f.size();
  if (alpha0.size() != n)
    throw DimensionMismatch("integrate_sde: initial state has wrong size");
  const long long per_sample = cfg.steps_per_sample();
  const long long burn = cfg.burn_in_steps();
  const long long samples = cfg.samples_per_repeat();
  const long long total = burn + samples * per_sample;
  const double dt = cfg.dt;
  const double gamma = params.gamma;
  const double blowup2 = kBlowupAmplitude * kBlowupAmplitude;

  WhiteNoise noise(derive_seed(seed, {tag(Stream::kNoise)}));

  std::vector<double> y(2 * n), k(2 * n);
  for (int j = 0; j < n; ++j) {
    y[j] = alpha0[j].real();
    y[n + j] = alpha0[j].imag();
  }
  AmplitudeState snapshot(n);
  for (long long step = 1; step <= total; ++step) {
    f(y.data(), k.data());
    for (int j = 0; j < n; ++j) {
      const Complex dw = cfg.noise_scale * noise.increment(dt, gamma);
      y[j] += dt * k[j] + dw.real();
      y[n + j] += dt * k[n + j] + dw.imag();
      const double r2 = y[j] * y[j] + y[n + j] * y[n + j];
      if (!(r2 <= blowup2))
        throw NumericalError("integrate_sde blew up at oscillator " +
                             std::to_string(j) + ", t=" +
                             std::to_string(static_cast<double>(step) * dt));
    }
    if (step > burn && (step - burn) % per_sample == 0) {
      for (int j = 0; j < n; ++j) snapshot[j] = Complex(y[j], y[n + j]);
      visit(cfg.burn_in +
                static_cast<double>((step - burn) / per_sample) *
                    cfg.sample_interval,
            snapshot);
    }
  }
}

SdeTrajectory collect(
    const std::function<void(
        const std::function<void(double, const AmplitudeState&)>&)>& run) {
  SdeTrajectory out;
  run([&](double t, const AmplitudeState& s) {
    out.times.push_back(t);
    out.samples.push_back(s);
  });
  return out;
}

}  // namespace

void integrate_sde(
    const AmplitudeState& alpha0, const KpoParams& params,
    const CouplingMatrix& J, const SdeConfig& cfg, std::uint64_t seed,
    const std::function<void(double, const AmplitudeState&)>& visit) {
  params.validate();
  const detail::DriftKernel f(J.entries(), params.delta + params.u, params.g,
                              params.u, params.gamma);
  euler_maruyama(alpha0, f, params, cfg, seed, visit);
}

SdeTrajectory integrate_sde(const AmplitudeState& alpha0,
                            const KpoParams& params, const CouplingMatrix& J,
                            const SdeConfig& cfg, std::uint64_t seed) {
  return collect([&](const auto& visit) {
    integrate_sde(alpha0, params, J, cfg, seed, visit);
  });
}

SdeTrajectory integrate_sde(const AmplitudeState& alpha0,
                            const KpoParams& params, const SdeConfig& cfg,
                            std::uint64_t seed) {
  params.validate();
  const detail::DriftKernel f(alpha0.size(), params.delta + params.u, params.g,
                              params.u, params.gamma);
  return collect([&](const auto& visit) {
    euler_maruyama(alpha0, f, params, cfg, seed, visit);
  });
}

SpinSamples sample_spins(const std::vector<AmplitudeState>& samples,
                         double floor) {
  SpinSamples out;
  out.configs.reserve(samples.size());
  for (const auto& s : samples) {
    if (auto c = try_readout_spins(s, floor))
      out.configs.push_back(*std::move(c));
    else
      ++out.discarded;
  }
  return out;
}

std::size_t EnergyHistogram::argmax() const {
  return static_cast<std::size_t>(
      std::max_element(counts.begin(), counts.end()) - counts.begin());
}

double EnergyHistogram::mean_energy() const {
  double m = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) m += support[i] * mass[i];
  return m;
}

HistogramAccumulator::HistogramAccumulator(const CouplingMatrix& J,
                                           IsingSpectrum spectrum)
    : J_(J), spectrum_(std::move(spectrum)), counts_(spectrum_.levels.size()) {
  if (spectrum_.n != J.size())
    throw DimensionMismatch("HistogramAccumulator: spectrum size mismatch");
}

void HistogramAccumulator::add(const SpinConfiguration& config) {
  const double e = ising_energy(J_, config);
  const auto level = spectrum_.find_level(e);
  if (!level)
    throw Error("energy " + std::to_string(e) +
                " is not a level of the enumerated spectrum");
  ++counts_[*level];
  ++total_;
}

void HistogramAccumulator::merge(const HistogramAccumulator& other) {
  if (other.counts_.size() != counts_.size())
    throw DimensionMismatch("HistogramAccumulator::merge: spectrum mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

EnergyHistogram HistogramAccumulator::histogram() const {
  if (total_ == 0)
    throw InvalidArgument("energy histogram: no samples to bin");
  EnergyHistogram h;
  h.total_samples = total_;
  h.counts = counts_;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    h.support.push_back(spectrum_.levels[i].energy);
    h.mass.push_back(static_cast<double>(counts_[i]) /
                     static_cast<double>(total_));
  }
  return h;
}

EnergyHistogram energy_histogram(const std::vector<SpinConfiguration>& configs,
                                 const CouplingMatrix& J,
                                 const IsingSpectrum& spectrum) {
  HistogramAccumulator acc(J, spectrum);
  for (const auto& c : configs) acc.add(c);
  return acc.histogram();
}

EnergyHistogram energy_histogram(const std::vector<SpinConfiguration>& configs,
                                 const CouplingMatrix& J) {
  return energy_histogram(configs, J, enumerate_spectrum(J));
}

DistributionRun run_distribution(const CouplingMatrix& J,
                                 const KpoParams& params, const SdeConfig& cfg,
                                 std::uint64_t master_seed, int threads) {
  params.validate();
  cfg.validate();
  const IsingSpectrum spectrum = enumerate_spectrum(J);
  const int n = J.size();

  struct RepeatResult {
    explicit RepeatResult(HistogramAccumulator a) : acc(std::move(a)) {}
    HistogramAccumulator acc;
    std::uint64_t discarded = 0;
    double min_e = std::numeric_limits<double>::infinity();
    double max_e = -std::numeric_limits<double>::infinity();
    bool failed = false;
    std::string reason;
  };
  std::vector<RepeatResult> results;
  results.reserve(cfg.n_repeats);
  for (int r = 0; r < cfg.n_repeats; ++r)
    results.emplace_back(HistogramAccumulator(J, spectrum));

  parallel_for(static_cast<std::size_t>(cfg.n_repeats), threads,
               [&](std::size_t r) {
    RepeatResult& res = results[r];
    const AmplitudeState alpha0 = random_initial(
        n, cfg.initial_scale,
        derive_seed(master_seed, {tag(Stream::kInitial), r}));
    const std::uint64_t noise_seed =
        derive_seed(master_seed, {tag(Stream::kNoise), r});
    try {
      integrate_sde(alpha0, params, J, cfg, noise_seed,
                    [&](double, const AmplitudeState& s) {
                      auto c = try_readout_spins(s);
                      if (!c) {
                        ++res.discarded;
                        return;
                      }
                      const double e = ising_energy(J, *c);
                      res.min_e = std::min(res.min_e, e);
                      res.max_e = std::max(res.max_e, e);
                      res.acc.add(*c);
                    });
    } catch (const NumericalError& e) {
      res.failed = true;
      res.reason = e.what();
    }
  });

  DistributionRun out;
  out.master_seed = master_seed;
  out.min_sampled_energy = std::numeric_limits<double>::infinity();
  out.max_sampled_energy = -std::numeric_limits<double>::infinity();
  HistogramAccumulator pooled(J, spectrum);
  for (int r = 0; r < cfg.n_repeats; ++r) {
    const RepeatResult& res = results[r];
    if (res.failed) {
      out.failed.push_back({r, res.reason});
      continue;
    }
    pooled.merge(res.acc);
    out.discarded += res.discarded;
    out.min_sampled_energy = std::min(out.min_sampled_energy, res.min_e);
    out.max_sampled_energy = std::max(out.max_sampled_energy, res.max_e);
  }
  if (2 * out.failed.size() > static_cast<std::size_t>(cfg.n_repeats))
    throw NumericalError("run_distribution: " +
                         std::to_string(out.failed.size()) + " of " +
                         std::to_string(cfg.n_repeats) + " repeats failed; " +
                         out.failed.front().reason);
  out.histogram = pooled.histogram();
  return out;
}

}  // namespace kpo
