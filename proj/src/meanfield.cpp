#include "kpo/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "drift_kernel.hpp"
#include "kpo/errors.hpp"
#include "kpo/rng.hpp"

namespace kpo {

bool AmplitudeState::is_finite() const {
  return std::all_of(amplitudes.begin(), amplitudes.end(), [](Complex a) {
    return std::isfinite(a.real()) && std::isfinite(a.imag());
  });
}

double AmplitudeState::max_abs() const {
  double m = 0.0;
  for (Complex a : amplitudes) m = std::max(m, std::abs(a));
  return m;
}

AmplitudeState AmplitudeState::negated() const {
  AmplitudeState out = *this;
  for (Complex& a : out.amplitudes) a = -a;
  return out;
}

Eigen::VectorXd AmplitudeState::to_quadratures() const {
  const int n = size();
  Eigen::VectorXd xy(2 * n);
  for (int j = 0; j < n; ++j) {
    xy(j) = amplitudes[j].real();
    xy(n + j) = amplitudes[j].imag();
  }
  return xy;
}

AmplitudeState AmplitudeState::from_quadratures(const Eigen::VectorXd& xy) {
  const auto n = static_cast<int>(xy.size() / 2);
  AmplitudeState out(n);
  for (int j = 0; j < n; ++j) out[j] = Complex(xy(j), xy(n + j));
  return out;
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidArgument("integrator.dt must be > 0");
  if (dt > 0.05) throw InvalidArgument("integrator.dt must be <= 0.05");
  if (!(t_max > 0.0)) throw InvalidArgument("integrator.t_max must be > 0");
  if (!(convergence_tol > 0.0))
    throw InvalidArgument("integrator.convergence_tol must be > 0");
  if (record_stride < 1)
    throw InvalidArgument("integrator.record_stride must be >= 1");
}

namespace {

AmplitudeState drift_impl(const AmplitudeState& A, const KpoParams& params,
                          const Eigen::MatrixXd* J) {
  const int n = A.size();
  const Complex minus_i(0.0, -1.0);
  AmplitudeState out(n);
  for (int j = 0; j < n; ++j) {
    Complex hop(0.0, 0.0);
    if (J)
      for (int k = 0; k < n; ++k) hop += (*J)(j, k) * A[k];
    const Complex a = A[j];
    const Complex bracket = -params.delta * a + params.g * std::conj(a) +
                            params.u * std::norm(a) * a - 0.5 * hop;
    out[j] = minus_i * bracket - 0.5 * params.gamma * a;
  }
  return out;
}

void check_state(const double* xy, int n) {
  for (int j = 0; j < n; ++j) {
    const double x = xy[j], y = xy[n + j];
    if (!std::isfinite(x) || !std::isfinite(y))
      throw NumericalError("integration produced a non-finite amplitude");
    if (x * x + y * y > kBlowupAmplitude * kBlowupAmplitude)
      throw NumericalError("integration blew up: |A_" + std::to_string(j) +
                           "| > " + std::to_string(kBlowupAmplitude));
  }
}

TrajectoryRecord rk4(const AmplitudeState& A0, const detail::DriftKernel& f,
                     const IntegratorConfig& cfg) {
  cfg.validate();
  const int n = f.size();
  const int m = 2 * n;
  Eigen::VectorXd y = A0.to_quadratures();
  Eigen::VectorXd k1(m), k2(m), k3(m), k4(m), tmp(m);
  const auto steps = static_cast<long long>(std::ceil(cfg.t_max / cfg.dt - 1e-9));
  const double dt = cfg.dt;

  TrajectoryRecord rec;
  long long step = 0;
  long long last_recorded = -1;
  while (true) {
    check_state(y.data(), n);
    const double sup = f(y.data(), k1.data());
    if (step % cfg.record_stride == 0) {
      rec.times.push_back(static_cast<double>(step) * dt);
      rec.states.push_back(AmplitudeState::from_quadratures(y));
      last_recorded = step;
    }
    if (sup < cfg.convergence_tol) {
      rec.converged = true;
      break;
    }
    if (step == steps) break;
    tmp = y + 0.5 * dt * k1;
    f(tmp.data(), k2.data());
    tmp = y + 0.5 * dt * k2;
    f(tmp.data(), k3.data());
    tmp = y + dt * k3;
    f(tmp.data(), k4.data());
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    ++step;
  }
  rec.final_time = static_cast<double>(step) * dt;
  rec.final = AmplitudeState::from_quadratures(y);
  if (last_recorded != step) {
    rec.times.push_back(rec.final_time);
    rec.states.push_back(rec.final);
  }
  return rec;
}

}  // namespace

AmplitudeState drift(const AmplitudeState& A, const KpoParams& params,
                     const CouplingMatrix& J) {
  if (A.size() != J.size())
    throw DimensionMismatch("drift: state size " + std::to_string(A.size()) +
                            " vs coupling size " + std::to_string(J.size()));
  return drift_impl(A, params, &J.entries());
}

AmplitudeState drift(const AmplitudeState& A, const KpoParams& params) {
  return drift_impl(A, params, nullptr);
}

Eigen::VectorXd block_drift(const Eigen::VectorXd& xy, const KpoParams& params,
                            const CouplingMatrix& J) {
  const int n = J.size();
  if (xy.size() != 2 * n)
    throw DimensionMismatch("block_drift: expected " + std::to_string(2 * n) +
                            " quadratures");
  Eigen::VectorXd Z(2 * n);
  for (int j = 0; j < n; ++j) {
    const double x = xy(j), y = xy(n + j);
    const double r2 = x * x + y * y;
    Z(j) = r2 * y;
    Z(n + j) = -r2 * x;
  }
  return assemble_S(params, J) * xy + params.u * Z;
}

FixedPoint single_kpo_fixed_point(const KpoParams& params) {
  params.validate();
  if (!(params.u > 0.0))
    throw InvalidArgument("single_kpo_fixed_point: U must be > 0");
  const double quarter_gamma2 = 0.25 * params.gamma * params.gamma;
  const double g_th = std::sqrt(quarter_gamma2 + params.delta * params.delta);
  if (params.g < g_th)
    throw BelowThresholdError(
        "single_kpo_fixed_point: G=" + std::to_string(params.g) +
        " is below threshold G_th=" + std::to_string(g_th) +
        "; the stable state is the origin R=0");
  const double s = std::sqrt(std::max(0.0, params.g * params.g - quarter_gamma2));
  FixedPoint fp;
  fp.radius = std::sqrt(std::max(0.0, (params.delta + s) / params.u));
  fp.phase = std::atan2(0.5 * params.gamma, s - params.g);
  return fp;
}

TrajectoryRecord integrate(const AmplitudeState& A0, const KpoParams& params,
                           const CouplingMatrix& J,
                           const IntegratorConfig& cfg) {
  params.validate();
  if (A0.size() != J.size())
    throw DimensionMismatch("integrate: state size " +
                            std::to_string(A0.size()) + " vs coupling size " +
                            std::to_string(J.size()));
  const detail::DriftKernel f(J.entries(), params.delta, params.g, params.u,
                              params.gamma);
  return rk4(A0, f, cfg);
}

TrajectoryRecord integrate(const AmplitudeState& A0, const KpoParams& params,
                           const IntegratorConfig& cfg) {
  params.validate();
  const detail::DriftKernel f(A0.size(), params.delta, params.g, params.u,
                              params.gamma);
  return rk4(A0, f, cfg);
}

std::optional<SpinConfiguration> try_readout_spins(const AmplitudeState& A,
                                                   double floor) {
  std::vector<int> spins(A.size());
  for (int j = 0; j < A.size(); ++j) {
    if (!(std::abs(A[j]) > floor)) return std::nullopt;
    double phi = std::arg(A[j]);
    if (phi == -std::numbers::pi) phi = std::numbers::pi;
    spins[j] = phi >= 0.0 ? 1 : -1;
  }
  return SpinConfiguration(std::move(spins));
}

SpinConfiguration readout_spins(const AmplitudeState& A, double floor) {
  auto s = try_readout_spins(A, floor);
  if (!s)
    throw UndefinedSpinError(
        "readout_spins: an oscillator amplitude is at or below the floor " +
        std::to_string(floor) + " (not oscillating)");
  return *std::move(s);
}

double binarization_residual(const AmplitudeState& A, const KpoParams& params,
                             double floor) {
  if (!(params.g > 0.0))
    throw InvalidArgument("binarization_residual: G must be > 0");
  const double target = params.gamma / (2.0 * params.g);
  double worst = 0.0;
  for (int j = 0; j < A.size(); ++j) {
    if (!(std::abs(A[j]) > floor))
      throw UndefinedSpinError(
          "binarization_residual: amplitude below floor at oscillator " +
          std::to_string(j));
    worst = std::max(worst, std::abs(std::sin(2.0 * std::arg(A[j])) + target));
  }
  return worst;
}

AmplitudeState random_initial(int n, double scale, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("random_initial: n must be >= 1");
  if (!(scale > 0.0)) throw InvalidArgument("random_initial: scale must be > 0");
  Rng rng = make_rng(seed, {tag(Stream::kInitial)});
  AmplitudeState out(n);
  for (int j = 0; j < n; ++j) {
    const double x = scale * (2.0 * uniform01(rng) - 1.0);
    const double y = scale * (2.0 * uniform01(rng) - 1.0);
    out[j] = Complex(x, y);
  }
  return out;
}

}  // namespace kpo
