#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "kpo/ising.hpp"
#include "kpo/linear.hpp"

namespace kpo {

using Complex = std::complex<double>;

// Complex oscillator amplitudes A_j = X_j + i Y_j.
struct AmplitudeState {
  std::vector<Complex> amplitudes;

  AmplitudeState() = default;
  explicit AmplitudeState(std::vector<Complex> a) : amplitudes(std::move(a)) {}
  explicit AmplitudeState(int n) : amplitudes(n, Complex{0.0, 0.0}) {}

  int size() const { return static_cast<int>(amplitudes.size()); }
  Complex& operator[](int j) { return amplitudes[j]; }
  const Complex& operator[](int j) const { return amplitudes[j]; }

  bool is_finite() const;
  double max_abs() const;
  AmplitudeState negated() const;

  // (X_1..X_n, Y_1..Y_n)
  Eigen::VectorXd to_quadratures() const;
  static AmplitudeState from_quadratures(const Eigen::VectorXd& xy);

  bool operator==(const AmplitudeState&) const = default;
};

struct IntegratorConfig {
  double dt = 0.01;
  double t_max = 500.0;
  double convergence_tol = 1e-9;
  int record_stride = 100;  // record every record_stride steps

  void validate() const;
  bool operator==(const IntegratorConfig&) const = default;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<AmplitudeState> states;
  bool converged = false;
  double final_time = 0.0;
  AmplitudeState final;
};

inline constexpr double kBlowupAmplitude = 1e6;
inline constexpr double kAmplitudeFloor = 1e-8;

// dA_j/dt = -i(-delta A_j + G A_j^* + U|A_j|^2 A_j - 1/2 sum_k J_jk A_k)
//           - gamma/2 A_j
AmplitudeState drift(const AmplitudeState& A, const KpoParams& params,
                     const CouplingMatrix& J);
// Uncoupled oscillators (J = 0), including the single-KPO case n = 1.
AmplitudeState drift(const AmplitudeState& A, const KpoParams& params);

// Same drift from the real block form S (X;Y) + U Z with
// Z = (|A_j|^2 Y_j ; -|A_j|^2 X_j).
Eigen::VectorXd block_drift(const Eigen::VectorXd& xy, const KpoParams& params,
                            const CouplingMatrix& J);

struct FixedPoint {
  double radius = 0.0;
  double phase = 0.0;  // in (pi/2, pi)

  Complex amplitude() const { return std::polar(radius, phase); }
};

// Above-threshold steady state of one KPO:
//   R = sqrt((delta + sqrt(G^2 - gamma^2/4)) / U),
//   tan(phi) = (gamma/2) / (sqrt(G^2 - gamma^2/4) - G).
// Throws BelowThresholdError when G < sqrt(gamma^2/4 + delta^2), and
// InvalidArgument when U <= 0.
FixedPoint single_kpo_fixed_point(const KpoParams& params);

// Fixed-step classical RK4. Stops with converged = true as soon as the sup
// norm of the drift drops below cfg.convergence_tol. Throws NumericalError on
// NaN/Inf or when any |A_j| exceeds kBlowupAmplitude.
TrajectoryRecord integrate(const AmplitudeState& A0, const KpoParams& params,
                           const CouplingMatrix& J, const IntegratorConfig& cfg);
TrajectoryRecord integrate(const AmplitudeState& A0, const KpoParams& params,
                           const IntegratorConfig& cfg);

// sigma_j = +1 for arg(A_j) in [0, pi], -1 for arg(A_j) in (-pi, 0).
// Throws UndefinedSpinError if any |A_j| <= floor.
SpinConfiguration readout_spins(const AmplitudeState& A,
                                double floor = kAmplitudeFloor);

// Same as readout_spins but returns nullopt instead of throwing.
std::optional<SpinConfiguration> try_readout_spins(
    const AmplitudeState& A, double floor = kAmplitudeFloor);

// max_j |sin(2 arg A_j) + gamma / (2 G)|.
double binarization_residual(const AmplitudeState& A, const KpoParams& params,
                             double floor = kAmplitudeFloor);

// X_j, Y_j independent uniform in [-scale, scale], drawn from the kInitial
// substream of seed in the order X_0, Y_0, X_1, Y_1, ...
AmplitudeState random_initial(int n, double scale, std::uint64_t seed);

inline constexpr double kDefaultInitialScale = 0.01;

}  // namespace kpo
