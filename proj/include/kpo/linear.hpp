#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kpo/ising.hpp"

namespace kpo {

// Physical parameters shared by every dynamics, in units of gamma.
struct KpoParams {
  double delta = 0.0;  // detuning omega_0 - omega_p / 2
  double g = 0.0;      // pump amplitude
  double u = 0.01;     // Kerr nonlinearity
  double gamma = 1.0;  // one-photon dissipation rate

  void validate() const;
  bool operator==(const KpoParams&) const = default;
};

// Eigen-decomposition of J and the derived squared K eigenvalues
// z_q = (delta + c_q / 2)^2.
struct ModeSpectrum {
  Eigen::VectorXd c;        // eigenvalues of J, ascending
  Eigen::VectorXd z;        // aligned with c
  Eigen::MatrixXd vectors;  // orthonormal columns aligned with c

  double z_min() const { return z.minCoeff(); }
};

// K = delta * I + J / 2.
Eigen::MatrixXd build_K(const CouplingMatrix& J, double delta);

// Throws EigenSolverError if the symmetric eigensolver fails or if an
// eigenvector of J fails to be an eigenvector of K^2 with eigenvalue z_q.
ModeSpectrum mode_spectrum(const CouplingMatrix& J, double delta);

// Closed-form spectrum of the linear evolution matrix: entry q holds
// lambda_q^+ and entry n + q holds lambda_q^-, with q ordered as in
// mode_spectrum.
std::vector<std::complex<double>> linear_eigenvalues(const KpoParams& params,
                                                     const CouplingMatrix& J);

// Explicit 2n x 2n block matrix
//   S = [[-gamma/2 I, -G I - K], [-G I + K, -gamma/2 I]]
// acting on (X_1..X_n, Y_1..Y_n).
Eigen::MatrixXd assemble_S(const KpoParams& params, const CouplingMatrix& J);

// Eigenvalues of assemble_S from a general (non-symmetric) eigensolver.
std::vector<std::complex<double>> numeric_S_eigenvalues(
    const KpoParams& params, const CouplingMatrix& J);

// max Re(lambda) over the closed-form spectrum.
double max_growth_rate(const KpoParams& params, const CouplingMatrix& J);

// G_th = sqrt(gamma^2 / 4 + z_min), the smallest pump for which the largest
// real part of the linear spectrum reaches zero. params.g is ignored.
double threshold(const KpoParams& params, const CouplingMatrix& J);

struct ThresholdReport {
  double g_th = 0.0;
  double z_min = 0.0;
  std::vector<SpinConfiguration> selected_states;
  double selected_energy = 0.0;
  bool degenerate = false;
};

inline constexpr double kDegeneracyTolerance = 1e-9;
inline constexpr double kZeroComponentTolerance = 1e-9;

// Ising state selected at threshold: the sign pattern of the eigenvectors of
// J spanning the z_min eigenspace of K^2, each normalized so its first
// component is +1. A degenerate eigenspace is reported with every basis
// vector's pattern (duplicates removed) and degenerate = true; its basis is
// first rotated by a fixed generic orthogonal matrix so the reported vectors
// do not inherit the solver's zero-component artefacts.
//
// Throws AmbiguousSignError if a reported eigenvector has a component with
// |v_j| < kZeroComponentTolerance * |v|.
ThresholdReport state_at_threshold(const CouplingMatrix& J, double delta,
                                   double gamma = 1.0);

struct ThresholdCurvePoint {
  double delta = 0.0;
  double energy = 0.0;  // NaN when ambiguous
  double g_th = 0.0;
  bool degenerate = false;
  bool ambiguous = false;
  std::string diagnostic;
};

// One record per delta via state_at_threshold; sign ambiguities become
// flagged records rather than exceptions.
std::vector<ThresholdCurvePoint> threshold_energy_curve(
    const CouplingMatrix& J, const std::vector<double>& deltas,
    double gamma = 1.0);

}  // namespace kpo
