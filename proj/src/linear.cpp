#include "kpo/linear.hpp"

#include <algorithm>
#include <cmath>

#include "kpo/errors.hpp"

namespace kpo {

void KpoParams::validate() const {
  if (!std::isfinite(delta)) throw InvalidArgument("params.delta must be finite");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw InvalidArgument("params.gamma must be > 0");
  if (!(g >= 0.0) || !std::isfinite(g))
    throw InvalidArgument("params.g must be >= 0");
  if (!(u >= 0.0) || !std::isfinite(u))
    throw InvalidArgument("params.u must be >= 0");
}

Eigen::MatrixXd build_K(const CouplingMatrix& J, double delta) {
  const int n = J.size();
  return delta * Eigen::MatrixXd::Identity(n, n) + 0.5 * J.entries();
}

ModeSpectrum mode_spectrum(const CouplingMatrix& J, double delta) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(J.entries());
  if (solver.info() != Eigen::Success)
    throw EigenSolverError("mode_spectrum: symmetric eigensolver failed");
  ModeSpectrum out;
  out.c = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  out.z = (out.c.array() * 0.5 + delta).square().matrix();

  const Eigen::MatrixXd K = build_K(J, delta);
  const Eigen::MatrixXd K2 = K * K;
  const double scale = std::max(1.0, K2.norm());
  for (Eigen::Index q = 0; q < out.c.size(); ++q) {
    const auto v = out.vectors.col(q);
    if ((K2 * v - out.z(q) * v).norm() > 1e-10 * scale)
      throw EigenSolverError(
          "mode_spectrum: eigenvector of J is not an eigenvector of K^2");
  }
  return out;
}

std::vector<std::complex<double>> linear_eigenvalues(const KpoParams& params,
                                                     const CouplingMatrix& J) {
  params.validate();
  const ModeSpectrum modes = mode_spectrum(J, params.delta);
  const auto n = modes.z.size();
  std::vector<std::complex<double>> out(2 * n);
  for (Eigen::Index q = 0; q < n; ++q) {
    const std::complex<double> root =
        std::sqrt(std::complex<double>(params.g * params.g - modes.z(q), 0.0));
    out[q] = -0.5 * params.gamma + root;
    out[n + q] = -0.5 * params.gamma - root;
  }
  return out;
}

Eigen::MatrixXd assemble_S(const KpoParams& params, const CouplingMatrix& J) {
  params.validate();
  const int n = J.size();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd K = build_K(J, params.delta);
  Eigen::MatrixXd S(2 * n, 2 * n);
  S.topLeftCorner(n, n) = -0.5 * params.gamma * I;
  S.topRightCorner(n, n) = -params.g * I - K;
  S.bottomLeftCorner(n, n) = -params.g * I + K;
  S.bottomRightCorner(n, n) = -0.5 * params.gamma * I;
  return S;
}

std::vector<std::complex<double>> numeric_S_eigenvalues(
    const KpoParams& params, const CouplingMatrix& J) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(assemble_S(params, J),
                                             /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw EigenSolverError("numeric_S_eigenvalues: eigensolver failed");
  const Eigen::VectorXcd ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double max_growth_rate(const KpoParams& params, const CouplingMatrix& J) {
  const auto ev = linear_eigenvalues(params, J);
  double best = -INFINITY;
  for (const auto& l : ev) best = std::max(best, l.real());
  return best;
}

double threshold(const KpoParams& params, const CouplingMatrix& J) {
  params.validate();
  const ModeSpectrum modes = mode_spectrum(J, params.delta);
  return std::sqrt(0.25 * params.gamma * params.gamma + modes.z_min());
}

namespace {

// Fixed, well-conditioned orthogonal m x m matrix with no structural zeros.
Eigen::MatrixXd generic_rotation(Eigen::Index m) {
  Eigen::MatrixXd seed(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      seed(i, j) = std::sin(1.0 + std::sqrt(2.0) * static_cast<double>(i + 1) +
                            std::sqrt(3.0) * static_cast<double>(j + 1) *
                                static_cast<double>(i + 2));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(seed);
  return qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
}

SpinConfiguration sign_pattern(const Eigen::VectorXd& v, double delta) {
  const double cutoff = kZeroComponentTolerance * v.norm();
  std::vector<int> spins(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (std::abs(v(j)) < cutoff)
      throw AmbiguousSignError(
          "state_at_threshold: eigenvector component " + std::to_string(j) +
          " is zero at delta=" + std::to_string(delta) +
          "; sign readout undefined");
    spins[j] = v(j) > 0.0 ? 1 : -1;
  }
  if (spins[0] < 0)
    for (int& s : spins) s = -s;
  return SpinConfiguration(std::move(spins));
}

}  // namespace

ThresholdReport state_at_threshold(const CouplingMatrix& J, double delta,
                                   double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be > 0");
  const ModeSpectrum modes = mode_spectrum(J, delta);
  ThresholdReport report;
  report.z_min = modes.z_min();
  report.g_th = std::sqrt(0.25 * gamma * gamma + report.z_min);

  const double tol = kDegeneracyTolerance * std::max(1.0, modes.z.maxCoeff());
  std::vector<Eigen::Index> members;
  for (Eigen::Index q = 0; q < modes.z.size(); ++q)
    if (modes.z(q) - report.z_min <= tol) members.push_back(q);

  const auto m = static_cast<Eigen::Index>(members.size());
  Eigen::MatrixXd basis(J.size(), m);
  for (Eigen::Index i = 0; i < m; ++i)
    basis.col(i) = modes.vectors.col(members[i]);
  report.degenerate = m > 1;
  if (report.degenerate) basis = basis * generic_rotation(m);

  for (Eigen::Index i = 0; i < m; ++i) {
    SpinConfiguration s = sign_pattern(basis.col(i), delta);
    if (std::find(report.selected_states.begin(), report.selected_states.end(),
                  s) == report.selected_states.end())
      report.selected_states.push_back(std::move(s));
  }
  report.selected_energy = ising_energy(J, report.selected_states.front());
  return report;
}

std::vector<ThresholdCurvePoint> threshold_energy_curve(
    const CouplingMatrix& J, const std::vector<double>& deltas, double gamma) {
  if (deltas.empty())
    throw InvalidArgument("threshold_energy_curve: empty delta grid");
  std::vector<ThresholdCurvePoint> curve;
  curve.reserve(deltas.size());
  for (double delta : deltas) {
    ThresholdCurvePoint p;
    p.delta = delta;
    try {
      const ThresholdReport r = state_at_threshold(J, delta, gamma);
      p.energy = r.selected_energy;
      p.g_th = r.g_th;
      p.degenerate = r.degenerate;
    } catch (const AmbiguousSignError& e) {
      p.energy = std::nan("");
      p.g_th = std::sqrt(0.25 * gamma * gamma + mode_spectrum(J, delta).z_min());
      p.ambiguous = true;
      p.diagnostic = e.what();
    }
    curve.push_back(std::move(p));
  }
  return curve;
}

}  // namespace kpo
