#include "drift_kernel.hpp"

#include <algorithm>
#include <cmath>

namespace kpo::detail {

DriftKernel::DriftKernel(const Eigen::MatrixXd& coupling, double delta,
                         double g, double u, double gamma)
    : n_(static_cast<int>(coupling.rows())),
      coupled_(coupling.cwiseAbs().maxCoeff() > 0.0),
      coupling_(static_cast<std::size_t>(n_) * n_),
      delta_(delta),
      g_(g),
      u_(u),
      half_gamma_(0.5 * gamma) {
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k < n_; ++k) coupling_[j * n_ + k] = coupling(j, k);
}

DriftKernel::DriftKernel(int n, double delta, double g, double u, double gamma)
    : n_(n), coupled_(false), delta_(delta), g_(g), u_(u),
      half_gamma_(0.5 * gamma) {}

double DriftKernel::operator()(const double* xy, double* out) const {
  const double* x = xy;
  const double* y = xy + n_;
  double* dx = out;
  double* dy = out + n_;
  double sup = 0.0;
  for (int j = 0; j < n_; ++j) {
    double hx = 0.0, hy = 0.0;
    if (coupled_) {
      const double* row = coupling_.data() + static_cast<std::size_t>(j) * n_;
      for (int k = 0; k < n_; ++k) {
        hx += row[k] * x[k];
        hy += row[k] * y[k];
      }
    }
    const double r2 = x[j] * x[j] + y[j] * y[j];
    const double w = delta_ - u_ * r2;
    dx[j] = -half_gamma_ * x[j] - (g_ + w) * y[j] - 0.5 * hy;
    dy[j] = (w - g_) * x[j] - half_gamma_ * y[j] + 0.5 * hx;
    sup = std::max(sup, dx[j] * dx[j] + dy[j] * dy[j]);
  }
  return std::sqrt(sup);
}

}  // namespace kpo::detail
