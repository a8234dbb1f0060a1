#pragma once

#include <vector>

#include <Eigen/Dense>

namespace kpo::detail {

// Real-arithmetic mean-field drift on the packed layout
// xy = (X_0..X_{n-1}, Y_0..Y_{n-1}). Used by the RK4 and Euler-Maruyama
// loops; std::complex is avoided here to keep the inner loop branch free.
class DriftKernel {
 public:
  DriftKernel(const Eigen::MatrixXd& coupling, double delta, double g,
              double u, double gamma);
  // Uncoupled oscillators.
  DriftKernel(int n, double delta, double g, double u, double gamma);

  int size() const { return n_; }

  // out may not alias xy. Returns max_j |dA_j/dt|.
  double operator()(const double* xy, double* out) const;

 private:
  int n_;
  bool coupled_;
  std::vector<double> coupling_;  // row-major
  double delta_, g_, u_, half_gamma_;
};

}  // namespace kpo::detail
