#pragma once

#include <functional>

#include <Eigen/Dense>

namespace abf {

struct SmoothObjective {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> gradient;
  std::function<void(const Eigen::VectorXd&, Eigen::MatrixXd&)> hessian;
  // Points outside the domain (e.g. non-positive profiles) are rejected by
  // the line searches.
  std::function<bool(const Eigen::VectorXd&)> feasible;
};

struct MinimizeOptions {
  double grad_tol = 1e-10;  // relative to max(|f|, 1e-300)
  int max_gradient_steps = 4000;
  int max_newton_steps = 200;
  double switch_tol = 1e-5;  // gradient level at which Newton takes over
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  int saddle_escapes = 0;
  bool converged = false;
};

// Barzilai-Borwein gradient phase, then Newton with the Hessian replaced by
// |H| (absolute eigenvalues). A converged point with negative curvature is
// perturbed along the offending eigenvector and the search resumes.
MinimizeResult minimize_smooth(const SmoothObjective& obj,
                               const Eigen::VectorXd& x0,
                               const MinimizeOptions& opts);

}  // namespace abf
