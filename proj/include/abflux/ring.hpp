#pragma once

#include <string>
#include <vector>

#include "abflux/constants.hpp"
#include "abflux/minimize.hpp"

namespace abf {

struct RingSolverOptions {
  int n = 128;  // grid points on S^1, even
  MinimizeOptions min;
};

// param is mu (p < 2) or lambda (p > 2).
struct RingProblem {
  FluxParams fp;
  double param = 0.0;
  RingSolverOptions opts;
};

struct OptimizationResult {
  double value = 0.0;
  std::vector<double> profile;  // full grid, unit L2 (p<2) or unit Lp (p>2)
  bool symmetric = false;
  double gap_to_constant = 0.0;
  double constant_value = 0.0;
  double sup_deviation = 0.0;  // sup |u - mean| / mean
  bool vanishing = false;      // inverse term dropped, profile pinned at 0
  int iterations = 0;
  int restarts = 0;
  double grad_norm = 0.0;
  bool converged = false;
};

// Even profiles u(theta) = u(-theta) on n uniform nodes, unknowns at nodes
// 0..n/2.
struct ReducedRing {
  int n = 0, m = 0;
  Eigen::VectorXd w;  // quadrature weight of each orbit
  Eigen::MatrixXd K;  // Dirichlet form, D = x^T K x
};

// Cached per n; the reference stays valid for the process lifetime.
const ReducedRing& reduced_ring(int n);

// Q[u] on the uniform grid of u.size() points. drop_inverse sets the
// a^2 ||u^-1||_2^-2 term to 0.
double ring_quotient(const FluxParams& fp, double param,
                     const std::vector<double>& u, bool drop_inverse = false);

// Quotient of the constant profile, a^2 + param.
double ring_constant_value(const FluxParams& fp, double param);

OptimizationResult optimal_constant_ring(const RingProblem& rp);

// (1 - 4a^2 - mu(2-p)) / 2
double second_variation_coefficient(double a, double p, double mu);

// Richardson extrapolation of (Q[1 + eps cos] - Q[1]) / eps^2 over eps and
// eps/2, evaluated by quadrature.
double second_variation_oracle(double a, double p, double mu,
                               double eps = 1e-2);

struct BifurcationResult {
  double estimate = 0.0;
  double lower = 0.0;  // last symmetric parameter
  double upper = 0.0;  // last non-symmetric parameter
  double closed_form = 0.0;
  double rel_error = 0.0;
  int solves = 0;
};

BifurcationResult locate_bifurcation(double a_raw, double p,
                                     const RingSolverOptions& opts = {});

// Parameter at `fraction` of the rigidity threshold. For p > 2 the fraction
// applies to the shifted value lambda + a^2.
double ring_parameter_at(const FluxParams& fp, double fraction);

}  // namespace abf
