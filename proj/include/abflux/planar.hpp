#pragma once

#include <vector>

#include "abflux/numerics.hpp"

namespace abf {

// Planar parameters. ckn_b = ckn_a + 2/p, alpha = (p-2)/2 * kappa with
// kappa = sqrt(lambda + a^2), gamma = ckn_a^2 - lambda < ckn_a^2 + a^2.
struct HSParams {
  double a = 0.0;
  double p = 4.0;
  double lambda = 0.0;
  double kappa = 0.0;
  double alpha = 0.0;
  double ckn_a = 0.0;
  double ckn_b = 0.5;
  double gamma = 0.0;

  static HSParams make(double a_raw, double p, double lambda,
                       double ckn_a = 0.0);
};

// Radial functions on R^2 in s = log r, angular sectors in theta.
struct EmdenFowlerField {
  GridPtr grid;
  std::vector<cd> values;
  double decay_check = 0.0;  // max |value| on s = +-L over the peak

  DiscreteField field() const {
    return DiscreteField::complex_field(grid, values);
  }
};

inline constexpr double kDecayTolerance = 1e-10;

double measure_decay(const GridPtr& grid, const std::vector<cd>& v);
EmdenFowlerField make_emden_fowler(GridPtr grid, std::vector<cd> v);

// (28 + 1.4/(p-2)) / kappa, so that the extremal tail at s = L is below 1e-12.
double planar_truncation(const HSParams& hp);

GridPtr planar_grid(const HSParams& hp, int ns = 2049, int ntheta = 16);

// (2 cosh(alpha s))^{-2/(p-2)} scaled to peak 1, radial sector only.
EmdenFowlerField extremal_profile(const HSParams& hp, const GridPtr& grid);

// (int |grad_A psi|^2 + lambda int |psi|^2 |x|^-2) / (int |psi|^p |x|^-2)^{2/p}
double hs_rayleigh_quotient(const EmdenFowlerField& psi, const HSParams& hp);

struct RadialSolution {
  EmdenFowlerField profile;  // homoclinic u'' = kappa^2 u - u^{p-1}, unscaled
  double u0 = 0.0;           // shooting value u(0)
  double mu_numeric = 0.0;   // Rayleigh quotient of the profile
  double energy_residual = 0.0;
  int shots = 0;
};

RadialSolution solve_radial_euler_lagrange(const HSParams& hp,
                                           const GridPtr& grid = nullptr);

struct K1Options {
  int n = 2400;  // interior points on [-L, L]
  double tol = 1e-11;
};

struct K1Result {
  double eigenvalue = 0.0;
  double residual = 0.0;
  double truncation = 0.0;
  int n = 0;
};

// Lowest eigenvalue of the k = 1 angular linearization around the radial
// extremal, acting on (f, g) in the real basis of the +1/-1 sectors.
K1Result k1_second_variation(const HSParams& hp, const K1Options& opts = {});

struct K1Crossing {
  double lambda = 0.0;  // zero of lambda -> k1 eigenvalue
  double lambda_star = 0.0;
  double lambda_bullet = 0.0;
  double offset = 0.0;  // lambda - lambda_bullet
  int evaluations = 0;
};

K1Crossing k1_sign_change(double a_raw, double p, const K1Options& opts = {});

struct GNRecord {
  double p = 4.0;
  std::vector<double> lambdas;
  std::vector<double> mu0;        // non-magnetic optimum at each lambda
  std::vector<double> constants;  // mu0 / lambda^{2/p}
  double c_p = 0.0;               // constant at lambda = 1
  double max_spread = 0.0;        // max relative deviation among constants
  double fitted_exponent = 0.0;   // log-log slope of mu0 over lambda
  double exponent_interp_l2 = 0.0;  // 2/p, lambda on the L2 term
  double exponent_gn2 = 0.0;        // p/2, lambda on the Lp term
};

// Ground state of u'' + u'/r = lambda u - u^{p-1} on R^2 by shooting; the
// optimum of (||grad psi||^2 + lambda ||psi||_2^2) / ||psi||_p^2.
double gn_optimum(double p, double lambda);

GNRecord gn_constant(double p, const std::vector<double>& lambdas = {0.5, 1.0, 2.0});

struct CKNRecord {
  double lhs_ckn = 0.0;       // int |grad_A phi|^2 |x|^{-2 ckn_a}
  double rhs_identity = 0.0;  // int |grad_A psi|^2 + ckn_a^2 int |psi|^2 |x|^-2
  double discrepancy = 0.0;
  double quad_error = 0.0;
  // lhs_ckn - gamma int |phi|^2 |x|^{-2 ckn_a - 2} against
  // mu(ckn_a^2 - gamma) (int |phi|^p |x|^{-ckn_b p})^{2/p}.
  double full_lhs = 0.0;
  double full_rhs = 0.0;
  double full_margin = 0.0;
  bool full_constant_optimal = false;
};

// psi = |x|^{-ckn_a} phi.
CKNRecord ckn_equivalence_check(const EmdenFowlerField& phi, const HSParams& hp);

struct NonAttainmentRecord {
  std::vector<double> distances;
  std::vector<double> quotients;
  std::vector<double> margins;  // quotient - non-magnetic optimum
  double optimum = 0.0;
  double min_margin = 0.0;
};

// The GN ground state translated to distance R from the flux line, cut off
// smoothly near the origin, in the unweighted magnetic quotient.
NonAttainmentRecord nonattainment_check(double a_raw, double p, double lambda,
                                        const std::vector<double>& distances = {2.0, 4.0, 8.0});

}  // namespace abf
