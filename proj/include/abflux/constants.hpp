#pragma once

#include <array>
#include <vector>

#include "abflux/common.hpp"

namespace abf {

enum class Regime { Subquadratic, Superquadratic };

const char* regime_name(Regime r);

struct FluxParams {
  double a_raw = 0.0;
  double a = 0.0;  // normalized, in [0, 1/2]
  double p = 4.0;
  Regime regime = Regime::Superquadratic;
  double q = 2.0;  // p/(p-2) or p/(2-p)

  static FluxParams make(double a_raw, double p);
};

// Ring modes are invariant under a -> a + k and a -> 1 - a.
double normalize_flux(double a_raw);

// (l + 2A)(l + 2A + 1), A the ultraspherical half-flux.
double ultraspherical_eigenvalue(int l, double half_flux);

struct SphereMode {
  int k = 0;
  int l = 0;
  double value = 0.0;
};

struct Sphere2Spectrum {
  std::vector<SphereMode> modes;  // ascending
  double ground = 0.0;            // Lambda_a
};

Sphere2Spectrum sphere2_spectrum(double a, int l_max, int k_max);

// min over |k| <= 3 of |k-a|(|k-a|+1), after normalization.
double sphere2_ground(double a);

// Superquadratic: lambda* = (1 - a^2(p+2))/(p-2).
// Subquadratic:   mu*     = (1 - 4a^2)/(2-p).
double ring_rigidity_threshold(const FluxParams& fp);

std::array<double, 3> torus_low_modes(double a);

struct PlanarThresholds {
  double lambda_star = 0.0;
  double lambda_bullet = 0.0;
};

PlanarThresholds planar_symmetry_thresholds(double a, double p);

// K = 2 sqrt(pi) Gamma(p/(p-2)) / ((p-2) Gamma(p/(p-2) + 1/2)).
double planar_gamma_factor(double p);

// value = (p/2)(2 pi)^{1-2/p} (lambda + a^2)^{1/2+1/p} K^{1-2/p}, the
// Rayleigh quotient of the explicit extremal. printed_value carries the
// exponent 1 + 2/p instead; the two agree only at lambda + a^2 = 1.
struct PlanarMu {
  double value = 0.0;
  double printed_value = 0.0;
  bool optimal = false;  // false: lambda > lambda_star, formula value only
};

PlanarMu planar_mu_closed(double a, double p, double lambda);

// Inverse of lambda -> (closed-form) mu(lambda).
double planar_lambda_of_mu_closed(double a, double p, double mu);

double felli_schneider_b(double ckn_a);

enum class BoundDomain { SphereS2, TorusT2 };

double interpolation_lower_bound(BoundDomain domain, double a, double p,
                                 double param);

}  // namespace abf
