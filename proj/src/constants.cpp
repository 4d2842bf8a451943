#include "abflux/constants.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace abf {

const char* status_name(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::InvalidArgument: return "invalid_argument";
    case Status::OutOfRange: return "out_of_range";
    case Status::NotConverged: return "not_converged";
    case Status::Degenerate: return "degenerate";
    case Status::Io: return "io";
    case Status::Internal: return "internal";
  }
  return "unknown";
}

const char* regime_name(Regime r) {
  return r == Regime::Subquadratic ? "sub" : "super";
}

namespace {

void check_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    std::ostringstream os;
    os << what << " must be finite";
    fail(Status::InvalidArgument, os.str());
  }
}

void check_exponent(double p) {
  check_finite(p, "p");
  require(p > 1.0, Status::OutOfRange, "exponent p must exceed 1");
  require(p != 2.0, Status::OutOfRange, "p = 2 is not supported");
}

void check_unit_flux(double a) {
  check_finite(a, "a");
  require(a >= 0.0 && a <= 0.5, Status::OutOfRange,
          "flux must lie in [0, 1/2]; normalize first");
}

}  // namespace

double normalize_flux(double a_raw) {
  check_finite(a_raw, "a_raw");
  double frac = a_raw - std::floor(a_raw);
  if (frac >= 1.0) frac = 0.0;  // a_raw just below an integer
  return std::min(frac, 1.0 - frac);
}

FluxParams FluxParams::make(double a_raw, double p) {
  check_exponent(p);
  FluxParams fp;
  fp.a_raw = a_raw;
  fp.a = normalize_flux(a_raw);
  fp.p = p;
  if (p < 2.0) {
    fp.regime = Regime::Subquadratic;
    fp.q = p / (2.0 - p);
  } else {
    fp.regime = Regime::Superquadratic;
    fp.q = p / (p - 2.0);
  }
  return fp;
}

double ultraspherical_eigenvalue(int l, double half_flux) {
  require(l >= 0, Status::InvalidArgument, "mode number l must be >= 0");
  check_finite(half_flux, "half flux");
  require(half_flux >= 0.0, Status::InvalidArgument,
          "half flux must be >= 0");
  const double s = l + 2.0 * half_flux;
  return s * (s + 1.0);
}

double sphere2_ground(double a) {
  const double an = normalize_flux(a);
  double best = INFINITY;
  for (int k = -3; k <= 3; ++k) {
    const double m = std::abs(k - an);
    best = std::min(best, m * (m + 1.0));
  }
  return best;
}

Sphere2Spectrum sphere2_spectrum(double a, int l_max, int k_max) {
  check_finite(a, "a");
  require(l_max >= 0 && k_max >= 0, Status::InvalidArgument,
          "l_max and k_max must be >= 0");
  Sphere2Spectrum out;
  for (int k = -k_max; k <= k_max; ++k) {
    const double m = std::abs(k - a);
    for (int l = 0; l <= l_max; ++l) {
      out.modes.push_back({k, l, (l + m) * (l + m + 1.0)});
    }
  }
  std::stable_sort(out.modes.begin(), out.modes.end(),
                   [](const SphereMode& x, const SphereMode& y) {
                     if (x.value != y.value) return x.value < y.value;
                     if (x.k != y.k) return x.k < y.k;
                     return x.l < y.l;
                   });
  out.ground = sphere2_ground(a);
  return out;
}

double ring_rigidity_threshold(const FluxParams& fp) {
  const double a2 = fp.a * fp.a;
  if (fp.regime == Regime::Superquadratic)
    return (1.0 - a2 * (fp.p + 2.0)) / (fp.p - 2.0);
  return (1.0 - 4.0 * a2) / (2.0 - fp.p);
}

std::array<double, 3> torus_low_modes(double a) {
  check_unit_flux(a);
  return {a * a, (1.0 - a) * (1.0 - a), 1.0 + a * a};
}

PlanarThresholds planar_symmetry_thresholds(double a, double p) {
  check_unit_flux(a);
  check_finite(p, "p");
  require(p > 2.0, Status::OutOfRange, "planar thresholds need p > 2");
  const double a2 = a * a;
  PlanarThresholds t;
  t.lambda_star = 4.0 * (1.0 - 4.0 * a2) / (p * p - 4.0) - a2;
  const double rad =
      p * p * p * p - a2 * (p - 2.0) * (p - 2.0) * (p + 2.0) * (3.0 * p - 2.0);
  const double pm2 = p - 2.0;
  t.lambda_bullet = (8.0 * (std::sqrt(rad) + 2.0) - 4.0 * p * (p + 4.0)) /
                        (pm2 * pm2 * pm2 * (p + 2.0)) -
                    a2;
  return t;
}

double planar_gamma_factor(double p) {
  check_finite(p, "p");
  require(p > 2.0, Status::OutOfRange, "gamma factor needs p > 2");
  const double nu = p / (p - 2.0);
  const double ratio = std::exp(std::lgamma(nu) - std::lgamma(nu + 0.5));
  return 2.0 * std::sqrt(kPi) * ratio / (p - 2.0);
}

namespace {

double planar_prefactor(double p) {
  const double K = planar_gamma_factor(p);
  return 0.5 * p * std::pow(2.0 * kPi, 1.0 - 2.0 / p) *
         std::pow(K, 1.0 - 2.0 / p);
}

}  // namespace

PlanarMu planar_mu_closed(double a, double p, double lambda) {
  check_unit_flux(a);
  check_finite(lambda, "lambda");
  const double shifted = lambda + a * a;
  require(shifted > 0.0, Status::OutOfRange, "lambda must exceed -a^2");
  PlanarMu out;
  // The extremal's quotient scales as kappa^{1+2/p}, kappa^2 = lambda + a^2.
  out.value = planar_prefactor(p) * std::pow(shifted, 0.5 + 1.0 / p);
  out.printed_value = planar_prefactor(p) * std::pow(shifted, 1.0 + 2.0 / p);
  const double star = planar_symmetry_thresholds(a, p).lambda_star;
  out.optimal = lambda <= star + 1e-14 * std::max(1.0, std::abs(star));
  return out;
}

double planar_lambda_of_mu_closed(double a, double p, double mu) {
  check_unit_flux(a);
  check_finite(mu, "mu");
  require(mu > 0.0, Status::OutOfRange, "mu must be positive");
  return std::pow(mu / planar_prefactor(p), 1.0 / (0.5 + 1.0 / p)) - a * a;
}

double felli_schneider_b(double ckn_a) {
  check_finite(ckn_a, "ckn exponent");
  require(ckn_a <= 0.0, Status::OutOfRange,
          "only non-positive CKN exponents are supported");
  return ckn_a - ckn_a / std::sqrt(1.0 + ckn_a * ckn_a);
}

double interpolation_lower_bound(BoundDomain domain, double a, double p,
                                 double param) {
  check_finite(param, "parameter");
  check_finite(p, "p");
  if (domain == BoundDomain::SphereS2) {
    require(p > 2.0, Status::OutOfRange, "sphere bound needs p > 2");
    const double L = sphere2_ground(a);
    require(param > -L, Status::OutOfRange, "lambda must exceed -Lambda_a");
    require(param <= 2.0 / (p - 2.0), Status::OutOfRange,
            "sphere bound is proven for lambda <= 2/(p-2)");
    return 2.0 * (param + L) / (2.0 + (p - 2.0) * L);
  }
  require(p >= 1.0 && p < 2.0, Status::OutOfRange,
          "torus bound needs p in [1, 2)");
  const double an = normalize_flux(a);
  require(param > 0.0 && param <= 1.0 / (2.0 - p), Status::OutOfRange,
          "torus bound needs mu in (0, 1/(2-p)]");
  return param + (1.0 - param * (2.0 - p)) * an * an;
}

}  // namespace abf
