#include <doctest.h>

#include <cmath>

#include "abflux/constants.hpp"
#include "abflux/testfn.hpp"

using namespace abf;

TEST_SUITE("constants") {

TEST_CASE("flux normalization is 1-periodic and reflection symmetric") {
  Rng rng(2024);
  for (int i = 0; i < 500; ++i) {
    const double a = rng.uniform(-5.0, 5.0);
    const double n = normalize_flux(a);
    CHECK(n >= 0.0);
    CHECK(n <= 0.5);
    CHECK(normalize_flux(a + 3.0) == doctest::Approx(n).epsilon(1e-12).scale(1.0));
    CHECK(normalize_flux(1.0 - a) == doctest::Approx(n).epsilon(1e-12).scale(1.0));
    CHECK(normalize_flux(-a) == doctest::Approx(n).epsilon(1e-12).scale(1.0));
  }
  CHECK(normalize_flux(0.75) == 0.25);
  CHECK(normalize_flux(2.0) == 0.0);
  CHECK_THROWS_AS(normalize_flux(NAN), Error);
}

TEST_CASE("ring rigidity thresholds") {
  CHECK(ring_rigidity_threshold(FluxParams::make(0.3, 1.5)) == doctest::Approx(1.28));
  CHECK(ring_rigidity_threshold(FluxParams::make(0.0, 4.0)) == doctest::Approx(0.5));
  CHECK(ring_rigidity_threshold(FluxParams::make(0.1, 4.0)) == doctest::Approx(0.47));
  CHECK(FluxParams::make(0.3, 1.5).q == doctest::Approx(3.0));
  CHECK(FluxParams::make(0.3, 6.0).q == doctest::Approx(1.5));
  CHECK_THROWS_AS(FluxParams::make(0.1, 2.0), Error);
  CHECK_THROWS_AS(FluxParams::make(0.1, 1.0), Error);
}

TEST_CASE("sphere ground level is a(a+1) on [0, 1/2]") {
  for (int i = 0; i <= 50; ++i) {
    const double a = 0.01 * i;
    CHECK(sphere2_ground(a) == doctest::Approx(a * (a + 1.0)).epsilon(1e-15).scale(1.0));
  }
  // Same value at a + 1 and 1 - a.
  CHECK(sphere2_ground(1.3) == doctest::Approx(0.3 * 1.3));
  const Sphere2Spectrum s = sphere2_spectrum(0.2, 3, 3);
  CHECK(s.ground == doctest::Approx(0.24));
  for (std::size_t i = 1; i < s.modes.size(); ++i)
    CHECK(s.modes[i - 1].value <= s.modes[i].value);
}

TEST_CASE("ultraspherical eigenvalues") {
  CHECK(ultraspherical_eigenvalue(0, 0.0) == 0.0);
  CHECK(ultraspherical_eigenvalue(1, 0.0) == 2.0);
  CHECK(ultraspherical_eigenvalue(2, 0.25) == doctest::Approx(2.5 * 3.5));
}

TEST_CASE("torus low modes") {
  const auto m = torus_low_modes(0.3);
  CHECK(m[0] == doctest::Approx(0.09));
  CHECK(m[1] == doctest::Approx(0.49));
  CHECK(m[2] == doctest::Approx(1.09));
}

TEST_CASE("planar thresholds coincide at a = 0 and are ordered otherwise") {
  for (double p : {2.5, 3.0, 4.0, 6.0, 10.0}) {
    const auto t = planar_symmetry_thresholds(0.0, p);
    CHECK(t.lambda_star == doctest::Approx(4.0 / (p * p - 4.0)));
    CHECK(std::abs(t.lambda_star - t.lambda_bullet) <= 1e-12);
  }
  Rng rng(5);
  for (int i = 0; i < 400; ++i) {
    const double a = rng.uniform(1e-3, 0.5);
    const double p = rng.uniform(2.05, 12.0);
    const auto t = planar_symmetry_thresholds(a, p);
    CHECK(t.lambda_star < t.lambda_bullet);
  }
}

TEST_CASE("planar gamma factor against direct quadrature") {
  // K = 2/(p-2) * int sech(t)^{2q} dt with q = p/(p-2)
  for (double p : {3.0, 4.0, 6.0}) {
    const double q = p / (p - 2.0);
    const int n = 40000;
    const double L = 40.0, h = 2 * L / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double t = -L + i * h;
      s += (i == 0 || i == n ? 0.5 : 1.0) * std::pow(1.0 / std::cosh(t), 2 * q);
    }
    CHECK(planar_gamma_factor(p) == doctest::Approx(2.0 / (p - 2.0) * s * h).epsilon(1e-12));
  }
}

TEST_CASE("planar mu at p = 4 follows the 3/4 power of lambda + a^2") {
  const double c = 4.0 / std::sqrt(3.0) * std::sqrt(2.0 * kPi);
  CHECK(planar_mu_closed(0.0, 4.0, 1.0).value == doctest::Approx(5.788810036).epsilon(1e-9));
  for (double a : {0.0, 0.1, 0.3}) {
    for (double lambda : {0.05, 0.2, 0.5}) {
      const auto m = planar_mu_closed(a, 4.0, lambda);
      CHECK(m.value == doctest::Approx(c * std::pow(lambda + a * a, 0.75)).epsilon(1e-13));
      CHECK(m.printed_value == doctest::Approx(c * std::pow(lambda + a * a, 1.5)).epsilon(1e-13));
    }
  }
  const double mu = planar_mu_closed(0.2, 4.0, 0.1).value;
  CHECK(planar_lambda_of_mu_closed(0.2, 4.0, mu) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(planar_mu_closed(0.2, 4.0, -0.05), Error);
}

TEST_CASE("interpolation lower bounds") {
  // Torus bound mu + (1 - mu(2-p)) a^2 at the constant end.
  CHECK(interpolation_lower_bound(BoundDomain::TorusT2, 0.3, 1.5, 1.0) ==
        doctest::Approx(1.0 + 0.5 * 0.09));
  const double L = sphere2_ground(0.2);
  CHECK(interpolation_lower_bound(BoundDomain::SphereS2, 0.2, 4.0, 0.0) ==
        doctest::Approx(2.0 * L / (2.0 + 2.0 * L)));
  CHECK_THROWS_AS(interpolation_lower_bound(BoundDomain::SphereS2, 0.2, 4.0, 5.0), Error);
}

TEST_CASE("Felli-Schneider curve") {
  CHECK(felli_schneider_b(0.0) == 0.0);
  CHECK(felli_schneider_b(-1.0) == doctest::Approx(-1.0 + 1.0 / std::sqrt(2.0)));
}

}  // TEST_SUITE
