#include <doctest.h>

#include <cmath>

#include "abflux/ring.hpp"
#include "abflux/testfn.hpp"

using namespace abf;

namespace {

double direct_quotient(double a, double p, double mu, const std::vector<double>& u) {
  // Subquadratic quotient by FFT-free finite sums on the uniform grid:
  // (||u'||^2 + a^2 (mean u^-2)^-1 + mu ||u||_p^2) / ||u||_2^2.
  const int n = static_cast<int>(u.size());
  const auto du = periodic_derivative(u, 2.0 * kPi, 1);
  double d = 0, inv = 0, lp = 0, l2 = 0;
  for (int j = 0; j < n; ++j) {
    d += du[j] * du[j] / n;
    inv += 1.0 / (u[j] * u[j]) / n;
    lp += std::pow(u[j], p) / n;
    l2 += u[j] * u[j] / n;
  }
  return (d + a * a / inv + mu * std::pow(lp, 2.0 / p)) / l2;
}

}  // namespace

TEST_SUITE("ring") {

TEST_CASE("constant profile quotient is a^2 + param") {
  for (double p : {1.5, 4.0}) {
    const FluxParams fp = FluxParams::make(0.3, p);
    CHECK(ring_constant_value(fp, 0.7) == doctest::Approx(0.79));
    CHECK(ring_quotient(fp, 0.7, std::vector<double>(64, 2.0)) == doctest::Approx(0.79));
  }
}

TEST_CASE("ring quotient matches a direct evaluation") {
  const FluxParams fp = FluxParams::make(0.2, 1.5);
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> u(64);
    const double c1 = rng.uniform(-0.3, 0.3), c2 = rng.uniform(-0.2, 0.2);
    for (int j = 0; j < 64; ++j) {
      const double th = 2 * kPi * j / 64;
      u[j] = 1.0 + c1 * std::cos(th) + c2 * std::sin(2 * th);
    }
    CHECK(ring_quotient(fp, 0.9, u) ==
          doctest::Approx(direct_quotient(0.2, 1.5, 0.9, u)).epsilon(1e-12));
  }
}

TEST_CASE("quotient is invariant under scaling and rotation") {
  const FluxParams fp = FluxParams::make(0.25, 1.25);
  std::vector<double> u(64), v(64), w(64);
  for (int j = 0; j < 64; ++j) {
    const double th = 2 * kPi * j / 64;
    u[j] = 1.2 + 0.3 * std::cos(th) + 0.1 * std::cos(3 * th);
  }
  for (int j = 0; j < 64; ++j) {
    v[j] = 5.0 * u[j];
    w[j] = u[(j + 11) % 64];
  }
  const double q = ring_quotient(fp, 1.1, u);
  CHECK(ring_quotient(fp, 1.1, v) == doctest::Approx(q).epsilon(1e-13));
  CHECK(ring_quotient(fp, 1.1, w) == doctest::Approx(q).epsilon(1e-13));
}

TEST_CASE("ring optimum: constant below threshold, broken above") {
  RingProblem rp;
  rp.fp = FluxParams::make(0.3, 1.5);
  rp.opts.n = 64;
  rp.param = 1.0;
  auto r = optimal_constant_ring(rp);
  CHECK(r.value == doctest::Approx(1.09).epsilon(1e-8));
  CHECK(r.symmetric);
  rp.param = 1.5;
  r = optimal_constant_ring(rp);
  CHECK(r.value < 1.59 - 1e-4);
  CHECK_FALSE(r.symmetric);
  CHECK(r.value == doctest::Approx(ring_quotient(rp.fp, rp.param, r.profile)).epsilon(1e-10));
}

TEST_CASE("superquadratic ring optimum below threshold") {
  RingProblem rp;
  rp.fp = FluxParams::make(0.1, 4.0);
  rp.opts.n = 64;
  rp.param = ring_parameter_at(rp.fp, 0.5);
  CHECK(rp.param == doctest::Approx(-0.01 + 0.5 * 0.48));
  const auto r = optimal_constant_ring(rp);
  CHECK(r.symmetric);
  CHECK(r.value == doctest::Approx(0.01 + rp.param).epsilon(1e-8));
}

TEST_CASE("second variation coefficient against the oracle") {
  for (double a : {0.0, 0.2, 0.4}) {
    for (double p : {1.25, 1.5, 1.75}) {
      for (double mu : {0.2, 0.8, 1.6}) {
        CHECK(second_variation_oracle(a, p, mu) ==
              doctest::Approx(second_variation_coefficient(a, p, mu)).epsilon(1e-7).scale(1.0));
      }
    }
  }
  // Zero at the rigidity threshold.
  const FluxParams fp = FluxParams::make(0.3, 1.5);
  CHECK(std::abs(second_variation_coefficient(0.3, 1.5, ring_rigidity_threshold(fp))) < 1e-15);
}

TEST_CASE("bifurcation point matches the threshold") {
  RingSolverOptions o;
  o.n = 64;
  const auto b = locate_bifurcation(0.2, 1.5, o);
  CHECK(b.closed_form == doctest::Approx((1 - 0.16) / 0.5));
  CHECK(b.rel_error < 1e-3);
  CHECK(b.lower <= b.upper);
}

TEST_CASE("invalid ring input") {
  RingProblem rp;
  rp.fp = FluxParams::make(0.3, 1.5);
  rp.param = 1.0;
  rp.opts.n = 63;
  CHECK_THROWS_AS(optimal_constant_ring(rp), Error);
}

}  // TEST_SUITE
