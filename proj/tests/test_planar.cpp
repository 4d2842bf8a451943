#include <doctest.h>

#include <cmath>

#include "abflux/constants.hpp"
#include "abflux/planar.hpp"

using namespace abf;

TEST_SUITE("planar") {

TEST_CASE("shooting at p = 4, a = 0, lambda = 1 gives sqrt(2) sech(s)") {
  const HSParams hp = HSParams::make(0.0, 4.0, 1.0);
  const RadialSolution rs = solve_radial_euler_lagrange(hp);
  const auto& g = *rs.profile.grid;
  const int ns = g.shape[0], nt = g.shape[1];
  double err = 0.0;
  for (int i = 0; i < ns; ++i) {
    const double s = g.nodes[0][i];
    err = std::max(err, std::abs(rs.profile.values[i * nt].real() - std::sqrt(2.0) / std::cosh(s)));
  }
  CHECK(err < 1e-8);
  CHECK(rs.u0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("extremal quotient equals the closed form") {
  for (double p : {3.0, 4.0, 6.0}) {
    for (double a : {0.0, 0.2}) {
      const double ls = planar_symmetry_thresholds(a, p).lambda_star;
      for (double frac : {0.3, 1.0}) {
        const double lambda = -a * a + frac * (ls + a * a);
        const HSParams hp = HSParams::make(a, p, lambda);
        const auto e = extremal_profile(hp, planar_grid(hp));
        const auto m = planar_mu_closed(hp.a, p, lambda);
        CHECK(m.optimal);
        CHECK(hs_rayleigh_quotient(e, hp) == doctest::Approx(m.value).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("shooting profile has the closed-form quotient") {
  const HSParams hp = HSParams::make(0.1, 3.0, 0.2);
  const RadialSolution rs = solve_radial_euler_lagrange(hp);
  CHECK(rs.mu_numeric == doctest::Approx(planar_mu_closed(0.1, 3.0, 0.2).value).epsilon(1e-6));
  CHECK(rs.energy_residual < 1e-8);
}

TEST_CASE("k = 1 eigenvalue changes sign across lambda_bullet at a = 0") {
  K1Options o;
  o.n = 1200;
  const auto t = planar_symmetry_thresholds(0.0, 4.0);
  const HSParams below = HSParams::make(0.0, 4.0, t.lambda_bullet - 0.05);
  const HSParams above = HSParams::make(0.0, 4.0, t.lambda_bullet + 0.05);
  CHECK(k1_second_variation(below, o).eigenvalue > 0.0);
  CHECK(k1_second_variation(above, o).eigenvalue < 0.0);
}

TEST_CASE("GN constants are scale free with exponent 2/p") {
  const GNRecord r = gn_constant(4.0);
  CHECK(r.max_spread < 1e-5);
  CHECK(r.fitted_exponent == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.exponent_interp_l2 == doctest::Approx(0.5));
  CHECK(r.exponent_gn2 == doctest::Approx(2.0));
  // sqrt of twice the Townes mass
  CHECK(r.c_p == doctest::Approx(4.83753998).epsilon(1e-6));
}

TEST_CASE("CKN change of variables preserves the energy") {
  const HSParams hp = HSParams::make(0.2, 4.0, 1.0, -0.1);
  const auto e = extremal_profile(hp, planar_grid(hp));
  const CKNRecord r = ckn_equivalence_check(e, hp);
  CHECK(std::abs(r.discrepancy) <= 1e-8 * std::abs(r.rhs_identity) + r.quad_error);
  CHECK(r.full_margin >= -1e-8 * std::abs(r.full_rhs));
}

TEST_CASE("translated GN profiles stay above the non-magnetic optimum") {
  const auto r = nonattainment_check(0.3, 4.0, 1.0);
  for (double m : r.margins) CHECK(m > 0.0);
}

TEST_CASE("planar parameters are validated") {
  CHECK_THROWS_AS(HSParams::make(0.1, 2.0, 0.0), Error);
  CHECK_THROWS_AS(HSParams::make(0.1, 4.0, -0.02), Error);
}

}  // TEST_SUITE
