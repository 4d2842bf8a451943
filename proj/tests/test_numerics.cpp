#include <doctest.h>

#include <cmath>

#include "abflux/numerics.hpp"
#include "abflux/testfn.hpp"

using namespace abf;

namespace {

GridPtr ring(int n) {
  GridSpec s;
  s.domain = Domain::RingS1;
  s.n0 = n;
  return build_grid(s);
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("gauss_jacobi integrates even monomials against the weight") {
  // int z^{2m} (1-z^2)^alpha dz = B(m + 1/2, alpha + 1)
  for (double alpha : {0.0, 0.3, 1.0, 2.5}) {
    const Quadrature q = gauss_jacobi(24, alpha);
    for (int m = 0; m <= 10; ++m) {
      double s = 0.0;
      for (std::size_t i = 0; i < q.nodes.size(); ++i)
        s += q.weights[i] * std::pow(q.nodes[i], 2 * m);
      const double beta = std::exp(std::lgamma(m + 0.5) + std::lgamma(alpha + 1.0) -
                                   std::lgamma(m + alpha + 1.5));
      CHECK(s == doctest::Approx(beta).epsilon(1e-13));
    }
  }
}

TEST_CASE("periodic_derivative differentiates trigonometric polynomials") {
  const int n = 32;
  const double period = 2.0 * kPi;
  std::vector<double> f(n), df(n), d2f(n);
  for (int j = 0; j < n; ++j) {
    const double x = period * j / n;
    f[j] = std::sin(3 * x) + 0.5 * std::cos(x);
    df[j] = 3 * std::cos(3 * x) - 0.5 * std::sin(x);
    d2f[j] = -9 * std::sin(3 * x) - 0.5 * std::cos(x);
  }
  const auto d1 = periodic_derivative(f, period, 1);
  const auto d2 = periodic_derivative(f, period, 2);
  for (int j = 0; j < n; ++j) {
    CHECK(d1[j] == doctest::Approx(df[j]).epsilon(1e-12).scale(1.0));
    CHECK(d2[j] == doctest::Approx(d2f[j]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("barycentric_diff_matrix is exact on polynomials") {
  const Quadrature q = gauss_legendre(12);
  const Eigen::MatrixXd D = barycentric_diff_matrix(q.nodes);
  Eigen::VectorXd f(12), df(12);
  for (int i = 0; i < 12; ++i) {
    const double z = q.nodes[i];
    f[i] = z * z * z * z - 2 * z + 1;
    df[i] = 4 * z * z * z - 2;
  }
  CHECK((D * f - df).lpNorm<Eigen::Infinity>() < 1e-11);
}

TEST_CASE("ring magnetic energy of a Fourier mode is (k-a)^2") {
  const GridPtr g = ring(64);
  for (double a : {0.0, 0.2, 0.5}) {
    for (int k : {-2, 0, 1, 3}) {
      std::vector<cd> v(64);
      for (int j = 0; j < 64; ++j) v[j] = std::polar(1.0, k * g->nodes[0][j]);
      const auto f = DiscreteField::complex_field(g, v);
      CHECK(magnetic_energy(f, a) == doctest::Approx((k - a) * (k - a)).epsilon(1e-13));
      CHECK(lp_norm(f, 4.0) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("inverse_l2_term of a constant and of a vanishing profile") {
  const GridPtr g = ring(32);
  CHECK(inverse_l2_term(DiscreteField::profile(g, std::vector<double>(32, 2.0))) ==
        doctest::Approx(4.0));
  std::vector<double> u(32, 1.0);
  u[5] = 0.0;
  CHECK(inverse_l2_term(DiscreteField::profile(g, u)) == 0.0);
}

TEST_CASE("grids reject resolutions below the minimum") {
  GridSpec s;
  s.domain = Domain::RingS1;
  s.n0 = 4;
  CHECK_THROWS_AS(build_grid(s), Error);
}

TEST_CASE("seed derivation is deterministic and splits streams") {
  CHECK(derive_seed(42, 3) == derive_seed(42, 3));
  CHECK(derive_seed(42, 3) != derive_seed(42, 4));
  CHECK(derive_seed(42, 3) != derive_seed(43, 3));
  Rng r1(7), r2(7);
  for (int i = 0; i < 100; ++i) {
    const double x = r1.uniform();
    CHECK(x == r2.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("generated test functions are reproducible and positive where promised") {
  const GridPtr g = ring(64);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = generate_test_function(g, Family::PositiveProfile, seed);
    const auto h = generate_test_function(g, Family::PositiveProfile, seed);
    CHECK(f.values == h.values);
    for (double x : f.real_part()) CHECK(x > 0.0);
  }
}

}  // TEST_SUITE
