#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "abflux/constants.hpp"
#include "abflux/spectra.hpp"
#include "abflux/testfn.hpp"

using namespace abf;

namespace {

GridPtr grid(Domain d, int n0, int n1 = 0, double jacobi = 0.0) {
  GridSpec s;
  s.domain = d;
  s.n0 = n0;
  s.n1 = n1;
  s.jacobi = jacobi;
  return build_grid(s);
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("ring eigenvalues are (k-a)^2") {
  for (double a : {0.0, 0.15, 0.5}) {
    OperatorSpec op;
    op.kind = OperatorKind::RingMagnetic;
    op.flux = a;
    op.grid = grid(Domain::RingS1, 64);
    const auto r = eigen_solve(op, 5);
    std::vector<double> exact;
    for (int k = -4; k <= 4; ++k) exact.push_back((k - a) * (k - a));
    std::sort(exact.begin(), exact.end());
    for (int i = 0; i < 5; ++i) CHECK(std::abs(r.eigenvalues[i] - exact[i]) < 1e-10);
  }
}

TEST_CASE("torus eigenvalues are kx^2 + (ky-a)^2") {
  const double a = 0.3;
  OperatorSpec op;
  op.kind = OperatorKind::TorusMagnetic;
  op.flux = a;
  op.grid = grid(Domain::TorusT2, 16, 16);
  const auto r = eigen_solve(op, 6);
  std::vector<double> exact;
  for (int kx = -3; kx <= 3; ++kx)
    for (int ky = -3; ky <= 3; ++ky) exact.push_back(kx * kx + (ky - a) * (ky - a));
  std::sort(exact.begin(), exact.end());
  for (int i = 0; i < 6; ++i) CHECK(std::abs(r.eigenvalues[i] - exact[i]) < 1e-10);
}

TEST_CASE("constant potential shifts the ring spectrum") {
  const GridPtr g = grid(Domain::RingS1, 64);
  OperatorSpec op;
  op.kind = OperatorKind::RingSchrodinger;
  op.flux = 0.2;
  op.grid = g;
  op.potential.assign(64, 0.7);
  const auto r = eigen_solve(op, 3);
  CHECK(r.eigenvalues[0] == doctest::Approx(0.04 + 0.7).epsilon(1e-10));
  CHECK(r.eigenvalues[1] == doctest::Approx(0.64 + 0.7).epsilon(1e-10));
  CHECK(r.eigenvalues[2] == doctest::Approx(1.44 + 0.7).epsilon(1e-10));
}

TEST_CASE("sphere sectors give (l + |k-a|)(l + |k-a| + 1)") {
  for (double a : {0.0, 0.2, 0.5}) {
    OperatorSpec op;
    op.kind = OperatorKind::Sphere2Magnetic;
    op.flux = a;
    op.grid = grid(Domain::IntervalZ, 80);
    op.k_max = 3;
    const auto r = eigen_solve(op, 8);
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      const double m = r.labels[i].l + std::abs(r.labels[i].k - a);
      CHECK(r.eigenvalues[i] == doctest::Approx(m * (m + 1.0)).epsilon(1e-9).scale(1.0));
    }
    CHECK(r.eigenvalues[0] == doctest::Approx(a * (a + 1.0)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("ultraspherical sector values") {
  for (double A : {0.0, 0.1, 0.25, 1.3}) {
    const auto v = ultraspherical_sector(A, 60, 4, nullptr);
    for (int l = 0; l < 4; ++l)
      CHECK(v[l] == doctest::Approx(ultraspherical_eigenvalue(l, A)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("weighted Poincare: equality on the first eigenfunction") {
  for (double A : {0.1, 0.25, 0.5}) {
    const GridPtr g = grid(Domain::IntervalZ, 40, 0, 2.0 * A);
    std::vector<cd> v(40);
    for (int i = 0; i < 40; ++i) {
      const double z = g->nodes[0][i];
      v[i] = z * std::pow(1.0 - z * z, A);
    }
    const auto rec = weighted_poincare_check(DiscreteField::complex_field(g, v), A);
    CHECK(rec.ratio == doctest::Approx(ultraspherical_eigenvalue(1, A)).epsilon(1e-10));
    CHECK(std::abs(rec.projection) < 1e-13);
  }
}

TEST_CASE("weighted Poincare: random fields satisfy the inequality") {
  for (double A : {0.05, 0.2, 0.45}) {
    const GridPtr g = grid(Domain::IntervalZ, 48, 0, 2.0 * A);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      auto f = generate_test_function(g, Family::FourierBandlimited, seed);
      for (auto& x : f.values) x = x.real();
      const auto rec = weighted_poincare_check(f, A);
      if (rec.degenerate) continue;
      CHECK(rec.lhs - rec.rhs >= -rec.est_error);
    }
  }
}

TEST_CASE("the constant is degenerate") {
  const double A = 0.2;
  const GridPtr g = grid(Domain::IntervalZ, 30, 0, 2.0 * A);
  std::vector<cd> v(30);
  for (int i = 0; i < 30; ++i) v[i] = 3.0 * std::pow(1.0 - g->nodes[0][i] * g->nodes[0][i], A);
  CHECK(weighted_poincare_check(DiscreteField::complex_field(g, v), A).degenerate);
}

TEST_CASE("mismatched grids are rejected") {
  OperatorSpec op;
  op.kind = OperatorKind::RingMagnetic;
  op.grid = grid(Domain::TorusT2, 16, 16);
  CHECK_THROWS_AS(eigen_solve(op, 2), Error);
}

}  // TEST_SUITE
