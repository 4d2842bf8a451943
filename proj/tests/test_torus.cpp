#include <doctest.h>

#include <cmath>

#include "abflux/ring.hpp"
#include "abflux/testfn.hpp"
#include "abflux/torus.hpp"

using namespace abf;

namespace {

GridPtr torus(int n) {
  GridSpec s;
  s.domain = Domain::TorusT2;
  s.n0 = s.n1 = n;
  return build_grid(s);
}

}  // namespace

TEST_SUITE("torus") {

TEST_CASE("flow keeps the Lp norm and does not increase the functional") {
  const GridPtr g = torus(16);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto u0 = generate_test_function(g, Family::PositiveProfile, seed);
    FlowOptions fo;
    fo.t_end = 0.2;
    const FlowState st = run_bakry_emery_flow(u0, 1.5, 0.5, fo);
    CHECK(st.drift_per_time < 1e-8);
    CHECK(st.max_increase <= 1e-9);
    CHECK(st.history.size() >= 2);
    CHECK(st.history.back().t == doctest::Approx(0.2));
  }
}

TEST_CASE("flow of a constant is stationary") {
  const GridPtr g = torus(16);
  const auto u0 = DiscreteField::profile(g, std::vector<double>(g->size(), 1.7));
  FlowOptions fo;
  fo.t_end = 0.05;
  for (FlowScheme s : {FlowScheme::ExactPower, FlowScheme::ImplicitPower,
                       FlowScheme::SemiImplicit}) {
    fo.scheme = s;
    const FlowState st = run_bakry_emery_flow(u0, 1.5, 1.0, fo);
    CHECK(st.max_drift < 1e-13);
    for (double x : st.u.real_part()) CHECK(x == doctest::Approx(1.7).epsilon(1e-13));
  }
}

TEST_CASE("flow rejects non-positive data") {
  const GridPtr g = torus(16);
  std::vector<double> v(g->size(), 1.0);
  v[3] = -0.1;
  CHECK_THROWS_AS(run_bakry_emery_flow(DiscreteField::profile(g, v), 1.5, 0.0), Error);
}

TEST_CASE("tensorization inequality on random positive fields") {
  const GridPtr g = torus(16);
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    const auto u = generate_test_function(g, Family::PositiveProfile, seed);
    for (double p : {1.0, 1.5, 1.9}) {
      const auto rec = tensorization_check(u, p);
      CHECK(rec.margin >= -1e-10);
    }
  }
  // Equality on constants.
  const auto c = DiscreteField::profile(g, std::vector<double>(g->size(), 2.0));
  CHECK(std::abs(tensorization_check(c, 1.5).margin) < 1e-12);
}

TEST_CASE("torus optimum equals the ring optimum") {
  TorusProblem tp;
  tp.a_raw = 0.3;
  tp.p = 1.5;
  tp.mu = 1.0;
  tp.opts.ny = 32;
  const TorusResult r = minimize_rayleigh_torus(tp);
  CHECK(r.opt.value == doctest::Approx(1.09).epsilon(1e-6));
  CHECK(r.x_variation < 1e-6);
  CHECK(r.shape == TorusShape::Constant);
  CHECK(std::abs(r.ring_difference) < 1e-5);
  CHECK(r.lower_bound <= r.opt.value + 1e-12);
}

}  // TEST_SUITE
