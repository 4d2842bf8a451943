#include <doctest.h>

#include <cmath>

#include "abflux/certify.hpp"

using namespace abf;

TEST_SUITE("certify") {

TEST_CASE("inequality names round-trip") {
  CHECK(all_inequalities().size() == static_cast<std::size_t>(kInequalityCount));
  for (InequalityId id : all_inequalities()) CHECK(parse_inequality(inequality_name(id)) == id);
  CHECK_FALSE(parse_inequality("KLT_S1").has_value());
  CHECK(std::string(inequality_name(InequalityId::EKHOLM_PORTMANN)) == "EKHOLM_PORTMANN");
}

TEST_CASE("margin classification") {
  CHECK(classify_margin(1.0, 0.5, 0.0) == Verdict::Holds);
  CHECK(classify_margin(1.0, 1.0 - 5e-7, 0.0) == Verdict::Saturated);
  CHECK(classify_margin(1.0, 1.0 + 5e-7, 0.0) == Verdict::Saturated);
  CHECK(classify_margin(1.0, 1.01, 0.0) == Verdict::Violated);
  // Quadrature error absorbs a small negative margin.
  CHECK(classify_margin(1.0, 1.01, 0.02) == Verdict::Holds);
}

TEST_CASE("randomized cases are reproducible") {
  for (InequalityId id : {InequalityId::KLT_S1_SUPER, InequalityId::HARDY_S2,
                          InequalityId::KLT_R2}) {
    const auto r1 = evaluate_certificate(make_certificate_case(id, 5));
    const auto r2 = evaluate_certificate(make_certificate_case(id, 5));
    CHECK(r1.lhs == r2.lhs);
    CHECK(r1.rhs == r2.rhs);
    CHECK(r1.a == r2.a);
  }
}

TEST_CASE("every inequality holds on a few seeds") {
  SuiteOptions so;
  so.seeds = {0, 1, 2};
  const auto reports = run_certificate_suite(so);
  CHECK(reports.size() == 3u * kInequalityCount);
  for (const auto& r : reports) {
    INFO(inequality_name(r.id), " seed ", r.seed, " ", r.error);
    CHECK(r.ok);
    CHECK(r.verdict != Verdict::Violated);
    CHECK(r.margin == doctest::Approx(r.lhs - r.rhs));
  }
}

TEST_CASE("suite order does not depend on the worker count") {
  SuiteOptions so;
  so.ids = {InequalityId::KLT_S1_SUB, InequalityId::HARDY_R2_PLAIN};
  so.seeds = {3, 4, 5};
  const auto one = run_certificate_suite(so);
  so.workers = 3;
  const auto three = run_certificate_suite(so);
  REQUIRE(one.size() == three.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].id == three[i].id);
    CHECK(one[i].seed == three[i].seed);
    CHECK(one[i].lhs == three[i].lhs);
  }
}

TEST_CASE("equality cases saturate") {
  const auto klt = evaluate_certificate(make_saturation_case(InequalityId::KLT_S1_SUB, 0.2, 1.5, 0.5));
  CHECK(klt.verdict == Verdict::Saturated);
  const auto hs = evaluate_certificate(make_saturation_case(InequalityId::HS_R2, 0.2, 4.0, 0.1));
  CHECK(hs.verdict == Verdict::Saturated);
  CHECK(std::abs(hs.margin) <= 1e-6 * std::abs(hs.rhs));
  const auto inv = evaluate_certificate(make_saturation_case(InequalityId::RING_INV_NORM, 0.3, kNaN, 0.0));
  CHECK(inv.verdict == Verdict::Saturated);
  // Outside the rigidity regime the constant potential is not an equality case.
  CHECK_THROWS_AS(make_saturation_case(InequalityId::KLT_S1_SUB, 0.4, 1.5, 1.5), Error);
}

TEST_CASE("the half-space identity closes the square") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto r = evaluate_certificate(make_r3_radial_case(InequalityId::HARDY_R3_HALF, 0.2, kNaN, seed));
    CHECK(std::abs(r.identity_residual) < 1e-8 * std::abs(r.lhs));
  }
}

TEST_CASE("radial Hardy constant beats the Ekholm-Portmann constant") {
  for (double a : {0.1, 0.3, 0.5}) {
    const auto ep = evaluate_certificate(make_r3_radial_case(InequalityId::EKHOLM_PORTMANN, a, kNaN, 1));
    const auto rad = evaluate_certificate(make_r3_radial_case(InequalityId::HARDY_R3_RADIAL, a, 2.0, 1));
    CHECK(ep.lhs == doctest::Approx(rad.lhs));
    CHECK(rad.rhs > ep.rhs);
    CHECK(rad.verdict != Verdict::Violated);
    CHECK(ep.verdict != Verdict::Violated);
  }
}

TEST_CASE("plain Hardy on angular sectors") {
  // (k-a)^2 >= min_j (j-a)^2, equality only on the nearest sector.
  double prev = -1.0;
  for (int k : {0, 1, 2, 3}) {
    const auto r = evaluate_certificate(make_plain_hardy_sector_case(0.3, k));
    CHECK(r.verdict != Verdict::Violated);
    if (k >= 1) CHECK(r.margin > prev);
    prev = r.margin;
  }
}

}  // TEST_SUITE
