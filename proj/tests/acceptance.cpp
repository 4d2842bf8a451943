// Acceptance checks 1-10. Usage: acceptance [N ...]; no argument runs all.
// Prints one PASS/FAIL line per criterion and exits non-zero if any failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "abflux/certify.hpp"
#include "abflux/constants.hpp"
#include "abflux/planar.hpp"
#include "abflux/ring.hpp"
#include "abflux/spectra.hpp"
#include "abflux/testfn.hpp"
#include "abflux/torus.hpp"

using namespace abf;

namespace {

// Tolerances.
constexpr double kC1SphereRel = 1e-6;
constexpr double kC1SolverAbs = 1e-10;
constexpr double kC1Seconds = 60.0;
constexpr double kC2ValueTol = 1e-6;
constexpr double kC2Gap = 1e-4;
constexpr double kC3Rel = 1e-3;
constexpr double kC4Tol = 1e-8;
constexpr double kC5RingTol = 1e-5;
constexpr double kC5XVariation = 1e-6;
constexpr double kC5ExactTol = 1e-9;
constexpr double kC6Drift = 1e-8;
constexpr double kC6Increase = 1e-9;
constexpr double kC6Tensor = -1e-10;
constexpr double kC7QuotientRel = 1e-6;
constexpr double kC7ProfileSup = 1e-7;
constexpr double kC7SechSup = 1e-8;
constexpr double kC8Offset = 1e-3;
constexpr double kC8Order = 1e-12;
constexpr int kC9Seeds = 200;
constexpr double kC9Saturation = 1e-6;
constexpr double kC9Seconds = 600.0;
constexpr double kC10Spread = 1e-5;

// Grid shared by criteria 2 and 3.
const std::vector<double> kFluxGrid = {0.0, 0.08, 0.16, 0.24, 0.32, 0.40};
const std::vector<double> kSubGrid = {1.2, 1.35, 1.5, 1.65, 1.8};
const std::vector<double> kSuperGrid = {2.5, 3.0, 4.0, 5.0, 6.0};

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

GridPtr grid(Domain d, int n0, int n1 = 0) {
  GridSpec s;
  s.domain = d;
  s.n0 = n0;
  s.n1 = n1;
  return build_grid(s);
}

Outcome c1() {
  Clock clock;
  double sphere = 0.0, flat = 0.0;
  int modes = 0;
  for (int i = 0; i <= 5; ++i) {
    const double a = 0.1 * i;
    OperatorSpec op;
    op.kind = OperatorKind::Sphere2Magnetic;
    op.flux = a;
    op.grid = grid(Domain::IntervalZ, 400);
    op.k_max = 5;
    // Enough levels that every (k, l) with l <= 5 and |k| <= 5 is present.
    const auto sr = eigen_solve(op, 100);
    int found = 0;
    for (std::size_t j = 0; j < sr.eigenvalues.size(); ++j) {
      const ModeLabel& m = sr.labels[j];
      if (m.l > 5) continue;
      const double s = m.l + std::abs(m.k - a);
      const double exact = s * (s + 1.0);
      const double err = std::abs(sr.eigenvalues[j] - exact);
      sphere = std::max(sphere, exact > 0.0 ? err / exact : err);
      ++found;
    }
    modes += found;

    OperatorSpec ring;
    ring.kind = OperatorKind::RingMagnetic;
    ring.flux = a;
    ring.grid = grid(Domain::RingS1, 256);
    const auto rr = eigen_solve(ring, 7);
    std::vector<double> re;
    for (int k = -6; k <= 6; ++k) re.push_back((k - a) * (k - a));
    std::sort(re.begin(), re.end());
    for (int j = 0; j < 7; ++j) flat = std::max(flat, std::abs(rr.eigenvalues[j] - re[j]));

    OperatorSpec tor;
    tor.kind = OperatorKind::TorusMagnetic;
    tor.flux = a;
    tor.grid = grid(Domain::TorusT2, 32, 32);
    const auto tr = eigen_solve(tor, 3);
    auto triple = torus_low_modes(a);
    std::sort(triple.begin(), triple.end());
    for (int j = 0; j < 3; ++j) flat = std::max(flat, std::abs(tr.eigenvalues[j] - triple[j]));
  }
  const double t = clock.seconds();
  Outcome o;
  o.pass = sphere <= kC1SphereRel && flat <= kC1SolverAbs && t <= kC1Seconds && modes == 6 * 66;
  o.detail = "S2 max rel err " + fmt("%.2e", sphere) + " over " + std::to_string(modes) +
             " modes; ring/torus max abs err " + fmt("%.2e", flat) + "; " + fmt("%.1f", t) + " s";
  return o;
}

Outcome c2() {
  double worst_sym = 0.0, min_gap = INFINITY;
  int bad = 0;
  for (double a : kFluxGrid)
    for (double p : kSubGrid) {
      RingProblem rp;
      rp.fp = FluxParams::make(a, p);
      rp.param = ring_parameter_at(rp.fp, 0.9);
      const auto below = optimal_constant_ring(rp);
      const double c0 = ring_constant_value(rp.fp, rp.param);
      worst_sym = std::max(worst_sym, std::abs(below.value - c0));
      if (!below.symmetric || std::abs(below.value - c0) > kC2ValueTol) ++bad;
      rp.param = ring_parameter_at(rp.fp, 1.1);
      const auto above = optimal_constant_ring(rp);
      const double gap = ring_constant_value(rp.fp, rp.param) - above.value;
      min_gap = std::min(min_gap, gap);
      if (above.symmetric || gap <= kC2Gap) ++bad;
    }
  Outcome o;
  o.pass = bad == 0;
  o.detail = "90%: max |value - (a^2+mu)| " + fmt("%.2e", worst_sym) + "; 110%: min gap " +
             fmt("%.3e", min_gap) + "; " + std::to_string(bad) + " failing points of 60";
  return o;
}

Outcome c3() {
  double worst = 0.0;
  int bad = 0;
  for (double a : kFluxGrid)
    for (const auto* ps : {&kSubGrid, &kSuperGrid})
      for (double p : *ps) {
        const auto b = locate_bifurcation(a, p);
        worst = std::max(worst, b.rel_error);
        if (b.rel_error > kC3Rel) ++bad;
      }
  Outcome o;
  o.pass = bad == 0;
  o.detail = "max relative error " + fmt("%.2e", worst) + " over 60 (a, p) points";
  return o;
}

Outcome c4() {
  double worst = 0.0, zero = 0.0, match = 0.0;
  for (double a : kFluxGrid)
    for (double p : kSubGrid) {
      const double mu_star = ring_rigidity_threshold(FluxParams::make(a, p));
      for (double f : {0.25, 0.5, 0.9, 1.1, 1.5}) {
        const double mu = f * mu_star;
        worst = std::max(worst, std::abs(second_variation_oracle(a, p, mu) -
                                         second_variation_coefficient(a, p, mu)));
      }
      zero = std::max(zero, std::abs(second_variation_oracle(a, p, mu_star)));
      const auto b = locate_bifurcation(a, p);
      match = std::max(match, std::abs(b.estimate - mu_star) / mu_star);
    }
  Outcome o;
  o.pass = worst <= kC4Tol && zero <= kC4Tol && match <= kC3Rel;
  o.detail = "max |oracle - (1-4a^2-mu(2-p))/2| " + fmt("%.2e", worst) +
             "; max |oracle at mu*| " + fmt("%.2e", zero) + "; bifurcation vs zero rel " +
             fmt("%.2e", match);
  return o;
}

Outcome c5() {
  double ring_diff = 0.0, xvar = 0.0, exact = 0.0;
  for (double mu : {1.0, 1.5, 1.9}) {
    TorusProblem tp;
    tp.a_raw = 0.3;
    tp.p = 1.5;
    tp.mu = mu;
    const TorusResult r = minimize_rayleigh_torus(tp);
    RingProblem rp;
    rp.fp = FluxParams::make(0.3, 1.5);
    rp.param = mu;
    rp.opts.n = tp.opts.ny;
    const double ring = optimal_constant_ring(rp).value;
    ring_diff = std::max(ring_diff, std::abs(r.opt.value - ring));
    xvar = std::max(xvar, r.x_variation);
    if (mu * 0.5 + 4 * 0.09 <= 1.0) exact = std::max(exact, std::abs(r.opt.value - (0.09 + mu)));
  }
  Outcome o;
  o.pass = ring_diff <= kC5RingTol && xvar < kC5XVariation && exact <= kC5ExactTol;
  o.detail = "max |torus - ring| " + fmt("%.2e", ring_diff) + "; max x-variation " +
             fmt("%.2e", xvar) + "; |value - (a^2+mu)| at mu = 1: " + fmt("%.2e", exact);
  return o;
}

Outcome c6() {
  const GridPtr g = grid(Domain::TorusT2, 32, 32);
  double drift = 0.0, increase = 0.0, tensor = INFINITY;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto u0 = generate_test_function(g, Family::PositiveProfile, derive_seed(6, seed));
    for (double lambda : {0.0, 0.5, 1.0}) {
      FlowOptions fo;
      fo.t_end = 1.0;
      fo.dt = 1e-3;
      const FlowState st = run_bakry_emery_flow(u0, 1.5, lambda, fo);
      drift = std::max(drift, st.drift_per_time);
      increase = std::max(increase, st.max_increase);
    }
  }
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto u = generate_test_function(g, Family::PositiveProfile, derive_seed(66, seed));
    tensor = std::min(tensor, tensorization_check(u, 1.5).margin);
  }
  Outcome o;
  o.pass = drift < kC6Drift && increase <= kC6Increase && tensor >= kC6Tensor;
  o.detail = "max drift/time " + fmt("%.2e", drift) + "; max functional increase " +
             fmt("%.2e", increase) + "; min tensorization margin " + fmt("%.3e", tensor);
  return o;
}

Outcome c7() {
  double qerr = 0.0, perr = 0.0;
  for (double p : {2.5, 3.0, 4.0, 6.0, 8.0})
    for (double a : {0.0, 0.1, 0.2, 0.3}) {
      const double ls = planar_symmetry_thresholds(a, p).lambda_star;
      for (double f : {0.25, 0.5, 0.75, 1.0}) {
        const double lambda = -a * a + f * (ls + a * a);
        const HSParams hp = HSParams::make(a, p, lambda);
        const GridPtr g = planar_grid(hp);
        const auto e = extremal_profile(hp, g);
        const double mc = planar_mu_closed(hp.a, p, lambda).value;
        qerr = std::max(qerr, std::abs(hs_rayleigh_quotient(e, hp) - mc) / mc);
        const RadialSolution rs = solve_radial_euler_lagrange(hp, g);
        for (std::size_t i = 0; i < e.values.size(); ++i)
          perr = std::max(perr, std::abs(rs.profile.values[i] / rs.u0 - e.values[i]));
      }
    }
  const HSParams hp = HSParams::make(0.0, 4.0, 1.0);
  const RadialSolution rs = solve_radial_euler_lagrange(hp);
  const Grid& g = *rs.profile.grid;
  double sech = 0.0;
  for (int i = 0; i < g.shape[0]; ++i)
    sech = std::max(sech, std::abs(rs.profile.values[i * g.shape[1]].real() -
                                   std::sqrt(2.0) / std::cosh(g.nodes[0][i])));
  Outcome o;
  o.pass = qerr <= kC7QuotientRel && perr <= kC7ProfileSup && sech <= kC7SechSup;
  o.detail = "max rel quotient err " + fmt("%.2e", qerr) + " on 80 points; profile sup err " +
             fmt("%.2e", perr) + "; sqrt(2) sech sup err " + fmt("%.2e", sech);
  return o;
}

Outcome c8() {
  double worst = 0.0;
  std::string table;
  for (double a : {0.0, 0.1, 0.2, 0.3})
    for (double p : {3.0, 4.0, 6.0}) {
      const K1Crossing c = k1_sign_change(a, p);
      worst = std::max(worst, std::abs(c.offset));
      table += " (" + fmt("%.1f", a) + "," + fmt("%.0f", p) + "):" + fmt("%+.2e", c.offset);
    }
  bool order = true;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double a = 0.5 * i / 19.0 * 0.999;
      const double p = 2.2 + 0.5 * j;
      const auto t = planar_symmetry_thresholds(a, p);
      if (a == 0.0) {
        order = order && std::abs(t.lambda_bullet - t.lambda_star) <= kC8Order;
      } else {
        order = order && t.lambda_star <= t.lambda_bullet + kC8Order &&
                t.lambda_bullet - t.lambda_star > kC8Order;
      }
    }
  Outcome o;
  o.pass = worst <= kC8Offset && order;
  o.detail = "max |crossing - lambda_bullet| " + fmt("%.2e", worst) +
             (order ? "; ordering ok" : "; ordering FAILED") + ";" + table;
  return o;
}

Outcome c9() {
  Clock clock;
  SuiteOptions so;
  for (int s = 0; s < kC9Seeds; ++s) so.seeds.push_back(static_cast<std::uint64_t>(s));
  so.workers = std::max(1u, std::thread::hardware_concurrency());
  const auto reports = run_certificate_suite(so);
  int violated = 0, errors = 0;
  for (const auto& r : reports) {
    if (!r.ok) {
      ++errors;
      std::fprintf(stderr, "c9: %s seed %llu: %s\n", inequality_name(r.id),
                   static_cast<unsigned long long>(r.seed), r.error.c_str());
    } else if (r.verdict == Verdict::Violated) {
      ++violated;
      std::fprintf(stderr, "c9: %s seed %llu violated, margin %.3e\n", inequality_name(r.id),
                   static_cast<unsigned long long>(r.seed), r.margin);
    }
  }

  int saturated = 0, sat_cases = 0;
  double sat_worst = 0.0;
  auto saturate = [&](InequalityId id, double a, double p, double param) {
    const auto r = evaluate_certificate(make_saturation_case(id, a, p, param));
    ++sat_cases;
    const double rel = std::abs(r.margin) / std::max(std::abs(r.lhs), std::abs(r.rhs));
    sat_worst = std::max(sat_worst, rel);
    if (r.verdict == Verdict::Saturated && rel <= kC9Saturation) ++saturated;
  };
  for (double a : {0.0, 0.2, 0.4})
    for (double p : {1.25, 1.5, 1.75}) {
      const double cmax = (1.0 - 4 * a * a) / (2.0 - p);
      for (double f : {0.3, 0.9}) saturate(InequalityId::KLT_S1_SUB, a, p, f * cmax);
    }
  for (double a : {0.0, 0.2, 0.4})
    for (double p : {3.0, 4.0, 6.0}) {
      const double ls = planar_symmetry_thresholds(a, p).lambda_star;
      for (double f : {0.3, 0.9}) saturate(InequalityId::HS_R2, a, p, -a * a + f * (ls + a * a));
    }

  int improved = 0;
  double min_gain = INFINITY;
  for (int i = 1; i <= 5; ++i) {
    const double a = 0.1 * i;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto ep = evaluate_certificate(make_r3_radial_case(InequalityId::EKHOLM_PORTMANN, a, kNaN, seed));
      const auto rad = evaluate_certificate(make_r3_radial_case(InequalityId::HARDY_R3_RADIAL, a, 2.0, seed));
      const bool same = ep.lhs == rad.lhs;
      const double gain = rad.rhs - ep.rhs;
      min_gain = std::min(min_gain, gain / ep.rhs);
      if (same && gain > 0.0 && rad.verdict != Verdict::Violated &&
          ep.verdict != Verdict::Violated)
        ++improved;
    }
  }
  const double t = clock.seconds();
  Outcome o;
  o.pass = violated == 0 && errors == 0 && saturated == sat_cases && improved == 20 &&
           t <= kC9Seconds;
  o.detail = std::to_string(reports.size()) + " certificates (" + std::to_string(kC9Seeds) +
             " seeds x 17 ids): " + std::to_string(violated) + " Violated, " +
             std::to_string(errors) + " errors; saturation " + std::to_string(saturated) + "/" +
             std::to_string(sat_cases) + " (max rel margin " + fmt("%.1e", sat_worst) +
             "); radial beats EP " + std::to_string(improved) + "/20 (min rel gain " +
             fmt("%.3f", min_gain) + "); " + fmt("%.0f", t) + " s";
  return o;
}

Outcome c10() {
  bool pass = true;
  std::string detail;
  for (double p : {3.0, 4.0, 6.0}) {
    const GNRecord r = gn_constant(p);
    pass = pass && r.max_spread <= kC10Spread;
    detail += " p=" + fmt("%.0f", p) + ": C=" + fmt("%.8f", r.c_p) + " spread " +
              fmt("%.1e", r.max_spread) + " fitted " + fmt("%.8f", r.fitted_exponent) +
              " [2/p=" + fmt("%.4f", r.exponent_interp_l2) + ", p/2=" +
              fmt("%.1f", r.exponent_gn2) + "];";
  }
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> checks = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > 10) {
      std::fprintf(stderr, "usage: acceptance [1-10 ...]\n");
      return 1;
    }
    which.push_back(n);
  }
  if (which.empty())
    for (int n = 1; n <= 10; ++n) which.push_back(n);
  bool all = true;
  for (int n : which) {
    Outcome o;
    try {
      o = checks[n - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("criterion %d: %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
