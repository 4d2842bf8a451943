#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "abflux/numerics.hpp"

namespace abf {

enum class InequalityId {
  KLT_S1_SUPER,
  KLT_S1_SUPER_SPECTRAL,
  HARDY_R2_SUPER,
  HARDY_S2,
  RING_INV_NORM,
  KLT_S1_SUB,
  KLT_S1_SUB_THRESHOLD,
  HARDY_R2_SUB,
  HARDY_R3_HALF,
  HARDY_R3_SUB,
  HARDY_R2_PLAIN,
  HS_R2,
  KLT_R2,
  HARDY_R2_MAIN,
  HARDY_R3_RADIAL,
  HARDY_R3_CYL,
  EKHOLM_PORTMANN,
};

inline constexpr int kInequalityCount = 17;

const char* inequality_name(InequalityId id);
std::optional<InequalityId> parse_inequality(const std::string& name);
std::vector<InequalityId> all_inequalities();

enum class Verdict { Holds, Saturated, Violated };
const char* verdict_name(Verdict v);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Smooth potential on S^2 in (theta, z = cos of the polar angle):
//   1 + scale * g / max|g|,  g = sum c_j P_j(z) cos(m_j theta + phase_j),
// multiplied by `level`. P_j are monomials of degree <= 3.
struct SpherePotential {
  struct Term {
    int degree = 0;
    int m = 0;
    double phase = 0.0;
    double c = 0.0;
  };
  std::vector<Term> terms;
  double scale = 0.0;
  double gmax = 1.0;
  double level = 1.0;

  double operator()(double theta, double z) const;
};

// Sum over sectors k of e^{ik theta} (1-z^2)^{|k-a|/2} P_k(z) on S^2.
struct SphereField {
  double a = 0.0;
  std::vector<int> ks;
  std::vector<std::vector<cd>> polys;  // ascending coefficients of P_k

  cd operator()(double theta, double z) const;
  double energy() const;  // int |grad_A u|^2 over the probability measure
};

// Everything one certificate reads. Unused members stay empty.
struct CertificateInput {
  InequalityId id = InequalityId::KLT_S1_SUPER;
  double a = 0.0;        // flux in [0, 1/2]
  double p = kNaN;       // NaN when the id has no exponent; 2 is the p -> 2 limit
  double lambda = kNaN;  // HS_R2
  std::uint64_t seed = 0;

  DiscreteField psi;          // RingS1, LogRadial or CylindricalR3
  DiscreteField phi;          // RingS1 potential, or LogRadial |x|^2 phi
  std::optional<SphereField> psi_s2;
  std::optional<SpherePotential> phi_s2;
  std::string phi_descriptor = "none";
};

struct CertificateReport {
  InequalityId id = InequalityId::KLT_S1_SUPER;
  double a = 0.0;
  double p = kNaN;
  double q = kNaN;
  double tau = kNaN;  // constant in front of the potential term
  std::uint64_t seed = 0;
  std::string phi_descriptor;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double quad_error = 0.0;
  Verdict verdict = Verdict::Holds;
  std::string constant_source;  // closed_form | computed_optimum | lower_bound | ...
  double constant = kNaN;
  bool reduced_confidence = false;
  // HARDY_R3_HALF: lhs - rhs minus the quadrature of the completed square.
  double identity_residual = kNaN;
  bool ok = true;  // false: `error` holds the reason, numbers are meaningless
  std::string error;
};

struct CertifyOptions {
  double saturation_tol = 1e-6;  // relative to max(|lhs|, |rhs|)
  double solver_tol = 1e-9;      // relative to max(|lhs|, |rhs|)
};

Verdict classify_margin(double lhs, double rhs, double quad_error,
                        const CertifyOptions& opts = {});

CertificateReport evaluate_certificate(const CertificateInput& in,
                                       const CertifyOptions& opts = {});

// Deterministic random case for (id, seed): parameters from fixed pools,
// test function and potential from generate_test_function.
CertificateInput make_certificate_case(InequalityId id, std::uint64_t seed);

// Equality cases. KLT_S1_SUB: constant potential c and the constant ground
// state, requires c(2-p) + 4a^2 <= 1. HS_R2: the explicit extremal at
// lambda <= lambda_star. RING_INV_NORM: the constant profile.
CertificateInput make_saturation_case(InequalityId id, double a, double p,
                                      double param);

// Radial data on the cylinder grid shared by the R^3 identity and Hardy
// comparisons: bumps in (rho, z) with angular mode 0.
CertificateInput make_r3_radial_case(InequalityId id, double a, double p,
                                     std::uint64_t seed);

// HARDY_R2_PLAIN on e^{ik theta} f(s) with a fixed Gaussian f.
CertificateInput make_plain_hardy_sector_case(double a, int k);

struct SuiteOptions {
  std::vector<InequalityId> ids;  // empty: all
  std::vector<std::uint64_t> seeds;
  int workers = 1;
  CertifyOptions certify;
};

// Reports ordered by (id, seed) regardless of the worker count. Errors are
// caught per certificate and returned as ok = false rows.
std::vector<CertificateReport> run_certificate_suite(const SuiteOptions& opts);

}  // namespace abf
