#include "abflux/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <boost/math/tools/toms748_solve.hpp>

#include "abflux/constants.hpp"
#include "abflux/fft.hpp"
#include "abflux/planar.hpp"
#include "abflux/ring.hpp"
#include "abflux/testfn.hpp"

namespace abf {

namespace {

constexpr const char* kNames[kInequalityCount] = {
    "KLT_S1_SUPER",    "KLT_S1_SUPER_SPECTRAL", "HARDY_R2_SUPER",
    "HARDY_S2",        "RING_INV_NORM",         "KLT_S1_SUB",
    "KLT_S1_SUB_THRESHOLD", "HARDY_R2_SUB",     "HARDY_R3_HALF",
    "HARDY_R3_SUB",    "HARDY_R2_PLAIN",        "HS_R2",
    "KLT_R2",          "HARDY_R2_MAIN",         "HARDY_R3_RADIAL",
    "HARDY_R3_CYL",    "EKHOLM_PORTMANN"};

constexpr int kRingN = 64;
constexpr int kPlanarNs = 1025, kPlanarNt = 16;
constexpr double kPlanarL = 24.0;
constexpr int kCylN = 128, kCylFineN = 256, kCylNt = 16;
constexpr int kSphereNz = 160, kSphereNt = 32;

double bump(double t) {
  return std::abs(t) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
}

// ---------------------------------------------------------------------------
// Constants, cached per parameter tuple.

struct Constant {
  double value = 0.0;
  std::string source;
  bool reduced = false;
};

class ConstantCache {
 public:
  Constant get(int kind, double a, double p, double x,
               const std::function<Constant()>& compute) {
    const auto key = std::make_tuple(kind, a, p, x);
    {
      std::lock_guard<std::mutex> lk(m_);
      auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    Constant c = compute();
    std::lock_guard<std::mutex> lk(m_);
    map_.emplace(key, c);
    return c;
  }

 private:
  std::mutex m_;
  std::map<std::tuple<int, double, double, double>, Constant> map_;
};

ConstantCache& cache() {
  static ConstantCache c;
  return c;
}

double ring_optimum(double a, double p, double param) {
  RingProblem rp;
  rp.fp = FluxParams::make(a, p);
  rp.param = param;
  const OptimizationResult r = optimal_constant_ring(rp);
  require(r.converged, Status::NotConverged, "ring optimum did not converge");
  return r.value;
}

// mu_{a,p}(0) on S^1, p > 2.
Constant ring_mu0(double a, double p) {
  return cache().get(0, a, p, 0.0, [&] {
    // a = 0 included: mu_{0,p}(0) = 0.
    if (a * a * (p + 2.0) <= 1.0) return Constant{a * a, "closed_form", false};
    return Constant{ring_optimum(a, p, 0.0), "computed_optimum", false};
  });
}

// lambda_{a,p}(mu) for p > 2: inverse of lambda -> mu_{a,p}(lambda).
Constant ring_lambda_super(double a, double p, double mu) {
  return cache().get(1, a, p, mu, [&] {
    const double ls = ring_rigidity_threshold(FluxParams::make(a, p));
    if (mu - a * a <= ls) return Constant{mu - a * a, "closed_form", false};
    // mu_{a,p}(lambda) -> 0 as lambda -> -a^2.
    auto g = [&](double l) { return l <= -a * a ? -mu : ring_optimum(a, p, l) - mu; };
    double lo = std::max(ls, -a * a), hi = std::max(2.0 * (mu - a * a), ls + 1.0);
    int guard = 0;
    while (g(hi) < 0.0) {
      lo = hi;
      hi *= 2.0;
      require(++guard < 40, Status::NotConverged,
              "no bracket for the ring inverse lambda(mu)");
    }
    boost::uintmax_t it = 60;
    const auto r = boost::math::tools::toms748_solve(
        g, lo, hi, boost::math::tools::eps_tolerance<double>(44), it);
    return Constant{0.5 * (r.first + r.second), "computed_optimum", false};
  });
}

// lambda_{a,p}(mu) for p in [1, 2).
Constant ring_lambda_sub(double a, double p, double mu) {
  return cache().get(2, a, p, mu, [&] {
    if (mu * (2.0 - p) + 4.0 * a * a <= 1.0)
      return Constant{mu + a * a, "closed_form", false};
    return Constant{ring_optimum(a, p, mu), "computed_optimum", false};
  });
}

// lambda(mu) of the planar Hardy-Sobolev inequality. Closed form on the
// symmetric range; above mu(lambda_star) the radial shooting value is
// inverted numerically and the constant is flagged.
Constant planar_lambda(double a, double p, double mu) {
  return cache().get(3, a, p, mu, [&] {
    const PlanarThresholds th = planar_symmetry_thresholds(a, p);
    const double mu_star = planar_mu_closed(a, p, th.lambda_star).value;
    if (mu <= mu_star * (1.0 + 1e-12))
      return Constant{planar_lambda_of_mu_closed(a, p, mu), "closed_form", false};
    auto g = [&](double l) {
      return solve_radial_euler_lagrange(HSParams::make(a, p, l)).mu_numeric - mu;
    };
    double lo = th.lambda_star, hi = lo + 0.5 * (lo + a * a) + 0.1;
    if (g(lo) >= 0.0) return Constant{lo, "numerical_inverse", true};
    int guard = 0;
    while (g(hi) < 0.0) {
      lo = hi;
      hi = hi + 2.0 * (hi + a * a);
      require(++guard < 40, Status::NotConverged,
              "no bracket for the planar inverse lambda(mu)");
    }
    boost::uintmax_t it = 60;
    const auto r = boost::math::tools::toms748_solve(
        g, lo, hi, boost::math::tools::eps_tolerance<double>(36), it);
    return Constant{0.5 * (r.first + r.second), "numerical_inverse", true};
  });
}

// Proven lower bound for mu_{a,p}(0) on S^2; 0 when Lambda_a = 0.
double sphere_mu0_bound(double a, double p) {
  if (sphere2_ground(a) == 0.0) return 0.0;
  return interpolation_lower_bound(BoundDomain::SphereS2, a, p, 0.0);
}

// mu(0) of the planar inequality, 0 in the limit a -> 0.
double planar_mu0(double a, double p) {
  return a == 0.0 ? 0.0 : planar_mu_closed(a, p, 0.0).value;
}

// ---------------------------------------------------------------------------
// Ring quadrature.

double wsum(const DiscreteField& f, const std::function<double(std::size_t)>& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) s += f.grid->measure_weight(i) * g(i);
  return s;
}

double phi_at(const DiscreteField& phi, std::size_t i) { return phi.values[i].real(); }

double norm_q(const DiscreteField& phi, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (const cd& v : phi.values) m = std::max(m, std::abs(v.real()));
    return m;
  }
  return std::pow(wsum(phi, [&](std::size_t i) { return std::pow(std::abs(phi_at(phi, i)), q); }),
                  1.0 / q);
}

double inv_norm_q(const DiscreteField& phi, double q) {
  return std::pow(wsum(phi, [&](std::size_t i) { return std::pow(phi_at(phi, i), -q); }),
                  1.0 / q);
}

// Band-limited resampling of ring samples onto factor * n nodes.
DiscreteField refine_ring(const DiscreteField& f, int factor) {
  const int n = f.grid->shape[0], m = factor * n;
  const auto c = fft::coefficients(f.values, {n});
  std::vector<cd> v(m, 0.0);
  for (int j = 0; j < n; ++j) {
    const int k = wavenumber(j, n);
    v[k >= 0 ? k : m + k] = c[j];
  }
  fft::inverse(v.data(), {m});
  GridSpec gs;
  gs.domain = Domain::RingS1;
  gs.n0 = m;
  const GridPtr g = build_grid(gs);
  if (f.kind == FieldKind::RealPositiveProfile) {
    std::vector<double> r(m);
    for (int i = 0; i < m; ++i) r[i] = std::max(v[i].real(), 0.0);
    return DiscreteField::profile(g, r);
  }
  return DiscreteField::complex_field(g, std::move(v));
}

// Grid-independent ring recipe: (lhs, rhs) from psi and phi.
using RingRecipe = std::function<std::pair<double, double>(const DiscreteField&,
                                                           const DiscreteField&)>;

void finish_ring(CertificateReport& r, const CertificateInput& in,
                 const RingRecipe& recipe) {
  const auto base = recipe(in.psi, in.phi);
  const DiscreteField psi2 = refine_ring(in.psi, 2);
  const DiscreteField phi2 = in.phi.grid ? refine_ring(in.phi, 2) : DiscreteField{};
  const auto fine = recipe(psi2, phi2);
  r.lhs = base.first;
  r.rhs = base.second;
  const double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
  r.quad_error = std::max(std::abs(fine.first - base.first),
                          std::abs(fine.second - base.second)) +
                 1e-14 * scale;
}

// ---------------------------------------------------------------------------
// Log-radial quadrature: weights integrate ds dtheta = |x|^-2 dx.

struct PlanarParts {
  double energy = 0.0;  // int |grad_A psi|^2 dx
  double hardy = 0.0;   // int |psi|^2 |x|^-2 dx
  double quad_error_rel = 0.0;
};

double spectral_tail_2d(const std::vector<cd>& v, int n0, int n1) {
  const auto c = fft::coefficients(v, {n0, n1});
  double all = 0.0, high = 0.0;
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      const double e = std::norm(c[static_cast<std::size_t>(i) * n1 + j]);
      all += e;
      if (std::abs(wavenumber(i, n0)) > n0 / 4 || std::abs(wavenumber(j, n1)) > n1 / 4)
        high += e;
    }
  return all > 0.0 ? high / all : 0.0;
}

PlanarParts planar_parts(const DiscreteField& psi, double a) {
  require(psi.grid->domain == Domain::LogRadial, Status::InvalidArgument,
          "planar certificates need a log-radial field");
  PlanarParts pp;
  pp.energy = magnetic_energy(psi, a);
  const Grid& g = *psi.grid;
  for (std::size_t i = 0; i < psi.values.size(); ++i)
    pp.hardy += g.weights[i] * std::norm(psi.values[i]);
  const int ns = g.shape[0], nt = g.shape[1];
  std::vector<cd> body(psi.values.begin(), psi.values.begin() + (ns - 1) * nt);
  pp.quad_error_rel =
      1e-13 + 10.0 * spectral_tail_2d(body, ns - 1, nt) + measure_decay(psi.grid, psi.values);
  return pp;
}

double planar_lp(const DiscreteField& psi, double p) {
  const Grid& g = *psi.grid;
  double s = 0.0;
  for (std::size_t i = 0; i < psi.values.size(); ++i)
    s += g.weights[i] * std::pow(std::abs(psi.values[i]), p);
  return std::pow(s, 2.0 / p);
}

// theta-only potential sampled at the planar theta nodes.
double planar_ring_weighted(const DiscreteField& psi, const DiscreteField& phi) {
  const Grid& g = *psi.grid;
  const int ns = g.shape[0], nt = g.shape[1];
  require(phi.grid && phi.grid->domain == Domain::RingS1 && phi.grid->shape[0] == nt,
          Status::InvalidArgument, "angular potential must match the theta grid");
  double s = 0.0;
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * nt + j;
      s += g.weights[k] * phi.values[j].real() * std::norm(psi.values[k]);
    }
  return s;
}

double planar_field_weighted(const DiscreteField& psi, const DiscreteField& phi) {
  require(phi.grid == psi.grid, Status::InvalidArgument,
          "planar potential must share the field's grid");
  const Grid& g = *psi.grid;
  double s = 0.0;
  for (std::size_t i = 0; i < psi.values.size(); ++i)
    s += g.weights[i] * phi.values[i].real() * std::norm(psi.values[i]);
  return s;
}

double planar_field_norm(const DiscreteField& phi, double q) {
  const Grid& g = *phi.grid;
  double s = 0.0;
  for (std::size_t i = 0; i < phi.values.size(); ++i)
    s += g.weights[i] * std::pow(std::abs(phi.values[i].real()), q);
  return std::pow(s, 1.0 / q);
}

// ---------------------------------------------------------------------------
// Cylinder quadrature with spectral derivatives. Fields are supported away
// from rho = 0, rho = R and z = +-Z, so every axis is treated as periodic.

struct CylParts {
  double d_rho = 0.0, d_z = 0.0, d_theta = 0.0;
  double i_r = 0.0;      // int |psi|^2 / |x|^2
  double i_rho = 0.0;    // int |psi|^2 / rho^2
  double i_phi_rho = 0.0;
  double i_phi_omega = 0.0;
  double square = 0.0;   // completed square of the half Hardy identity
  double tail = 0.0;
  double energy() const { return d_rho + d_z + d_theta; }
};

CylParts cyl_parts(const DiscreteField& psi, double a, const DiscreteField* ring_phi,
                   const SpherePotential* sphere_phi) {
  const Grid& g = *psi.grid;
  require(g.domain == Domain::CylindricalR3, Status::InvalidArgument,
          "R^3 certificates need a cylindrical field");
  const int nr = g.shape[0], nt = g.shape[1], nz = g.shape[2];
  const double R = g.truncation, Z2 = 2.0 * g.truncation_z;
  std::vector<cd> c(psi.values);
  fft::forward(c.data(), g.shape);
  const double scale = 1.0 / (static_cast<double>(nr) * nt * nz);
  std::vector<cd> dr(c.size()), dz(c.size()), dt(c.size());
  double all = 0.0, high = 0.0;
  for (int i = 0; i < nr; ++i) {
    const int ki = wavenumber(i, nr);
    const double kr = (2 * ki == -nr) ? 0.0 : 2.0 * kPi * ki / R;
    for (int j = 0; j < nt; ++j) {
      const double kt = wavenumber(j, nt) - a;
      for (int l = 0; l < nz; ++l) {
        const int kl = wavenumber(l, nz);
        const double kz = (2 * kl == -nz) ? 0.0 : 2.0 * kPi * kl / Z2;
        const std::size_t idx = (static_cast<std::size_t>(i) * nt + j) * nz + l;
        const cd v = c[idx] * scale;
        dr[idx] = cd(0.0, kr) * v;
        dz[idx] = cd(0.0, kz) * v;
        dt[idx] = cd(0.0, kt) * v;
        const double e = std::norm(v);
        all += e;
        if (std::abs(ki) > nr / 4 || std::abs(kl) > nz / 4) high += e;
      }
    }
  }
  fft::inverse(dr.data(), g.shape);
  fft::inverse(dz.data(), g.shape);
  fft::inverse(dt.data(), g.shape);
  CylParts cp;
  cp.tail = all > 0.0 ? high / all : 0.0;
  for (int i = 0; i < nr; ++i) {
    const double rho = g.nodes[0][i];
    for (int j = 0; j < nt; ++j) {
      const double th = g.nodes[1][j];
      const double pr = ring_phi ? ring_phi->values[j].real() : 0.0;
      for (int l = 0; l < nz; ++l) {
        const double z = g.nodes[2][l];
        const std::size_t idx = (static_cast<std::size_t>(i) * nt + j) * nz + l;
        const double w = g.weights[idx], r2 = rho * rho + z * z;
        const cd u = psi.values[idx];
        const double m2 = std::norm(u);
        cp.d_rho += w * std::norm(dr[idx]);
        cp.d_z += w * std::norm(dz[idx]);
        cp.d_theta += w * std::norm(dt[idx]) / (rho * rho);
        cp.i_r += w * m2 / r2;
        cp.i_rho += w * m2 / (rho * rho);
        cp.i_phi_rho += w * pr * m2 / (rho * rho);
        if (sphere_phi) cp.i_phi_omega += w * (*sphere_phi)(th, z / std::sqrt(r2)) * m2 / r2;
        cp.square += w * (std::norm(dr[idx] + rho * u / (2.0 * r2)) +
                          std::norm(dz[idx] + z * u / (2.0 * r2)));
      }
    }
  }
  return cp;
}

// ---------------------------------------------------------------------------
// S^2 quadrature.

struct SphereGrid {
  Quadrature z;
  int nt = 0;
};

SphereGrid sphere_grid(int nz, int nt) { return SphereGrid{gauss_legendre(nz), nt}; }

// int f dsigma = (1/2) int dz (1/2pi) int dtheta.
double sphere_integral(const SphereGrid& sg, const std::function<double(double, double)>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < sg.z.nodes.size(); ++i) {
    double row = 0.0;
    for (int j = 0; j < sg.nt; ++j) row += f(2.0 * kPi * j / sg.nt, sg.z.nodes[i]);
    s += sg.z.weights[i] * row / sg.nt;
  }
  return 0.5 * s;
}

double sphere_potential_norm(const SpherePotential& phi, double q, const SphereGrid& sg) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (std::size_t i = 0; i < sg.z.nodes.size(); ++i)
      for (int j = 0; j < 4 * sg.nt; ++j)
        m = std::max(m, std::abs(phi(2.0 * kPi * j / (4 * sg.nt), sg.z.nodes[i])));
    for (double z : {-1.0, 1.0}) m = std::max(m, std::abs(phi(0.0, z)));
    return m;
  }
  return std::pow(sphere_integral(sg, [&](double t, double z) { return std::pow(std::abs(phi(t, z)), q); }),
                  1.0 / q);
}

// ---------------------------------------------------------------------------
// Test data generation.

const std::vector<double> kFluxPool = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
const std::vector<double> kSuperPool = {3.0, 4.0, 6.0};
const std::vector<double> kSubPool = {1.25, 1.5, 1.75};

template <class T>
T pick(Rng& rng, const std::vector<T>& pool) {
  return pool[rng.integer(0, static_cast<int>(pool.size()) - 1)];
}

GridPtr ring_grid(int n) {
  GridSpec gs;
  gs.domain = Domain::RingS1;
  gs.n0 = n;
  return build_grid(gs);
}

GridPtr planar_default_grid() {
  static const GridPtr g = [] {
    GridSpec gs;
    gs.domain = Domain::LogRadial;
    gs.n0 = kPlanarNs;
    gs.n1 = kPlanarNt;
    gs.truncation = kPlanarL;
    return build_grid(gs);
  }();
  return g;
}

GridPtr make_cylinder_grid(int n) {
  GridSpec gs;
  gs.domain = Domain::CylindricalR3;
  gs.n0 = n;
  gs.n1 = kCylNt;
  gs.n2 = n;
  gs.truncation = 1.0;
  gs.truncation_z = 1.0;
  return build_grid(gs);
}

GridPtr cylinder_default_grid() {
  static const GridPtr g = make_cylinder_grid(kCylN);
  return g;
}

// The half Hardy identity is checked to 1e-9 and needs the finer grid.
GridPtr cylinder_fine_grid() {
  static const GridPtr g = make_cylinder_grid(kCylFineN);
  return g;
}

DiscreteField scaled(const DiscreteField& f, double c) {
  DiscreteField g = f;
  for (cd& v : g.values) v *= c;
  return g;
}

DiscreteField ring_potential(int n, std::uint64_t seed) {
  return generate_test_function(ring_grid(n), Family::PositiveProfile, seed);
}

DiscreteField constant_ring_potential(int n, double c) {
  return DiscreteField::profile(ring_grid(n), std::vector<double>(n, c));
}

// |x|^2 phi or phi on the planar grid: a positive Gaussian ring in s with an
// angular modulation.
DiscreteField planar_potential(const GridPtr& g, std::uint64_t seed) {
  Rng rng(seed);
  const int ns = g->shape[0], nt = g->shape[1];
  const double s0 = rng.uniform(-3.0, 3.0), sigma = rng.uniform(0.5, 2.0);
  const int m = rng.integer(0, 3);
  const double eps = rng.uniform(0.0, 0.8), ph = rng.uniform(0.0, 2.0 * kPi);
  std::vector<cd> v(g->size());
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j) {
      const double t = (g->nodes[0][i] - s0) / sigma;
      v[static_cast<std::size_t>(i) * nt + j] =
          std::exp(-0.5 * t * t) * (1.0 + eps * std::cos(m * g->nodes[1][j] + ph));
    }
  return DiscreteField::complex_field(g, std::move(v));
}

SpherePotential sphere_potential(std::uint64_t seed) {
  Rng rng(seed);
  SpherePotential sp;
  const int terms = rng.integer(1, 4);
  for (int t = 0; t < terms; ++t) {
    SpherePotential::Term tm;
    tm.degree = rng.integer(0, 3);
    tm.m = rng.integer(0, 2);
    tm.phase = rng.uniform(0.0, 2.0 * kPi);
    tm.c = rng.normal();
    sp.terms.push_back(tm);
  }
  sp.scale = rng.uniform(0.05, 0.9);
  double gmax = 0.0;
  for (int i = 0; i <= 256; ++i)
    for (int j = 0; j < 64; ++j) {
      const double z = -1.0 + 2.0 * i / 256.0, th = 2.0 * kPi * j / 64.0;
      double gv = 0.0;
      for (const auto& x : sp.terms) gv += x.c * std::pow(z, x.degree) * std::cos(x.m * th + x.phase);
      gmax = std::max(gmax, std::abs(gv));
    }
  sp.gmax = gmax > 0.0 ? gmax : 1.0;
  return sp;
}

SphereField sphere_field(double a, std::uint64_t seed) {
  Rng rng(seed);
  SphereField sf;
  sf.a = a;
  const int sectors = rng.integer(1, 3);
  for (int s = 0; s < sectors; ++s) {
    int k = rng.integer(-2, 2);
    while (std::find(sf.ks.begin(), sf.ks.end(), k) != sf.ks.end()) k = rng.integer(-2, 2);
    const int deg = rng.integer(0, 6);
    std::vector<cd> c(deg + 1);
    for (cd& x : c) x = cd(rng.normal(), rng.normal()) / (1.0 + std::abs(k));
    sf.ks.push_back(k);
    sf.polys.push_back(c);
  }
  return sf;
}

DiscreteField r3_radial_field(const GridPtr& g, std::uint64_t seed) {
  Rng rng(seed);
  const int nr = g->shape[0], nt = g->shape[1], nz = g->shape[2];
  const double R = g->truncation, Z = g->truncation_z;
  const int bumps = rng.integer(1, 3);
  struct B {
    double r0, z0, w, c;
  };
  std::vector<B> bs;
  for (int b = 0; b < bumps; ++b) {
    B x;
    x.w = rng.uniform(0.15, 0.3) * std::min(R, Z);
    x.r0 = rng.uniform(x.w + 0.05 * R, 0.85 * R - x.w);
    x.z0 = rng.uniform(-0.85 * Z + x.w, 0.85 * Z - x.w);
    x.c = rng.normal();
    bs.push_back(x);
  }
  std::vector<cd> v(g->size());
  for (int i = 0; i < nr; ++i)
    for (int l = 0; l < nz; ++l) {
      double s = 0.0;
      for (const B& b : bs)
        s += b.c * bump(std::hypot(g->nodes[0][i] - b.r0, g->nodes[2][l] - b.z0) / b.w);
      for (int j = 0; j < nt; ++j) v[(static_cast<std::size_t>(i) * nt + j) * nz + l] = s;
    }
  return DiscreteField::complex_field(g, std::move(v));
}

double q_super(double p) { return p / (p - 2.0); }
double q_sub(double p) { return p / (2.0 - p); }

void need_flux(double a) {
  require(std::isfinite(a) && a >= 0.0 && a <= 0.5, Status::OutOfRange,
          "certificates take a in [0, 1/2]");
}
void need_super(double p) {
  require(std::isfinite(p) && p > 2.0, Status::OutOfRange, "this inequality needs p > 2");
}
void need_sub(double p, bool open_left) {
  require(std::isfinite(p) && (open_left ? p > 1.0 : p >= 1.0) && p < 2.0,
          Status::OutOfRange, open_left ? "this inequality needs p in (1, 2)"
                                        : "this inequality needs p in [1, 2)");
}
void need_psi(const CertificateInput& in, Domain d) {
  require(in.psi.grid && in.psi.grid->domain == d, Status::InvalidArgument,
          std::string(inequality_name(in.id)) + " needs a test function on " + domain_name(d));
}
void need_ring_phi(const CertificateInput& in, int n) {
  require(in.phi.grid && in.phi.grid->domain == Domain::RingS1 &&
              (n == 0 || in.phi.grid->shape[0] == n),
          Status::InvalidArgument,
          std::string(inequality_name(in.id)) + " needs an angular potential on S^1");
  for (const cd& v : in.phi.values)
    require(v.real() > 0.0, Status::InvalidArgument, "potential must be positive");
}

}  // namespace

// ---------------------------------------------------------------------------

const char* inequality_name(InequalityId id) { return kNames[static_cast<int>(id)]; }

std::optional<InequalityId> parse_inequality(const std::string& name) {
  for (int i = 0; i < kInequalityCount; ++i)
    if (name == kNames[i]) return static_cast<InequalityId>(i);
  return std::nullopt;
}

std::vector<InequalityId> all_inequalities() {
  std::vector<InequalityId> v;
  for (int i = 0; i < kInequalityCount; ++i) v.push_back(static_cast<InequalityId>(i));
  return v;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "Holds";
    case Verdict::Saturated: return "Saturated";
    case Verdict::Violated: return "Violated";
  }
  return "unknown";
}

double SpherePotential::operator()(double theta, double z) const {
  double g = 0.0;
  for (const Term& t : terms) g += t.c * std::pow(z, t.degree) * std::cos(t.m * theta + t.phase);
  return level * (1.0 + scale * g / gmax);
}

cd SphereField::operator()(double theta, double z) const {
  const double t = std::max(1.0 - z * z, 0.0);
  cd u = 0.0;
  for (std::size_t s = 0; s < ks.size(); ++s) {
    cd pz = 0.0;
    for (std::size_t d = polys[s].size(); d-- > 0;) pz = pz * z + polys[s][d];
    u += std::pow(t, 0.5 * std::abs(ks[s] - a)) * pz * std::exp(cd(0.0, ks[s] * theta));
  }
  return u;
}

// Per sector, with f = t^b P, t = 1 - z^2, 2b = |k - a|:
//   t|f'|^2 + 4b^2 |f|^2 / t = t^{2b-1} (|t P' - 2bzP|^2 + 4b^2 |P|^2),
// integrated exactly by Gauss-Jacobi with exponent 2b - 1.
double SphereField::energy() const {
  double e = 0.0;
  for (std::size_t s = 0; s < ks.size(); ++s) {
    const double b = 0.5 * std::abs(ks[s] - a);
    const auto& c = polys[s];
    const int deg = static_cast<int>(c.size()) - 1;
    const bool flat = b == 0.0;
    const Quadrature q = gauss_jacobi(deg + 4, flat ? 0.0 : 2.0 * b - 1.0);
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const double z = q.nodes[i], t = 1.0 - z * z;
      cd P = 0.0, dP = 0.0;
      for (int d = deg; d >= 0; --d) {
        dP = dP * z + P;
        P = P * z + c[d];
      }
      const double v = flat ? t * std::norm(dP)
                            : std::norm(t * dP - 2.0 * b * z * P) + 4.0 * b * b * std::norm(P);
      e += q.weights[i] * v;
    }
  }
  return 0.5 * e;
}

Verdict classify_margin(double lhs, double rhs, double quad_error,
                        const CertifyOptions& opts) {
  const double margin = lhs - rhs;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (std::abs(margin) <= opts.saturation_tol * scale) return Verdict::Saturated;
  if (margin < -(quad_error + opts.solver_tol * scale)) return Verdict::Violated;
  return Verdict::Holds;
}

CertificateReport evaluate_certificate(const CertificateInput& in,
                                       const CertifyOptions& opts) {
  CertificateReport r;
  r.id = in.id;
  r.a = in.a;
  r.p = in.p;
  r.seed = in.seed;
  r.phi_descriptor = in.phi_descriptor;
  need_flux(in.a);
  const double a = in.a, p = in.p;

  switch (in.id) {
    case InequalityId::KLT_S1_SUPER: {
      need_super(p);
      need_psi(in, Domain::RingS1);
      need_ring_phi(in, 0);
      r.q = q_super(p);
      const Constant c = ring_mu0(a, p);
      r.constant = c.value;
      r.constant_source = c.source;
      r.tau = c.value / norm_q(in.phi, r.q);
      finish_ring(r, in, [&](const DiscreteField& u, const DiscreteField& phi) {
        const double w = wsum(u, [&](std::size_t i) { return phi_at(phi, i) * std::norm(u.values[i]); });
        return std::make_pair(magnetic_energy(u, a), c.value / norm_q(phi, r.q) * w);
      });
      break;
    }
    case InequalityId::KLT_S1_SUPER_SPECTRAL: {
      need_super(p);
      need_psi(in, Domain::RingS1);
      need_ring_phi(in, 0);
      r.q = q_super(p);
      const double mu = norm_q(in.phi, r.q);
      const Constant c = ring_lambda_super(a, p, mu);
      r.constant = c.value;
      r.constant_source = c.source;
      r.tau = 1.0;
      finish_ring(r, in, [&](const DiscreteField& u, const DiscreteField& phi) {
        const double w = wsum(u, [&](std::size_t i) { return phi_at(phi, i) * std::norm(u.values[i]); });
        const double m2 = wsum(u, [&](std::size_t i) { return std::norm(u.values[i]); });
        return std::make_pair(magnetic_energy(u, a) - w, -c.value * m2);
      });
      break;
    }
    case InequalityId::RING_INV_NORM: {
      need_psi(in, Domain::RingS1);
      r.constant = 0.25;
      r.constant_source = "closed_form";
      finish_ring(r, in, [&](const DiscreteField& u, const DiscreteField&) {
        double lo = INFINITY, hi = -INFINITY;
        for (const cd& v : u.values) {
          lo = std::min(lo, v.real());
          hi = std::max(hi, v.real());
        }
        DiscreteField re = u;
        for (cd& v : re.values) v = v.real();
        const double inv = (lo < 0.0 && hi > 0.0) ? 0.0 : inverse_l2_term(re);
        const double m2 = wsum(re, [&](std::size_t i) { return std::norm(re.values[i]); });
        return std::make_pair(magnetic_energy(re, 0.0) + 0.25 * inv, 0.25 * m2);
      });
      break;
    }
    case InequalityId::KLT_S1_SUB: {
      need_sub(p, false);
      need_psi(in, Domain::RingS1);
      need_ring_phi(in, 0);
      r.q = q_sub(p);
      const double mu = 1.0 / inv_norm_q(in.phi, r.q);
      const Constant c = ring_lambda_sub(a, p, mu);
      r.constant = c.value;
      r.constant_source = c.source;
      r.tau = 1.0;
      finish_ring(r, in, [&](const DiscreteField& u, const DiscreteField& phi) {
        const double w = wsum(u, [&](std::size_t i) { return phi_at(phi, i) * std::norm(u.values[i]); });
        const double m2 = wsum(u, [&](std::size_t i) { return std::norm(u.values[i]); });
        return std::make_pair(magnetic_energy(u, a) + w, c.value * m2);
      });
      break;
    }
    case InequalityId::KLT_S1_SUB_THRESHOLD: {
      need_sub(p, true);
      need_psi(in, Domain::RingS1);
      need_ring_phi(in, 0);
      r.q = q_sub(p);
      const double k = (1.0 - 4.0 * a * a) / (2.0 - p);
      r.constant = k + a * a;
      r.constant_source = "closed_form";
      r.tau = k * inv_norm_q(in.phi, r.q);
      finish_ring(r, in, [&](const DiscreteField& u, const DiscreteField& phi) {
        const double w = wsum(u, [&](std::size_t i) { return phi_at(phi, i) * std::norm(u.values[i]); });
        const double m2 = wsum(u, [&](std::size_t i) { return std::norm(u.values[i]); });
        return std::make_pair(magnetic_energy(u, a) + k * inv_norm_q(phi, r.q) * w,
                              (k + a * a) * m2);
      });
      break;
    }
    case InequalityId::HARDY_S2: {
      need_super(p);
      require(in.psi_s2.has_value() && in.phi_s2.has_value(), Status::InvalidArgument,
              "HARDY_S2 needs a sphere field and a sphere potential");
      r.q = q_super(p);
      const double c = sphere_mu0_bound(a, p);
      r.constant = c;
      r.constant_source = "lower_bound";
      const SphereField& u = *in.psi_s2;
      const SpherePotential& phi = *in.phi_s2;
      auto eval = [&](const SphereGrid& sg) {
        const double w = sphere_integral(sg, [&](double t, double z) { return phi(t, z) * std::norm(u(t, z)); });
        return c / sphere_potential_norm(phi, r.q, sg) * w;
      };
      r.lhs = u.energy();
      r.rhs = eval(sphere_grid(kSphereNz, kSphereNt));
      const double coarse = eval(sphere_grid(kSphereNz / 2, kSphereNt));
      r.tau = c / sphere_potential_norm(phi, r.q, sphere_grid(kSphereNz, kSphereNt));
      r.quad_error = std::abs(r.rhs - coarse) +
                     1e-13 * std::max(std::abs(r.lhs), std::abs(r.rhs));
      break;
    }
    case InequalityId::HARDY_R2_SUPER:
    case InequalityId::HARDY_R2_SUB:
    case InequalityId::HARDY_R2_PLAIN:
    case InequalityId::HS_R2:
    case InequalityId::KLT_R2:
    case InequalityId::HARDY_R2_MAIN: {
      need_psi(in, Domain::LogRadial);
      const PlanarParts pp = planar_parts(in.psi, a);
      if (in.id == InequalityId::HARDY_R2_SUPER) {
        need_super(p);
        need_ring_phi(in, in.psi.grid->shape[1]);
        r.q = q_super(p);
        const Constant c = ring_mu0(a, p);
        r.constant = c.value;
        r.constant_source = c.source;
        r.tau = c.value / norm_q(in.phi, r.q);
        r.lhs = pp.energy;
        r.rhs = r.tau * planar_ring_weighted(in.psi, in.phi);
      } else if (in.id == InequalityId::HARDY_R2_SUB) {
        need_sub(p, true);
        need_ring_phi(in, in.psi.grid->shape[1]);
        r.q = q_sub(p);
        const double nrm = inv_norm_q(in.phi, r.q);
        require(std::abs(nrm - 1.0) <= 1e-9, Status::InvalidArgument,
                "HARDY_R2_SUB needs ||phi^-1||_q = 1");
        const double k = (1.0 - 4.0 * a * a) / (2.0 - p);
        r.constant = k + a * a;
        r.constant_source = "closed_form";
        r.tau = k;
        r.lhs = pp.energy + k * planar_ring_weighted(in.psi, in.phi);
        r.rhs = (k + a * a) * pp.hardy;
      } else if (in.id == InequalityId::HARDY_R2_PLAIN) {
        double m = INFINITY;
        for (int k = -3; k <= 3; ++k) m = std::min(m, (a - k) * (a - k));
        r.constant = m;
        r.constant_source = "closed_form";
        r.lhs = pp.energy;
        r.rhs = m * pp.hardy;
      } else if (in.id == InequalityId::HS_R2) {
        need_super(p);
        require(a < 0.5, Status::OutOfRange, "HS_R2 closed form needs a < 1/2");
        const double lam = in.lambda;
        const PlanarThresholds th = planar_symmetry_thresholds(a, p);
        require(std::isfinite(lam) && lam > -a * a, Status::OutOfRange,
                "HS_R2 needs lambda > -a^2");
        require(lam <= th.lambda_star + 1e-12 * std::max(1.0, std::abs(th.lambda_star)),
                Status::OutOfRange,
                "HS_R2: mu(lambda) is only known for lambda <= lambda_star");
        const double mu = planar_mu_closed(a, p, lam).value;
        r.constant = mu;
        r.constant_source = "closed_form";
        r.tau = lam;
        r.lhs = pp.energy + lam * pp.hardy;
        r.rhs = mu * planar_lp(in.psi, p);
      } else if (in.id == InequalityId::KLT_R2) {
        need_super(p);
        require(a < 0.5, Status::OutOfRange, "KLT_R2 needs a < 1/2");
        require(in.phi.grid == in.psi.grid, Status::InvalidArgument,
                "KLT_R2 needs |x|^2 phi on the field's grid");
        r.q = q_super(p);
        const double mu = planar_field_norm(in.phi, r.q);
        const Constant c = planar_lambda(a, p, mu);
        r.constant = c.value;
        r.constant_source = c.source;
        r.reduced_confidence = c.reduced;
        r.tau = 1.0;
        r.lhs = pp.energy - planar_field_weighted(in.psi, in.phi);
        r.rhs = -c.value * pp.hardy;
      } else {
        need_super(p);
        r.q = q_super(p);
        require(r.q > 1.0 && r.q < 2.0, Status::OutOfRange,
                "HARDY_R2_MAIN needs q in (1, 2)");
        require(a * a <= 4.0 / (12.0 + p * p) && a < 0.5, Status::OutOfRange,
                "HARDY_R2_MAIN: mu(0) is explicit only for a^2 <= 4/(12+p^2)");
        require(in.phi.grid == in.psi.grid, Status::InvalidArgument,
                "HARDY_R2_MAIN needs phi on the field's grid");
        const double mu0 = planar_mu0(a, p);
        r.constant = mu0;
        r.constant_source = "closed_form";
        r.tau = mu0 / planar_field_norm(in.phi, r.q);
        r.lhs = pp.energy;
        r.rhs = r.tau * planar_field_weighted(in.psi, in.phi);
      }
      r.quad_error = pp.quad_error_rel * std::max(std::abs(r.lhs), std::abs(r.rhs));
      break;
    }
    case InequalityId::HARDY_R3_HALF:
    case InequalityId::HARDY_R3_SUB:
    case InequalityId::HARDY_R3_RADIAL:
    case InequalityId::HARDY_R3_CYL:
    case InequalityId::EKHOLM_PORTMANN: {
      need_psi(in, Domain::CylindricalR3);
      const int nt = in.psi.grid->shape[1];
      const DiscreteField* rp = nullptr;
      const SpherePotential* sp = nullptr;
      if (in.id == InequalityId::HARDY_R3_SUB || in.id == InequalityId::HARDY_R3_CYL) {
        need_ring_phi(in, nt);
        rp = &in.phi;
      }
      if (in.id == InequalityId::HARDY_R3_RADIAL) {
        require(in.phi_s2.has_value(), Status::InvalidArgument,
                "HARDY_R3_RADIAL needs a potential on S^2");
        sp = &*in.phi_s2;
      }
      const CylParts cp = cyl_parts(in.psi, a, rp, sp);
      switch (in.id) {
        case InequalityId::HARDY_R3_HALF:
          r.constant = 0.25;
          r.constant_source = "closed_form";
          r.lhs = cp.d_rho + cp.d_z;
          r.rhs = 0.25 * cp.i_r;
          r.identity_residual = r.lhs - r.rhs - cp.square;
          break;
        case InequalityId::HARDY_R3_SUB: {
          need_sub(p, true);
          r.q = q_sub(p);
          require(std::abs(inv_norm_q(in.phi, r.q) - 1.0) <= 1e-9, Status::InvalidArgument,
                  "HARDY_R3_SUB needs ||phi^-1||_q = 1");
          const double k = (1.0 - 4.0 * a * a) / (2.0 - p);
          r.constant = k + a * a;
          r.constant_source = "closed_form";
          r.tau = k;
          r.lhs = cp.energy() + k * cp.i_phi_rho;
          r.rhs = 0.25 * cp.i_r + (k + a * a) * cp.i_rho;
          break;
        }
        case InequalityId::HARDY_R3_RADIAL: {
          const SphereGrid sg = sphere_grid(kSphereNz, kSphereNt);
          double c = 0.0;
          if (std::isfinite(p) && p == 2.0) {
            c = sphere2_ground(a);
            r.q = INFINITY;
            r.constant_source = "p_to_2_limit";
          } else {
            need_super(p);
            r.q = q_super(p);
            c = sphere_mu0_bound(a, p);
            r.constant_source = "lower_bound";
          }
          r.constant = c;
          r.tau = c / sphere_potential_norm(*sp, r.q, sg);
          r.lhs = cp.energy();
          r.rhs = 0.25 * cp.i_r + r.tau * cp.i_phi_omega;
          break;
        }
        case InequalityId::HARDY_R3_CYL: {
          need_super(p);
          r.q = q_super(p);
          const Constant c = ring_mu0(a, p);
          r.constant = c.value;
          r.constant_source = c.source;
          r.tau = c.value / norm_q(in.phi, r.q);
          r.lhs = cp.energy();
          r.rhs = 0.25 * cp.i_r + r.tau * cp.i_phi_rho;
          break;
        }
        default:
          r.constant = a * a;
          r.constant_source = "closed_form";
          r.lhs = cp.energy();
          r.rhs = (0.25 + a * a) * cp.i_r;
          break;
      }
      r.quad_error = (1e-13 + 10.0 * cp.tail) * std::max(std::abs(r.lhs), std::abs(r.rhs));
      break;
    }
  }
  r.margin = r.lhs - r.rhs;
  r.verdict = classify_margin(r.lhs, r.rhs, r.quad_error, opts);
  return r;
}

CertificateInput make_certificate_case(InequalityId id, std::uint64_t seed) {
  CertificateInput in;
  in.id = id;
  in.seed = seed;
  const std::uint64_t base = derive_seed(seed, 1000 + static_cast<std::uint64_t>(id));
  Rng rng(base);
  const std::uint64_t s_psi = derive_seed(base, 1), s_phi = derive_seed(base, 2);
  in.a = pick(rng, kFluxPool);

  auto ring_psi = [&] {
    in.psi = generate_test_function(ring_grid(kRingN), Family::FourierBandlimited, s_psi);
  };
  auto normalized_ring_phi = [&](int n, double q, double target, bool inverse) {
    DiscreteField phi = ring_potential(n, s_phi);
    const double nrm = inverse ? inv_norm_q(phi, q) : norm_q(phi, q);
    // ||c phi||_q = c ||phi||_q and ||(c phi)^-1||_q = ||phi^-1||_q / c.
    in.phi = scaled(phi, inverse ? nrm * target : target / nrm);
    in.phi_descriptor = "ring_positive_profile";
  };

  switch (id) {
    case InequalityId::KLT_S1_SUPER:
      in.p = pick(rng, kSuperPool);
      ring_psi();
      normalized_ring_phi(kRingN, q_super(in.p), 1.0, false);
      break;
    case InequalityId::KLT_S1_SUPER_SPECTRAL:
      in.p = pick(rng, kSuperPool);
      ring_psi();
      normalized_ring_phi(kRingN, q_super(in.p), pick(rng, std::vector<double>{0.1, 0.5, 1.0, 2.0}), false);
      break;
    case InequalityId::RING_INV_NORM: {
      const GridPtr g = ring_grid(kRingN);
      if (seed % 2 == 0) {
        in.psi = generate_test_function(g, Family::PositiveProfile, s_psi);
        in.phi_descriptor = "positive_profile";
      } else {
        DiscreteField f = generate_test_function(g, Family::FourierBandlimited, s_psi);
        const double shift = rng.uniform(-1.0, 1.0);
        for (cd& v : f.values) v = v.real() + shift;
        in.psi = f;
        in.phi_descriptor = "real_bandlimited";
      }
      break;
    }
    case InequalityId::KLT_S1_SUB:
      in.p = pick(rng, kSubPool);
      ring_psi();
      normalized_ring_phi(kRingN, q_sub(in.p), pick(rng, std::vector<double>{0.25, 0.5, 1.0}), true);
      break;
    case InequalityId::KLT_S1_SUB_THRESHOLD:
      in.p = pick(rng, kSubPool);
      ring_psi();
      normalized_ring_phi(kRingN, q_sub(in.p), 1.0, true);
      break;
    case InequalityId::HARDY_S2:
      in.p = pick(rng, kSuperPool);
      in.psi_s2 = sphere_field(in.a, s_psi);
      in.phi_s2 = sphere_potential(s_phi);
      in.phi_descriptor = "sphere_smooth";
      break;
    case InequalityId::HARDY_R2_SUPER:
      in.p = pick(rng, kSuperPool);
      in.psi = generate_test_function(planar_default_grid(), Family::GaussianBumpPhase, s_psi);
      normalized_ring_phi(kPlanarNt, q_super(in.p), 1.0, false);
      break;
    case InequalityId::HARDY_R2_SUB:
      in.p = pick(rng, kSubPool);
      in.psi = generate_test_function(planar_default_grid(), Family::GaussianBumpPhase, s_psi);
      normalized_ring_phi(kPlanarNt, q_sub(in.p), 1.0, true);
      break;
    case InequalityId::HARDY_R2_PLAIN:
      in.psi = generate_test_function(planar_default_grid(), Family::GaussianBumpPhase, s_psi);
      break;
    case InequalityId::HS_R2: {
      in.a = pick(rng, std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.4});
      in.p = pick(rng, kSuperPool);
      const double f = pick(rng, std::vector<double>{0.25, 0.5, 0.75, 1.0});
      const double ls = planar_symmetry_thresholds(in.a, in.p).lambda_star;
      in.lambda = -in.a * in.a + f * (ls + in.a * in.a);
      in.psi = generate_test_function(planar_default_grid(), Family::GaussianBumpPhase, s_psi);
      break;
    }
    case InequalityId::KLT_R2: {
      in.a = pick(rng, std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.4});
      in.p = pick(rng, kSuperPool);
      const double f = pick(rng, std::vector<double>{0.25, 0.5, 1.0, 1.5});
      const double ls = planar_symmetry_thresholds(in.a, in.p).lambda_star;
      const double target = f * planar_mu_closed(in.a, in.p, ls).value;
      in.psi = generate_test_function(planar_default_grid(), Family::GaussianBumpPhase, s_psi);
      const DiscreteField phi = planar_potential(planar_default_grid(), s_phi);
      in.phi = scaled(phi, target / planar_field_norm(phi, q_super(in.p)));
      in.phi_descriptor = "planar_gaussian_ring";
      break;
    }
    case InequalityId::HARDY_R2_MAIN: {
      in.p = pick(rng, std::vector<double>{5.0, 6.0, 8.0});
      std::vector<double> as;
      for (double x : kFluxPool)
        if (x * x <= 4.0 / (12.0 + in.p * in.p)) as.push_back(x);
      in.a = pick(rng, as);
      in.psi = generate_test_function(planar_default_grid(), Family::GaussianBumpPhase, s_psi);
      in.phi = planar_potential(planar_default_grid(), s_phi);
      in.phi_descriptor = "planar_gaussian_ring";
      break;
    }
    case InequalityId::HARDY_R3_HALF:
      in.psi = generate_test_function(cylinder_fine_grid(), Family::CompactSupportSmooth, s_psi);
      break;
    case InequalityId::EKHOLM_PORTMANN:
      in.psi = generate_test_function(cylinder_default_grid(), Family::CompactSupportSmooth, s_psi);
      break;
    case InequalityId::HARDY_R3_SUB:
      in.p = pick(rng, kSubPool);
      in.psi = generate_test_function(cylinder_default_grid(), Family::CompactSupportSmooth, s_psi);
      normalized_ring_phi(kCylNt, q_sub(in.p), 1.0, true);
      break;
    case InequalityId::HARDY_R3_CYL:
      in.p = pick(rng, kSuperPool);
      in.psi = generate_test_function(cylinder_default_grid(), Family::CompactSupportSmooth, s_psi);
      normalized_ring_phi(kCylNt, q_super(in.p), 1.0, false);
      break;
    case InequalityId::HARDY_R3_RADIAL:
      in.p = pick(rng, std::vector<double>{2.0, 3.0, 4.0, 6.0});
      in.psi = generate_test_function(cylinder_default_grid(), Family::CompactSupportSmooth, s_psi);
      in.phi_s2 = sphere_potential(s_phi);
      in.phi_descriptor = "sphere_smooth";
      break;
  }
  return in;
}

CertificateInput make_saturation_case(InequalityId id, double a, double p, double param) {
  CertificateInput in;
  in.id = id;
  in.a = a;
  in.p = p;
  switch (id) {
    case InequalityId::KLT_S1_SUB: {
      require(param * (2.0 - p) + 4.0 * a * a <= 1.0, Status::OutOfRange,
              "constant potential saturates only when c(2-p) + 4a^2 <= 1");
      const GridPtr g = ring_grid(kRingN);
      in.psi = DiscreteField::complex_field(g, std::vector<cd>(kRingN, 1.0));
      in.phi = constant_ring_potential(kRingN, param);
      in.phi_descriptor = "constant";
      break;
    }
    case InequalityId::HS_R2: {
      const HSParams hp = HSParams::make(a, p, param);
      const EmdenFowlerField e = extremal_profile(hp, planar_grid(hp));
      in.lambda = param;
      in.psi = e.field();
      break;
    }
    case InequalityId::RING_INV_NORM:
      in.psi = DiscreteField::profile(ring_grid(kRingN), std::vector<double>(kRingN, 1.0));
      in.phi_descriptor = "constant";
      break;
    default:
      fail(Status::InvalidArgument,
           std::string("no equality case for ") + inequality_name(id));
  }
  return in;
}

CertificateInput make_r3_radial_case(InequalityId id, double a, double p, std::uint64_t seed) {
  CertificateInput in;
  in.id = id;
  in.a = a;
  in.p = p;
  in.seed = seed;
  in.psi = r3_radial_field(
      id == InequalityId::HARDY_R3_HALF ? cylinder_fine_grid() : cylinder_default_grid(), seed);
  if (id == InequalityId::HARDY_R3_RADIAL) {
    in.phi_s2 = SpherePotential{};
    in.phi_descriptor = "constant";
  } else if (id == InequalityId::HARDY_R3_CYL || id == InequalityId::HARDY_R3_SUB) {
    in.phi = constant_ring_potential(kCylNt, 1.0);
    in.phi_descriptor = "constant";
  }
  return in;
}

CertificateInput make_plain_hardy_sector_case(double a, int k) {
  CertificateInput in;
  in.id = InequalityId::HARDY_R2_PLAIN;
  in.a = a;
  const GridPtr g = planar_default_grid();
  const int ns = g->shape[0], nt = g->shape[1];
  std::vector<cd> v(g->size());
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j) {
      const double s = g->nodes[0][i];
      v[static_cast<std::size_t>(i) * nt + j] =
          std::exp(-0.5 * s * s) * std::exp(cd(0.0, k * g->nodes[1][j]));
    }
  in.psi = DiscreteField::complex_field(g, std::move(v));
  std::ostringstream os;
  os << "sector_k" << k;
  in.phi_descriptor = os.str();
  return in;
}

std::vector<CertificateReport> run_certificate_suite(const SuiteOptions& opts) {
  const std::vector<InequalityId> ids = opts.ids.empty() ? all_inequalities() : opts.ids;
  struct Task {
    InequalityId id;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (InequalityId id : ids)
    for (std::uint64_t s : opts.seeds) tasks.push_back({id, s});
  std::vector<CertificateReport> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      CertificateReport& r = out[t];
      double a = 0.0, p = kNaN;
      try {
        const CertificateInput in = make_certificate_case(tasks[t].id, tasks[t].seed);
        a = in.a;
        p = in.p;
        r = evaluate_certificate(in, opts.certify);
      } catch (const std::exception& e) {
        r = CertificateReport{};
        r.id = tasks[t].id;
        r.seed = tasks[t].seed;
        r.a = a;
        r.p = p;
        r.ok = false;
        r.error = e.what();
      }
    }
  };
  const int nw = std::max(1, opts.workers);
  std::vector<std::thread> pool;
  for (int w = 1; w < nw; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace abf
