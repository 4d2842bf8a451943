#include "abflux/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "abflux/fft.hpp"

namespace abf {

const char* domain_name(Domain d) {
  switch (d) {
    case Domain::RingS1: return "S1";
    case Domain::TorusT2: return "T2";
    case Domain::IntervalZ: return "S2z";
    case Domain::LogRadial: return "R2";
    case Domain::CylindricalR3: return "R3";
  }
  return "?";
}

Quadrature gauss_jacobi(int n, double alpha) {
  require(n >= 1, Status::InvalidArgument, "quadrature needs n >= 1");
  require(std::isfinite(alpha) && alpha > -1.0, Status::InvalidArgument,
          "jacobi exponent must exceed -1");
  const double mu0 = std::exp((2.0 * alpha + 1.0) * std::log(2.0) +
                              2.0 * std::lgamma(alpha + 1.0) -
                              std::lgamma(2.0 * alpha + 2.0));
  std::vector<double> sb(n + 1, 0.0);  // sqrt of recurrence coefficients
  for (int k = 1; k <= n; ++k) {
    const double d1 = 2.0 * k + 2.0 * alpha + 1.0;
    const double d2 = 2.0 * k + 2.0 * alpha - 1.0;
    sb[k] = std::sqrt(k * (k + 2.0 * alpha) / (d1 * d2));
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off[k - 1] = sb[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);

  // Orthonormal recurrence: values p_0..p_{n-1}, p_n and p_n'.
  auto eval = [&](double x, double& pn, double& dpn, double& sumsq) {
    double pm = 0.0, p = 1.0 / std::sqrt(mu0);
    double dm = 0.0, dp = 0.0;
    sumsq = p * p;
    for (int k = 0; k < n; ++k) {
      const double bk = k > 0 ? sb[k] : 0.0;
      const double pnext = (x * p - bk * pm) / sb[k + 1];
      const double dnext = (p + x * dp - bk * dm) / sb[k + 1];
      pm = p;
      p = pnext;
      dm = dp;
      dp = dnext;
      if (k + 1 < n) sumsq += p * p;
    }
    pn = p;
    dpn = dp;
  };

  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = es.eigenvalues()[i];
    double pn, dpn, s;
    for (int it = 0; it < 3; ++it) {
      eval(x, pn, dpn, s);
      if (dpn == 0.0) break;
      const double dx = pn / dpn;
      if (!std::isfinite(dx) || std::abs(dx) > 1e-6) break;
      x -= dx;
    }
    eval(x, pn, dpn, s);
    q.nodes[i] = x;
    q.weights[i] = 1.0 / s;
  }
  // Exact symmetry about z = 0.
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (q.nodes[n - 1 - i] - q.nodes[i]);
    const double w = 0.5 * (q.weights[i] + q.weights[n - 1 - i]);
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    q.weights[i] = q.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) q.nodes[n / 2] = 0.0;
  return q;
}

Eigen::MatrixXd barycentric_diff_matrix(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> logw(n, 0.0);
  std::vector<int> sgn(n, 1);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = x[j] - x[k];
      require(d != 0.0, Status::InvalidArgument, "repeated interpolation node");
      logw[j] -= std::log(std::abs(d));
      if (d < 0) sgn[j] = -sgn[j];
    }
  }
  const double shift = *std::max_element(logw.begin(), logw.end());
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = sgn[j] * std::exp(logw[j] - shift);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      D(i, j) = (w[j] / w[i]) / (x[i] - x[j]);
      row += D(i, j);
    }
    D(i, i) = -row;
  }
  return D;
}

std::vector<double> periodic_derivative(const std::vector<double>& f,
                                        double period, int order) {
  const int n = static_cast<int>(f.size());
  std::vector<cd> c(f.begin(), f.end());
  fft::forward(c.data(), {n});
  const double scale = 2.0 * kPi / period;
  for (int j = 0; j < n; ++j) {
    const int k = wavenumber(j, n);
    if (order % 2 == 1 && n % 2 == 0 && j == n / 2) {
      c[j] = 0.0;
      continue;
    }
    c[j] *= std::pow(cd(0.0, scale * k), order) / static_cast<double>(n);
  }
  fft::inverse(c.data(), {n});
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = c[j].real();
  return out;
}

namespace {

std::vector<double> uniform_periodic(int n, double period) {
  std::vector<double> x(n);
  for (int j = 0; j < n; ++j) x[j] = period * j / n;
  return x;
}

void check_resolution(int n, const char* axis) {
  if (n < kMinResolution) {
    fail(Status::InvalidArgument,
         std::string("resolution below 16 on axis ") + axis);
  }
}

}  // namespace

GridPtr build_grid(const GridSpec& spec) {
  auto g = std::make_shared<Grid>();
  g->domain = spec.domain;
  switch (spec.domain) {
    case Domain::RingS1: {
      check_resolution(spec.n0, "theta");
      const int n = spec.n0;
      g->shape = {n};
      g->nodes = {uniform_periodic(n, 2.0 * kPi)};
      g->axis_weights = {std::vector<double>(n, 1.0 / n)};
      g->weights.assign(n, 1.0 / n);
      break;
    }
    case Domain::TorusT2: {
      const int nx = spec.n0, ny = spec.n1 > 0 ? spec.n1 : spec.n0;
      check_resolution(nx, "x");
      check_resolution(ny, "y");
      g->shape = {nx, ny};
      g->nodes = {uniform_periodic(nx, 2.0 * kPi),
                  uniform_periodic(ny, 2.0 * kPi)};
      g->axis_weights = {std::vector<double>(nx, 1.0 / nx),
                         std::vector<double>(ny, 1.0 / ny)};
      g->weights.assign(static_cast<std::size_t>(nx) * ny,
                        1.0 / (static_cast<double>(nx) * ny));
      break;
    }
    case Domain::IntervalZ: {
      check_resolution(spec.n0, "z");
      const Quadrature q = gauss_jacobi(spec.n0, spec.jacobi);
      g->shape = {spec.n0};
      g->jacobi = spec.jacobi;
      g->nodes = {q.nodes};
      // Normalized measure dz/2 acting on plain samples.
      std::vector<double> w(spec.n0);
      for (int i = 0; i < spec.n0; ++i) {
        const double z = q.nodes[i];
        w[i] = 0.5 * q.weights[i] / std::pow(1.0 - z * z, spec.jacobi);
      }
      g->axis_weights = {w};
      g->weights = w;
      break;
    }
    case Domain::LogRadial: {
      check_resolution(spec.n0, "s");
      const int ns = spec.n0, nt = spec.n1 > 0 ? spec.n1 : 32;
      check_resolution(nt, "theta");
      require(spec.truncation > 0.0, Status::InvalidArgument,
              "log-radial truncation must be positive");
      const double L = spec.truncation, h = 2.0 * L / (ns - 1);
      std::vector<double> s(ns), ws(ns, h);
      for (int i = 0; i < ns; ++i) s[i] = -L + h * i;
      ws.front() = ws.back() = 0.5 * h;
      g->measure = Measure::Lebesgue;
      g->truncation = L;
      g->shape = {ns, nt};
      g->nodes = {s, uniform_periodic(nt, 2.0 * kPi)};
      g->axis_weights = {ws, std::vector<double>(nt, 2.0 * kPi / nt)};
      g->weights.resize(static_cast<std::size_t>(ns) * nt);
      g->volume.resize(g->weights.size());
      for (int i = 0; i < ns; ++i) {
        for (int j = 0; j < nt; ++j) {
          g->weights[i * nt + j] = ws[i] * 2.0 * kPi / nt;
          g->volume[i * nt + j] = std::exp(2.0 * s[i]);
        }
      }
      break;
    }
    case Domain::CylindricalR3: {
      const int nr = spec.n0, nt = spec.n1 > 0 ? spec.n1 : 32,
                nz = spec.n2 > 0 ? spec.n2 : spec.n0;
      check_resolution(nr, "rho");
      check_resolution(nt, "theta");
      check_resolution(nz, "z");
      require(spec.truncation > 0.0 && spec.truncation_z > 0.0,
              Status::InvalidArgument, "cylinder extents must be positive");
      const double hr = spec.truncation / nr, hz = 2.0 * spec.truncation_z / nz;
      std::vector<double> rho(nr), z(nz);
      for (int i = 0; i < nr; ++i) rho[i] = (i + 0.5) * hr;
      for (int l = 0; l < nz; ++l) z[l] = -spec.truncation_z + (l + 0.5) * hz;
      g->measure = Measure::Lebesgue;
      g->truncation = spec.truncation;
      g->truncation_z = spec.truncation_z;
      g->shape = {nr, nt, nz};
      g->nodes = {rho, uniform_periodic(nt, 2.0 * kPi), z};
      std::vector<double> wr(nr);
      for (int i = 0; i < nr; ++i) wr[i] = rho[i] * hr;
      g->axis_weights = {wr, std::vector<double>(nt, 2.0 * kPi / nt),
                         std::vector<double>(nz, hz)};
      g->weights.resize(static_cast<std::size_t>(nr) * nt * nz);
      for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nt; ++j)
          for (int l = 0; l < nz; ++l)
            g->weights[(static_cast<std::size_t>(i) * nt + j) * nz + l] =
                wr[i] * (2.0 * kPi / nt) * hz;
      break;
    }
  }
  return g;
}

DiscreteField DiscreteField::complex_field(GridPtr g, std::vector<cd> v) {
  require(g != nullptr, Status::InvalidArgument, "field needs a grid");
  require(v.size() == g->size(), Status::InvalidArgument,
          "field size does not match grid");
  for (const cd& x : v)
    require(std::isfinite(x.real()) && std::isfinite(x.imag()),
            Status::InvalidArgument, "field values must be finite");
  DiscreteField f;
  f.grid = std::move(g);
  f.values = std::move(v);
  f.kind = FieldKind::Complex;
  return f;
}

DiscreteField DiscreteField::profile(GridPtr g, const std::vector<double>& v) {
  require(g != nullptr, Status::InvalidArgument, "field needs a grid");
  require(v.size() == g->size(), Status::InvalidArgument,
          "field size does not match grid");
  DiscreteField f;
  f.grid = std::move(g);
  f.values.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    require(std::isfinite(v[i]) && v[i] >= 0.0, Status::InvalidArgument,
            "profile values must be finite and non-negative");
    f.values[i] = v[i];
  }
  f.kind = FieldKind::RealPositiveProfile;
  return f;
}

std::vector<double> DiscreteField::real_part() const {
  std::vector<double> r(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) r[i] = values[i].real();
  return r;
}

std::vector<double> DiscreteField::modulus() const {
  std::vector<double> r(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) r[i] = std::abs(values[i]);
  return r;
}

double lp_norm(const DiscreteField& f, double p) {
  require(std::isfinite(p) && p >= 1.0, Status::InvalidArgument,
          "lp_norm needs p >= 1");
  const Grid& g = *f.grid;
  double s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    s += g.measure_weight(i) * std::pow(std::abs(f.values[i]), p);
  return std::pow(s, 1.0 / p);
}

namespace {

double energy_periodic(const DiscreteField& f, double a) {
  const Grid& g = *f.grid;
  const auto c = fft::coefficients(f.values, g.shape);
  double e = 0.0;
  if (g.domain == Domain::RingS1) {
    const int n = g.shape[0];
    for (int j = 0; j < n; ++j) {
      const double k = wavenumber(j, n) - a;
      e += k * k * std::norm(c[j]);
    }
    return e;
  }
  const int nx = g.shape[0], ny = g.shape[1];
  for (int i = 0; i < nx; ++i) {
    const double kx = wavenumber(i, nx);
    for (int j = 0; j < ny; ++j) {
      const double ky = wavenumber(j, ny) - a;
      e += (kx * kx + ky * ky) * std::norm(c[i * ny + j]);
    }
  }
  return e;
}

double energy_interval(const DiscreteField& f, double a) {
  const Grid& g = *f.grid;
  const auto& z = g.nodes[0];
  const Eigen::MatrixXd D = barycentric_diff_matrix(z);
  const int n = static_cast<int>(z.size());
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = f.values[i];
  const Eigen::VectorXcd dv = D.cast<cd>() * v;
  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = 1.0 - z[i] * z[i];
    e += g.weights[i] * (t * std::norm(dv[i]) + a * a * std::norm(v[i]) / t);
  }
  return e;
}

// Periodic extension over the first ns-1 rows; fields vanish at s = +-L.
double energy_log_radial(const DiscreteField& f, double a) {
  const Grid& g = *f.grid;
  const int ns = g.shape[0], nt = g.shape[1], m = ns - 1;
  std::vector<cd> v(f.values.begin(), f.values.begin() + m * nt);
  const auto c = fft::coefficients(v, {m, nt});
  const double L = g.truncation;
  double e = 0.0;
  for (int i = 0; i < m; ++i) {
    const double ks = kPi * wavenumber(i, m) / L;
    for (int j = 0; j < nt; ++j) {
      const double kt = wavenumber(j, nt) - a;
      e += (ks * ks + kt * kt) * std::norm(c[i * nt + j]);
    }
  }
  return e * (2.0 * L) * (2.0 * kPi);
}

double energy_cylindrical(const DiscreteField& f, double a) {
  const Grid& g = *f.grid;
  const int nr = g.shape[0], nt = g.shape[1], nz = g.shape[2];
  const auto& rho = g.nodes[0];
  const double hr = g.truncation / nr, ht = 2.0 * kPi / nt,
               hz = 2.0 * g.truncation_z / nz;
  auto at = [&](int i, int j, int l) -> cd {
    if (i >= nr || l < 0 || l >= nz) return 0.0;
    return f.values[(static_cast<std::size_t>(i) * nt + j) * nz + l];
  };
  double e = 0.0;
  // Forward differences, edge at rho_{i+1/2} = (i+1) hr.
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j)
      for (int l = -1; l < nz; ++l) {
        if (l >= 0) {
          const cd d = (at(i + 1, j, l) - at(i, j, l)) / hr;
          e += std::norm(d) * (i + 1) * hr * hr * ht * hz;
        }
        const cd dz = (at(i, j, l + 1) - at(i, j, l)) / hz;
        e += std::norm(dz) * rho[i] * hr * ht * hz;
      }
  std::vector<cd> ring(nt);
  for (int i = 0; i < nr; ++i)
    for (int l = 0; l < nz; ++l) {
      for (int j = 0; j < nt; ++j) ring[j] = at(i, j, l);
      const auto c = fft::coefficients(ring, {nt});
      double s = 0.0;
      for (int j = 0; j < nt; ++j) {
        const double k = wavenumber(j, nt) - a;
        s += k * k * std::norm(c[j]);
      }
      e += 2.0 * kPi * s / (rho[i] * rho[i]) * rho[i] * hr * hz;
    }
  return e;
}

}  // namespace

double magnetic_energy(const DiscreteField& f, double a) {
  require(std::isfinite(a), Status::InvalidArgument, "flux must be finite");
  switch (f.grid->domain) {
    case Domain::RingS1:
    case Domain::TorusT2: return energy_periodic(f, a);
    case Domain::IntervalZ: return energy_interval(f, a);
    case Domain::LogRadial: return energy_log_radial(f, a);
    case Domain::CylindricalR3: return energy_cylindrical(f, a);
  }
  fail(Status::Internal, "unknown domain");
}

double inverse_l2_term(const DiscreteField& u) {
  const Grid& g = *u.grid;
  require(g.measure == Measure::NormalizedProbability &&
              g.domain != Domain::IntervalZ,
          Status::InvalidArgument,
          "inverse L2 term is defined on periodic probability grids");
  double mean = 0.0, mn = INFINITY, s = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const double x = std::abs(u.values[i]);
    mean += g.weights[i] * x;
    mn = std::min(mn, x);
  }
  if (mn < kVanishFactor * mean || mn == 0.0) return 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const double x = std::abs(u.values[i]);
    s += g.weights[i] / (x * x);
  }
  return 1.0 / s;
}

}  // namespace abf
