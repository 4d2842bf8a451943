#include "abflux/torus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "abflux/constants.hpp"
#include "abflux/fft.hpp"

namespace abf {

const char* flow_scheme_name(FlowScheme s) {
  switch (s) {
    case FlowScheme::ExactPower: return "exact";
    case FlowScheme::ImplicitPower: return "implicit";
    case FlowScheme::SemiImplicit: return "semi-implicit";
  }
  return "?";
}

const char* torus_shape_name(TorusShape s) {
  switch (s) {
    case TorusShape::Constant: return "constant";
    case TorusShape::XIndependent: return "x-independent";
    case TorusShape::TwoDimensional: return "2d";
  }
  return "?";
}

namespace {

// |k|^2 per FFT index on a ring or torus grid.
std::vector<double> laplace_symbol(const Grid& g) {
  std::vector<double> s(g.size());
  if (g.domain == Domain::RingS1) {
    const int n = g.shape[0];
    for (int j = 0; j < n; ++j) s[j] = std::pow(wavenumber(j, n), 2);
  } else {
    const int nx = g.shape[0], ny = g.shape[1];
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        s[static_cast<std::size_t>(i) * ny + j] =
            std::pow(wavenumber(i, nx), 2) + std::pow(wavenumber(j, ny), 2);
  }
  return s;
}

void check_periodic(const DiscreteField& f) {
  require(f.grid != nullptr, Status::InvalidArgument, "field needs a grid");
  require(f.grid->domain == Domain::RingS1 || f.grid->domain == Domain::TorusT2,
          Status::InvalidArgument, "flow and tensorization need S1 or T2");
}

struct PeriodicNorms {
  double dirichlet = 0.0, l2sq = 0.0, lp = 0.0, tail = 0.0;
};

PeriodicNorms periodic_norms(const Grid& g, const std::vector<double>& u,
                             const std::vector<double>& sym, double p) {
  PeriodicNorms r;
  std::vector<cd> c(u.begin(), u.end());
  c = fft::coefficients(c, g.shape);
  double pp = 0.0;
  const double kmax = *std::max_element(sym.begin(), sym.end());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double e = std::norm(c[i]);
    r.dirichlet += sym[i] * e;
    if (sym[i] > kmax / 16.0) r.tail += (1.0 + sym[i]) * e;
    r.l2sq += g.weights[i] * u[i] * u[i];
    pp += g.weights[i] * std::pow(u[i], p);
  }
  r.lp = std::pow(pp, 1.0 / p);
  return r;
}

}  // namespace

FlowState run_bakry_emery_flow(const DiscreteField& u0, double p, double lambda,
                               const FlowOptions& opts) {
  check_periodic(u0);
  require(std::isfinite(p) && p >= 1.0 && p < 2.0, Status::OutOfRange,
          "flow needs 1 <= p < 2");
  require(std::isfinite(lambda) && lambda >= 0.0 && lambda <= 1.0,
          Status::OutOfRange, "flow needs 0 <= lambda <= 1");
  require(opts.t_end > 0.0 && opts.dt > 0.0 && opts.dt_min > 0.0 &&
              opts.dt >= opts.dt_min && opts.record_every >= 1,
          Status::InvalidArgument, "bad flow time stepping");
  const Grid& g = *u0.grid;
  const std::size_t n = g.size();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(std::abs(u0.values[i].imag()) == 0.0 && u0.values[i].real() > 0.0,
            Status::InvalidArgument, "flow needs a strictly positive profile");
    u[i] = u0.values[i].real();
  }
  const std::vector<double> sym = laplace_symbol(g);

  FlowState st;
  st.p = p;
  st.lambda = lambda;
  auto record = [&](double t) {
    const PeriodicNorms nm = periodic_norms(g, u, sym, p);
    st.history.push_back({t, nm.dirichlet - lambda * nm.l2sq, nm.lp});
  };
  record(0.0);
  const double lp0 = st.history.front().lp_norm;
  double prev_f = st.history.front().functional;

  auto to_power = [&]() {
    std::vector<cd> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::pow(u[i], p);
    return fft::coefficients(v, g.shape);
  };
  auto from_power = [&](std::vector<cd> vh) {
    fft::inverse(vh.data(), g.shape);
    std::vector<double> un(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = vh[i].real();
      if (!(v > 0.0)) return std::vector<double>{};
      un[i] = std::pow(v, 1.0 / p);
    }
    return un;
  };
  auto positivity_error = [&](double t) {
    std::ostringstream os;
    os.precision(12);
    const auto mm = std::minmax_element(u.begin(), u.end());
    os << "flow lost positivity at t = " << t << " with dt below dt_min ("
       << opts.dt_min << "); last state min " << *mm.first << " max "
       << *mm.second;
    fail(Status::NotConverged, os.str());
  };

  const std::vector<cd> v0 = opts.scheme == FlowScheme::ExactPower
                                 ? to_power()
                                 : std::vector<cd>{};
  std::vector<cd> vh = opts.scheme == FlowScheme::ImplicitPower
                           ? to_power()
                           : std::vector<cd>{};
  double t = 0.0, dt = opts.dt;
  int since_record = 0;
  while (t < opts.t_end * (1.0 - 1e-14)) {
    const double h = std::min(dt, opts.t_end - t);
    std::vector<double> un;
    std::vector<cd> vn;
    switch (opts.scheme) {
      case FlowScheme::ExactPower: {
        vn = v0;
        for (std::size_t i = 0; i < n; ++i) vn[i] *= std::exp(-sym[i] * (t + h));
        un = from_power(vn);
        break;
      }
      case FlowScheme::ImplicitPower: {
        vn = vh;
        for (std::size_t i = 0; i < n; ++i) vn[i] /= 1.0 + h * sym[i];
        un = from_power(vn);
        break;
      }
      case FlowScheme::SemiImplicit: {
        // |grad u|^2 via spectral derivatives along each axis.
        std::vector<cd> c(u.begin(), u.end());
        c = fft::coefficients(c, g.shape);
        std::vector<double> grad2(n, 0.0);
        const int axes = static_cast<int>(g.shape.size());
        for (int ax = 0; ax < axes; ++ax) {
          std::vector<cd> d(c);
          const int nx = g.shape[0], ny = axes == 2 ? g.shape[1] : 1;
          for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
              const std::size_t idx = static_cast<std::size_t>(i) * ny + j;
              const int k = ax == 0 ? wavenumber(i, nx) : wavenumber(j, ny);
              const int nn = ax == 0 ? nx : ny;
              const int kk = (ax == 0 ? i : j);
              d[idx] *= (2 * kk == nn) ? cd(0.0) : cd(0.0, k);
            }
          fft::inverse(d.data(), g.shape);
          for (std::size_t i = 0; i < n; ++i) grad2[i] += std::norm(d[i].real());
        }
        std::vector<cd> rhs(n);
        for (std::size_t i = 0; i < n; ++i)
          rhs[i] = u[i] + h * (p - 1.0) * grad2[i] / u[i];
        rhs = fft::coefficients(rhs, g.shape);
        for (std::size_t i = 0; i < n; ++i) rhs[i] /= 1.0 + h * sym[i];
        fft::inverse(rhs.data(), g.shape);
        un.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          un[i] = rhs[i].real();
          if (!(un[i] > 0.0)) {
            un.clear();
            break;
          }
        }
        break;
      }
    }
    if (un.empty()) {
      if (opts.scheme == FlowScheme::ExactPower || dt * 0.5 < opts.dt_min)
        positivity_error(t);
      dt *= 0.5;
      ++st.halvings;
      continue;
    }
    u = std::move(un);
    if (opts.scheme == FlowScheme::ImplicitPower) vh = std::move(vn);
    t += h;
    ++st.steps;
    if (++since_record >= opts.record_every || t >= opts.t_end * (1.0 - 1e-14)) {
      since_record = 0;
      record(t);
      const FlowSample& s = st.history.back();
      st.max_increase = std::max(st.max_increase, s.functional - prev_f);
      st.max_drift = std::max(st.max_drift, std::abs(s.lp_norm - lp0));
      prev_f = s.functional;
    }
  }
  st.t = t;
  st.drift_per_time = st.max_drift / opts.t_end;
  st.u = DiscreteField::profile(u0.grid, u);
  return st;
}

TensorizationRecord tensorization_check(const DiscreteField& u, double p) {
  check_periodic(u);
  require(std::isfinite(p) && p >= 1.0 && p < 2.0, Status::OutOfRange,
          "tensorization needs 1 <= p < 2");
  const Grid& g = *u.grid;
  std::vector<double> x(g.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(u.values[i].imag() == 0.0, Status::InvalidArgument,
            "tensorization needs a real profile");
    x[i] = u.values[i].real();
  }
  const PeriodicNorms nm = periodic_norms(g, x, laplace_symbol(g), p);
  TensorizationRecord r;
  r.lhs = (2.0 - p) * nm.dirichlet + nm.lp * nm.lp;
  r.rhs = nm.l2sq;
  r.margin = r.lhs - r.rhs;
  r.quad_error = 1e-14 * (std::abs(r.lhs) + std::abs(r.rhs)) + nm.tail;
  return r;
}

namespace {

// Even-even profiles X(i, j), i in 0..nx/2, j in 0..ny/2, flattened i * my + j.
// F = R + (M2 - 1)^2 with R = (D + a^2 T + mu P) / M2 and
// T = sum_i wx_i / S_i, S_i = sum_j wy_j X_ij^-2.
class TorusObjective {
 public:
  TorusObjective(int nx, int ny, double a, double p, double mu)
      : rx_(reduced_ring(nx)), ry_(reduced_ring(ny)), mx_(rx_.m), my_(ry_.m),
        a2_(a * a), p_(p), mu_(mu) {
    const int n = mx_ * my_;
    w_.resize(n);
    hD_ = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < mx_; ++i)
      for (int j = 0; j < my_; ++j) {
        const int r = i * my_ + j;
        w_[r] = rx_.w[i] * ry_.w[j];
        for (int ii = 0; ii < mx_; ++ii) hD_(r, ii * my_ + j) += 2.0 * rx_.K(i, ii) * ry_.w[j];
        for (int jj = 0; jj < my_; ++jj) hD_(r, i * my_ + jj) += 2.0 * rx_.w[i] * ry_.K(j, jj);
      }
  }

  int size() const { return mx_ * my_; }
  int mx() const { return mx_; }
  int my() const { return my_; }

  bool feasible(const Eigen::VectorXd& x) const {
    const double mean = w_.dot(x.cwiseAbs());
    return (x.array() > kVanishFactor * mean).all();
  }

  struct Parts {
    double D, T, M2, Pp, P, N, Q;
    Eigen::VectorXd S;
  };

  Parts parts(const Eigen::VectorXd& x) const {
    Parts t;
    t.D = 0.5 * x.dot(hD_ * x);
    t.M2 = w_.dot(x.cwiseProduct(x));
    t.Pp = 0.0;
    for (int r = 0; r < size(); ++r) t.Pp += w_[r] * std::pow(x[r], p_);
    t.P = std::pow(t.Pp, 2.0 / p_);
    t.S = Eigen::VectorXd::Zero(mx_);
    t.T = 0.0;
    for (int i = 0; i < mx_; ++i) {
      for (int j = 0; j < my_; ++j) {
        const double v = x[i * my_ + j];
        t.S[i] += ry_.w[j] / (v * v);
      }
      t.T += rx_.w[i] / t.S[i];
    }
    t.N = t.D + a2_ * t.T + mu_ * t.P;
    t.Q = t.N / t.M2;
    return t;
  }

  double reduced_quotient(const Eigen::VectorXd& x) const { return parts(x).Q; }

  double value(const Eigen::VectorXd& x) const {
    const Parts t = parts(x);
    return t.Q + (t.M2 - 1.0) * (t.M2 - 1.0);
  }

  void derivatives(const Eigen::VectorXd& x, Eigen::VectorXd* grad,
                   Eigen::MatrixXd* hess) const {
    const int n = size();
    const Parts t = parts(x);
    Eigen::VectorXd gT(n), gP(n), u3(n);
    const Eigen::VectorXd gM = 2.0 * w_.cwiseProduct(x);
    const double cP = 2.0 * std::pow(t.Pp, 2.0 / p_ - 1.0);
    for (int i = 0; i < mx_; ++i)
      for (int j = 0; j < my_; ++j) {
        const int r = i * my_ + j;
        const double v = x[r];
        u3[r] = ry_.w[j] / (v * v * v);
        gT[r] = rx_.w[i] * 2.0 * u3[r] / (t.S[i] * t.S[i]);
        gP[r] = cP * w_[r] * std::pow(v, p_ - 1.0);
      }
    const Eigen::VectorXd gN = hD_ * x + a2_ * gT + mu_ * gP;
    const Eigen::VectorXd gQ = (gN - t.Q * gM) / t.M2;
    if (grad) *grad = gQ + 2.0 * (t.M2 - 1.0) * gM;
    if (!hess) return;
    Eigen::VectorXd wu(n);
    for (int r = 0; r < n; ++r) wu[r] = w_[r] * std::pow(x[r], p_ - 1.0);
    Eigen::MatrixXd hN = hD_;
    hN.noalias() += mu_ * 2.0 * (2.0 - p_) * std::pow(t.Pp, 2.0 / p_ - 2.0) *
                    (wu * wu.transpose());
    for (int r = 0; r < n; ++r)
      hN(r, r) += mu_ * cP * w_[r] * (p_ - 1.0) * std::pow(x[r], p_ - 2.0);
    if (a2_ != 0.0) {
      for (int i = 0; i < mx_; ++i) {
        const double S = t.S[i], c = a2_ * rx_.w[i];
        for (int j = 0; j < my_; ++j) {
          const int r = i * my_ + j;
          for (int l = 0; l < my_; ++l)
            hN(r, i * my_ + l) += c * 8.0 * u3[r] * u3[i * my_ + l] / (S * S * S);
          hN(r, r) -= c * 6.0 * ry_.w[j] / std::pow(x[r], 4) / (S * S);
        }
      }
    }
    const Eigen::MatrixXd hM = (2.0 * w_).asDiagonal();
    Eigen::MatrixXd hQ =
        (hN - t.Q * hM - gQ * gM.transpose() - gM * gQ.transpose()) / t.M2;
    *hess = hQ + 2.0 * gM * gM.transpose() + 2.0 * (t.M2 - 1.0) * hM;
  }

 private:
  const ReducedRing& rx_;
  const ReducedRing& ry_;
  int mx_, my_;
  double a2_, p_, mu_;
  Eigen::VectorXd w_;
  Eigen::MatrixXd hD_;
};

// Spectral antiderivative of a mean-free periodic sample on [0, 2 pi).
std::vector<double> periodic_antiderivative(const std::vector<double>& f) {
  const int n = static_cast<int>(f.size());
  std::vector<cd> c(f.begin(), f.end());
  c = fft::coefficients(c, {n});
  for (int j = 0; j < n; ++j) {
    const int k = wavenumber(j, n);
    c[j] = (k == 0 || 2 * j == n) ? cd(0.0) : c[j] / cd(0.0, k);
  }
  fft::inverse(c.data(), {n});
  std::vector<double> r(n);
  for (int j = 0; j < n; ++j) r[j] = c[j].real();
  return r;
}

}  // namespace

TorusResult minimize_rayleigh_torus(const TorusProblem& tp) {
  require(std::isfinite(tp.a_raw) && std::isfinite(tp.p) && std::isfinite(tp.mu),
          Status::InvalidArgument, "inputs must be finite");
  const FluxParams fp = FluxParams::make(tp.a_raw, tp.p);
  require(fp.regime == Regime::Subquadratic, Status::OutOfRange,
          "torus inequality needs 1 < p < 2");
  require(tp.mu > 0.0 && tp.mu <= 1.0 / (2.0 - tp.p) * (1.0 + 1e-14),
          Status::OutOfRange, "torus inequality needs 0 < mu <= 1/(2-p)");
  const int nx = tp.opts.nx, ny = tp.opts.ny;
  require(nx >= kMinResolution && ny >= kMinResolution && nx % 2 == 0 &&
              ny % 2 == 0,
          Status::InvalidArgument, "torus resolution must be even and >= 16");
  const double a = fp.a, p = fp.p, mu = tp.mu;
  const TorusObjective obj(nx, ny, a, p, mu);
  const int mx = obj.mx(), my = obj.my();

  SmoothObjective so;
  so.value = [&](const Eigen::VectorXd& x) { return obj.value(x); };
  so.gradient = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    obj.derivatives(x, &g, nullptr);
  };
  so.hessian = [&](const Eigen::VectorXd& x, Eigen::MatrixXd& h) {
    obj.derivatives(x, nullptr, &h);
  };
  so.feasible = [&](const Eigen::VectorXd& x) { return obj.feasible(x); };

  TorusResult res;
  bool have = false;
  Eigen::VectorXd best;
  int iters = 0, restarts = 0;
  std::string diag;
  for (int s = 0; s < 3; ++s) {
    Eigen::VectorXd x0(obj.size());
    for (int i = 0; i < mx; ++i)
      for (int j = 0; j < my; ++j) {
        const double cx = std::cos(2.0 * kPi * i / nx), cy = std::cos(2.0 * kPi * j / ny);
        x0[i * my + j] = 1.0 + (s >= 1 ? 0.3 * cy : 0.0) + (s == 2 ? 0.3 * cx : 0.0);
      }
    if (s > 0) ++restarts;
    const MinimizeResult mr = minimize_smooth(so, x0, tp.opts.min);
    iters += mr.iterations;
    if (!mr.converged) {
      diag += " start " + std::to_string(s) + " failed (|g| = " +
              std::to_string(mr.grad_norm) + ")";
      continue;
    }
    const double q = obj.reduced_quotient(mr.x);
    if (!have || q < res.reduced_value) {
      have = true;
      res.reduced_value = q;
      best = mr.x;
      res.opt.grad_norm = mr.grad_norm;
    }
  }
  if (!have) fail(Status::NotConverged, "torus optimizer: all starts failed:" + diag);

  // Full-grid profile, unit L2.
  std::vector<double> U(static_cast<std::size_t>(nx) * ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      U[static_cast<std::size_t>(i) * ny + j] =
          best[std::min(i, nx - i) * my + std::min(j, ny - j)];
  double m2 = 0.0, mean = 0.0;
  for (double v : U) {
    m2 += v * v / U.size();
    mean += v / U.size();
  }
  for (double& v : U) v /= std::sqrt(m2);
  mean /= std::sqrt(m2);

  double dev = 0.0, xvar = 0.0;
  for (double v : U) dev = std::max(dev, std::abs(v - mean));
  for (int j = 0; j < ny; ++j) {
    double lo = INFINITY, hi = -INFINITY;
    for (int i = 0; i < nx; ++i) {
      lo = std::min(lo, U[static_cast<std::size_t>(i) * ny + j]);
      hi = std::max(hi, U[static_cast<std::size_t>(i) * ny + j]);
    }
    xvar = std::max(xvar, hi - lo);
  }
  res.opt.sup_deviation = dev / mean;
  res.x_variation = xvar / mean;
  res.shape = res.opt.sup_deviation < 1e-6 ? TorusShape::Constant
              : res.x_variation < 1e-6   ? TorusShape::XIndependent
                                         : TorusShape::TwoDimensional;

  // Phase per x-line: phi_y = a + c / u^2 with c = -a / mean_y(u^-2).
  res.field.resize(U.size());
  for (int i = 0; i < nx; ++i) {
    std::vector<double> inv2(ny), dphi(ny);
    double s = 0.0;
    for (int j = 0; j < ny; ++j) {
      const double v = U[static_cast<std::size_t>(i) * ny + j];
      inv2[j] = 1.0 / (v * v);
      s += inv2[j] / ny;
    }
    const double c = -a / s;
    for (int j = 0; j < ny; ++j) dphi[j] = a + c * inv2[j];
    const std::vector<double> phi = periodic_antiderivative(dphi);
    for (int j = 0; j < ny; ++j)
      res.field[static_cast<std::size_t>(i) * ny + j] =
          U[static_cast<std::size_t>(i) * ny + j] * std::exp(cd(0.0, phi[j]));
  }
  const GridPtr grid = build_grid({Domain::TorusT2, nx, ny});
  const DiscreteField psi = DiscreteField::complex_field(grid, res.field);
  const double lp = lp_norm(psi, p), l2 = lp_norm(psi, 2.0);
  res.field_value = (magnetic_energy(psi, a) + mu * lp * lp) / (l2 * l2);

  res.opt.value = res.field_value;
  res.opt.profile = U;
  res.opt.constant_value = a * a + mu;
  res.opt.gap_to_constant = res.opt.constant_value - res.opt.value;
  res.opt.symmetric = res.shape == TorusShape::Constant;
  res.opt.iterations = iters;
  res.opt.restarts = restarts;
  res.opt.converged = true;
  res.lower_bound = interpolation_lower_bound(BoundDomain::TorusT2, a, p, mu);

  RingSolverOptions ro;
  ro.n = ny;
  ro.min = tp.opts.min;
  res.ring_value = optimal_constant_ring({fp, mu, ro}).value;
  res.ring_difference = res.opt.value - res.ring_value;
  return res;
}

}  // namespace abf
