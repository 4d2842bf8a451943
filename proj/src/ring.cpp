#include "abflux/ring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "abflux/fft.hpp"
#include "abflux/numerics.hpp"

namespace abf {

const ReducedRing& reduced_ring(int n) {
  static std::mutex mu;
  static std::map<int, ReducedRing> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  ReducedRing r;
  r.n = n;
  r.m = n / 2 + 1;
  r.w = Eigen::VectorXd::Constant(r.m, 2.0 / n);
  r.w[0] = r.w[r.m - 1] = 1.0 / n;
  // Circulant kernel c(d) = (1/n^2) sum_k k^2 cos(k * 2 pi d / n).
  std::vector<double> c(n, 0.0);
  for (int d = 0; d < n; ++d) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      const double k = wavenumber(j, n);
      s += k * k * std::cos(2.0 * kPi * k * d / n);
    }
    c[d] = s / (static_cast<double>(n) * n);
  }
  auto orbit = [&](int a) {
    std::vector<int> o{a};
    if (a != 0 && a != n / 2) o.push_back(n - a);
    return o;
  };
  r.K = Eigen::MatrixXd::Zero(r.m, r.m);
  for (int a = 0; a < r.m; ++a)
    for (int b = 0; b < r.m; ++b) {
      double s = 0.0;
      for (int j : orbit(a))
        for (int l : orbit(b)) s += c[((j - l) % n + n) % n];
      r.K(a, b) = s;
    }
  return cache.emplace(n, std::move(r)).first->second;
}

namespace {

// F = N / B + (B - 1)^2 with N = D + cI I + cM M2 + cP P and B = M2 (p < 2)
// or P (p > 2); P = ||u||_p^2.
class RingObjective {
 public:
  RingObjective(const ReducedRing& rr, const FluxParams& fp, double param,
                bool drop_inverse, int pinned)
      : rr_(rr), p_(fp.p), pinned_(pinned) {
    cI_ = drop_inverse ? 0.0 : fp.a * fp.a;
    sub_ = fp.regime == Regime::Subquadratic;
    cM_ = sub_ ? 0.0 : param;
    cP_ = sub_ ? param : 0.0;
  }

  int free_size() const { return pinned_ >= 0 ? rr_.m - 1 : rr_.m; }

  Eigen::VectorXd expand(const Eigen::VectorXd& y) const {
    if (pinned_ < 0) return y;
    Eigen::VectorXd x(rr_.m);
    for (int i = 0, j = 0; i < rr_.m; ++i) x[i] = i == pinned_ ? 0.0 : y[j++];
    return x;
  }

  Eigen::VectorXd contract(const Eigen::VectorXd& x) const {
    if (pinned_ < 0) return x;
    Eigen::VectorXd y(rr_.m - 1);
    for (int i = 0, j = 0; i < rr_.m; ++i)
      if (i != pinned_) y[j++] = x[i];
    return y;
  }

  bool feasible(const Eigen::VectorXd& y) const {
    const Eigen::VectorXd x = expand(y);
    const double mean = rr_.w.dot(x.cwiseAbs());
    for (int i = 0; i < rr_.m; ++i) {
      if (i == pinned_) continue;
      if (!(x[i] > kVanishFactor * mean)) return false;
    }
    return true;
  }

  struct Parts {
    double D, I, S2, M2, Pp, P, N, B, Q;
  };

  Parts parts(const Eigen::VectorXd& x) const {
    Parts t{};
    t.D = x.dot(rr_.K * x);
    t.M2 = rr_.w.dot(x.cwiseProduct(x));
    t.Pp = 0.0;
    t.S2 = 0.0;
    for (int i = 0; i < rr_.m; ++i) {
      t.Pp += rr_.w[i] * std::pow(x[i], p_);
      if (cI_ != 0.0) t.S2 += rr_.w[i] / (x[i] * x[i]);
    }
    t.I = cI_ != 0.0 ? 1.0 / t.S2 : 0.0;
    t.P = std::pow(t.Pp, 2.0 / p_);
    t.N = t.D + cI_ * t.I + cM_ * t.M2 + cP_ * t.P;
    t.B = sub_ ? t.M2 : t.P;
    t.Q = t.N / t.B;
    return t;
  }

  double value(const Eigen::VectorXd& y) const {
    const Parts t = parts(expand(y));
    return t.Q + (t.B - 1.0) * (t.B - 1.0);
  }

  void derivatives(const Eigen::VectorXd& y, Eigen::VectorXd* grad,
                   Eigen::MatrixXd* hess) const {
    const Eigen::VectorXd x = expand(y);
    const int m = rr_.m;
    const Parts t = parts(x);
    const Eigen::VectorXd& w = rr_.w;
    Eigen::VectorXd gI = Eigen::VectorXd::Zero(m), gP(m), gM(m), u3(m);
    for (int i = 0; i < m; ++i) {
      gP[i] = 2.0 * std::pow(t.Pp, 2.0 / p_ - 1.0) * w[i] *
              (i == pinned_ ? 0.0 : std::pow(x[i], p_ - 1.0));
      gM[i] = 2.0 * w[i] * x[i];
      if (cI_ != 0.0) {
        u3[i] = w[i] / (x[i] * x[i] * x[i]);
        gI[i] = 2.0 * u3[i] / (t.S2 * t.S2);
      }
    }
    const Eigen::VectorXd gD = 2.0 * (rr_.K * x);
    const Eigen::VectorXd gN = gD + cI_ * gI + cM_ * gM + cP_ * gP;
    const Eigen::VectorXd& gB = sub_ ? gM : gP;
    const Eigen::VectorXd gQ = (gN - t.Q * gB) / t.B;
    if (grad) *grad = contract(gQ + 2.0 * (t.B - 1.0) * gB);
    if (!hess) return;
    Eigen::VectorXd wu(m);
    for (int i = 0; i < m; ++i)
      wu[i] = i == pinned_ ? 0.0 : w[i] * std::pow(x[i], p_ - 1.0);
    Eigen::MatrixXd hP = 2.0 * (2.0 - p_) * std::pow(t.Pp, 2.0 / p_ - 2.0) *
                         (wu * wu.transpose());
    for (int i = 0; i < m; ++i)
      if (i != pinned_)
        hP(i, i) += 2.0 * std::pow(t.Pp, 2.0 / p_ - 1.0) * w[i] * (p_ - 1.0) *
                    std::pow(x[i], p_ - 2.0);
    Eigen::MatrixXd hM = (2.0 * w).asDiagonal();
    Eigen::MatrixXd hN = 2.0 * rr_.K + cM_ * hM + cP_ * hP;
    if (cI_ != 0.0) {
      Eigen::MatrixXd hI = (8.0 / (t.S2 * t.S2 * t.S2)) * (u3 * u3.transpose());
      for (int i = 0; i < m; ++i)
        hI(i, i) -= 6.0 * w[i] / std::pow(x[i], 4) / (t.S2 * t.S2);
      hN += cI_ * hI;
    }
    const Eigen::MatrixXd& hB = sub_ ? hM : hP;
    Eigen::MatrixXd hQ = (hN - t.Q * hB - gQ * gB.transpose() -
                          gB * gQ.transpose()) /
                         t.B;
    Eigen::MatrixXd hF = hQ + 2.0 * gB * gB.transpose() + 2.0 * (t.B - 1.0) * hB;
    if (pinned_ < 0) {
      *hess = hF;
      return;
    }
    hess->resize(m - 1, m - 1);
    for (int i = 0, a = 0; i < m; ++i) {
      if (i == pinned_) continue;
      for (int j = 0, b = 0; j < m; ++j) {
        if (j == pinned_) continue;
        (*hess)(a, b++) = hF(i, j);
      }
      ++a;
    }
  }

 private:
  const ReducedRing& rr_;
  double p_;
  int pinned_;
  double cI_ = 0, cM_ = 0, cP_ = 0;
  bool sub_ = true;
};

// The same F in the variable u = v^2, inverse term dropped. Profiles may
// vanish on a set (dead cores of the sublinear p < 2 equation) while F stays
// smooth in v. With a pinned node the profile holds a zero, so dropping the
// inverse term is exact there.
class SquaredRingObjective {
 public:
  SquaredRingObjective(const ReducedRing& rr, const FluxParams& fp, double param, int pinned)
      : rr_(rr), p_(fp.p), pinned_(pinned) {
    sub_ = fp.regime == Regime::Subquadratic;
    cM_ = sub_ ? 0.0 : param;
    cP_ = sub_ ? param : 0.0;
  }

  int free_size() const { return pinned_ >= 0 ? rr_.m - 1 : rr_.m; }

  Eigen::VectorXd expand(const Eigen::VectorXd& y) const {
    Eigen::VectorXd v(rr_.m);
    for (int i = 0, j = 0; i < rr_.m; ++i) v[i] = i == pinned_ ? 0.0 : y[j++];
    return v;
  }

  Eigen::VectorXd contract(const Eigen::VectorXd& v) const {
    Eigen::VectorXd y(free_size());
    for (int i = 0, j = 0; i < rr_.m; ++i)
      if (i != pinned_) y[j++] = v[i];
    return y;
  }

  double value(const Eigen::VectorXd& y) const {
    const Eigen::VectorXd u = expand(y).array().square();
    double Pp = 0.0;
    for (int i = 0; i < rr_.m; ++i) Pp += rr_.w[i] * std::pow(u[i], p_);
    const double D = u.dot(rr_.K * u), M2 = rr_.w.dot(u.cwiseProduct(u));
    const double P = std::pow(Pp, 2.0 / p_);
    const double B = sub_ ? M2 : P;
    return (D + cM_ * M2 + cP_ * P) / B + (B - 1.0) * (B - 1.0);
  }

  void derivatives(const Eigen::VectorXd& y, Eigen::VectorXd* grad, Eigen::MatrixXd* hess) const {
    const Eigen::VectorXd v = expand(y);
    const Eigen::VectorXd u = v.array().square();
    const Eigen::VectorXd& w = rr_.w;
    const int m = rr_.m;
    double Pp = 0.0;
    Eigen::VectorXd up1(m);  // u^{p-1}, finite at 0 since p > 1
    for (int i = 0; i < m; ++i) {
      Pp += w[i] * std::pow(u[i], p_);
      up1[i] = std::pow(u[i], p_ - 1.0);
    }
    const double D = u.dot(rr_.K * u), M2 = w.dot(u.cwiseProduct(u));
    const double P = std::pow(Pp, 2.0 / p_);
    const double B = sub_ ? M2 : P;
    const double Q = (D + cM_ * M2 + cP_ * P) / B;
    const Eigen::VectorXd wu = w.cwiseProduct(up1);
    const Eigen::VectorXd gP = 2.0 * std::pow(Pp, 2.0 / p_ - 1.0) * wu;
    const Eigen::VectorXd gM = 2.0 * w.cwiseProduct(u);
    const Eigen::VectorXd gN = 2.0 * (rr_.K * u) + cM_ * gM + cP_ * gP;
    const Eigen::VectorXd& gB = sub_ ? gM : gP;
    const Eigen::VectorXd gQ = (gN - Q * gB) / B;
    const Eigen::VectorXd gF = gQ + 2.0 * (B - 1.0) * gB;
    if (grad) *grad = contract(2.0 * v.cwiseProduct(gF));
    if (!hess) return;
    // Hessian in u without the diagonal u^{p-2} part of P; that part is added
    // after the chain rule, where it becomes u^{p-1}.
    const Eigen::MatrixXd hPr =
        2.0 * (2.0 - p_) * std::pow(Pp, 2.0 / p_ - 2.0) * (wu * wu.transpose());
    const Eigen::MatrixXd hM = (2.0 * w).asDiagonal();
    const Eigen::MatrixXd hN = 2.0 * rr_.K + cM_ * hM + cP_ * hPr;
    const Eigen::MatrixXd hB = sub_ ? hM : hPr;
    const Eigen::MatrixXd hF = (hN - Q * hB - gQ * gB.transpose() - gB * gQ.transpose()) / B +
                               2.0 * gB * gB.transpose() + 2.0 * (B - 1.0) * hB;
    const double coef = sub_ ? cP_ / B : (-Q / B + 2.0 * (B - 1.0));
    const Eigen::VectorXd t = 2.0 * v;
    Eigen::MatrixXd H = t.asDiagonal() * hF * t.asDiagonal();
    for (int i = 0; i < m; ++i)
      H(i, i) += 2.0 * gF[i] +
                 coef * 8.0 * std::pow(Pp, 2.0 / p_ - 1.0) * w[i] * (p_ - 1.0) * up1[i];
    hess->resize(free_size(), free_size());
    for (int i = 0, a = 0; i < m; ++i) {
      if (i == pinned_) continue;
      for (int j = 0, b = 0; j < m; ++j) {
        if (j == pinned_) continue;
        (*hess)(a, b++) = H(i, j);
      }
      ++a;
    }
  }

 private:
  const ReducedRing& rr_;
  double p_;
  int pinned_;
  double cM_ = 0, cP_ = 0;
  bool sub_ = true;
};

void check_param(const FluxParams& fp, double param) {
  require(std::isfinite(param), Status::InvalidArgument,
          "parameter must be finite");
  if (fp.regime == Regime::Subquadratic)
    require(param > 0.0, Status::OutOfRange, "mu must be positive");
  else
    require(param > -fp.a * fp.a, Status::OutOfRange,
            "lambda must exceed -a^2");
}

std::vector<double> expand_full(const Eigen::VectorXd& x, int n) {
  std::vector<double> u(n);
  for (int j = 0; j < n; ++j) u[j] = x[std::min(j, n - j)];
  return u;
}

struct Attempt {
  MinimizeResult mr;
  bool ok = false;
};

Attempt run_start(const RingObjective& obj, const Eigen::VectorXd& x0,
                  const MinimizeOptions& mo) {
  SmoothObjective so;
  so.value = [&](const Eigen::VectorXd& y) { return obj.value(y); };
  so.gradient = [&](const Eigen::VectorXd& y, Eigen::VectorXd& g) {
    obj.derivatives(y, &g, nullptr);
  };
  so.hessian = [&](const Eigen::VectorXd& y, Eigen::MatrixXd& h) {
    Eigen::VectorXd g;
    obj.derivatives(y, &g, &h);
  };
  so.feasible = [&](const Eigen::VectorXd& y) { return obj.feasible(y); };
  Attempt a;
  a.mr = minimize_smooth(so, x0, mo);
  a.ok = a.mr.converged;
  return a;
}

Attempt run_squared(const SquaredRingObjective& obj, const Eigen::VectorXd& y0,
                    const MinimizeOptions& mo) {
  SmoothObjective so;
  so.value = [&](const Eigen::VectorXd& y) { return obj.value(y); };
  so.gradient = [&](const Eigen::VectorXd& y, Eigen::VectorXd& g) {
    obj.derivatives(y, &g, nullptr);
  };
  so.hessian = [&](const Eigen::VectorXd& y, Eigen::MatrixXd& h) {
    obj.derivatives(y, nullptr, &h);
  };
  so.feasible = [](const Eigen::VectorXd&) { return true; };
  Attempt a;
  a.mr = minimize_smooth(so, y0, mo);
  a.ok = a.mr.converged;
  return a;
}

}  // namespace

double ring_constant_value(const FluxParams& fp, double param) {
  return fp.a * fp.a + param;
}

double ring_quotient(const FluxParams& fp, double param,
                     const std::vector<double>& u, bool drop_inverse) {
  check_param(fp, param);
  const int n = static_cast<int>(u.size());
  require(n >= kMinResolution, Status::InvalidArgument,
          "profile needs at least 16 samples");
  std::vector<cd> c(u.begin(), u.end());
  c = fft::coefficients(c, {n});
  double D = 0.0, M2 = 0.0, Pp = 0.0, S2 = 0.0;
  bool vanish = false;
  double mean = 0.0, mn = INFINITY;
  for (int j = 0; j < n; ++j) {
    const double k = wavenumber(j, n);
    D += k * k * std::norm(c[j]);
    const double x = std::abs(u[j]);
    M2 += x * x / n;
    Pp += std::pow(x, fp.p) / n;
    mean += x / n;
    mn = std::min(mn, x);
  }
  vanish = mn < kVanishFactor * mean || mn == 0.0;
  double I = 0.0;
  if (!drop_inverse && !vanish) {
    for (int j = 0; j < n; ++j) S2 += 1.0 / (u[j] * u[j] * n);
    I = 1.0 / S2;
  }
  const double a2 = fp.a * fp.a, P = std::pow(Pp, 2.0 / fp.p);
  if (fp.regime == Regime::Subquadratic) return (D + a2 * I + param * P) / M2;
  return (D + a2 * I + param * M2) / P;
}

OptimizationResult optimal_constant_ring(const RingProblem& rp) {
  const FluxParams& fp = rp.fp;
  check_param(fp, rp.param);
  const int n = rp.opts.n;
  require(n >= kMinResolution && n % 2 == 0, Status::InvalidArgument,
          "ring resolution must be even and >= 16");
  const ReducedRing& rr = reduced_ring(n);

  OptimizationResult best;
  best.constant_value = ring_constant_value(fp, rp.param);
  bool have = false;
  int total_iters = 0, restarts = 0;
  std::string diag;

  auto consider_nodes = [&](const Attempt& at, const auto& nodes, bool vanishing) {
    total_iters += at.mr.iterations;
    if (!at.ok) {
      diag += " start failed (|g| = " + std::to_string(at.mr.grad_norm) + ")";
      return;
    }
    const Eigen::VectorXd x = nodes(at.mr.x);
    std::vector<double> u = expand_full(x, n);
    double norm = 0.0;
    for (double v : u)
      norm += (fp.regime == Regime::Subquadratic ? v * v : std::pow(v, fp.p)) / n;
    norm = fp.regime == Regime::Subquadratic ? std::sqrt(norm)
                                             : std::pow(norm, 1.0 / fp.p);
    for (double& v : u) v /= norm;
    const double q = ring_quotient(fp, rp.param, u, vanishing);
    require(q >= 0.0, Status::Internal, "negative ring quotient");
    if (!have || q < best.value) {
      have = true;
      best.value = q;
      best.profile = u;
      best.vanishing = vanishing;
      best.grad_norm = at.mr.grad_norm;
      best.converged = true;
    }
  };
  auto consider = [&](const RingObjective& obj, const Attempt& at, bool vanishing) {
    consider_nodes(at, [&](const Eigen::VectorXd& y) { return obj.expand(y); }, vanishing);
  };

  const RingObjective obj(rr, fp, rp.param, false, -1);
  for (int s = 0; s < 2; ++s) {
    Eigen::VectorXd x0(rr.m);
    for (int i = 0; i < rr.m; ++i)
      x0[i] = 1.0 + (s == 1 ? 0.3 * std::cos(2.0 * kPi * i / n) : 0.0);
    if (s > 0) ++restarts;
    consider(obj, run_start(obj, x0, rp.opts.min), false);
  }
  if (have && fp.a > 0.0) {
    const auto mm = std::minmax_element(best.profile.begin(), best.profile.end());
    double mean = 0.0;
    for (double v : best.profile) mean += v / n;
    if (*mm.first <= 10.0 * kVanishFactor * mean) {
      const int idx = static_cast<int>(mm.first - best.profile.begin());
      const int pin = std::min(idx, n - idx);
      const RingObjective pinned(rr, fp, rp.param, true, pin);
      Eigen::VectorXd x0(rr.m);
      for (int i = 0; i < rr.m; ++i)
        x0[i] = std::max(best.profile[i], 1e-3);
      ++restarts;
      consider(pinned, run_start(pinned, pinned.contract(x0), rp.opts.min),
               true);
    }
  }
  if (!have) {
    // Dead-core regime: optimal profiles vanish on an arc, which the positive
    // parametrization cannot reach. With a > 0 the zero is pinned opposite the peak.
    const int pin = fp.a > 0.0 ? rr.m - 1 : -1;
    const SquaredRingObjective sq(rr, fp, rp.param, pin);
    Eigen::VectorXd v0(rr.m);
    for (int i = 0; i < rr.m; ++i) v0[i] = std::sqrt(1.0 + 0.9 * std::cos(2.0 * kPi * i / n));
    ++restarts;
    consider_nodes(run_squared(sq, sq.contract(v0), rp.opts.min),
                   [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
                     return sq.expand(y).array().square();
                   },
                   pin >= 0);
  }
  if (!have)
    fail(Status::NotConverged, "ring optimizer: all starts failed:" + diag);

  double mean = 0.0, dev = 0.0;
  for (double v : best.profile) mean += v / n;
  for (double v : best.profile) dev = std::max(dev, std::abs(v - mean));
  best.sup_deviation = dev / mean;
  best.symmetric = best.sup_deviation < 1e-6;
  best.gap_to_constant = best.constant_value - best.value;
  best.iterations = total_iters;
  best.restarts = restarts;
  return best;
}

double second_variation_coefficient(double a, double p, double mu) {
  require(std::isfinite(a) && std::isfinite(p) && std::isfinite(mu),
          Status::InvalidArgument, "inputs must be finite");
  require(p > 1.0 && p < 2.0, Status::OutOfRange,
          "second variation is defined for 1 < p < 2");
  require(mu > 0.0, Status::OutOfRange, "mu must be positive");
  const double an = normalize_flux(a);
  return 0.5 * (1.0 - 4.0 * an * an - mu * (2.0 - p));
}

double second_variation_oracle(double a, double p, double mu, double eps) {
  const FluxParams fp = FluxParams::make(a, p);
  require(fp.regime == Regime::Subquadratic, Status::OutOfRange,
          "second variation is defined for 1 < p < 2");
  require(mu > 0.0, Status::OutOfRange, "mu must be positive");
  const int n = 64;
  auto q = [&](double e) {
    std::vector<double> u(n);
    for (int j = 0; j < n; ++j) u[j] = 1.0 + e * std::cos(2.0 * kPi * j / n);
    return ring_quotient(fp, mu, u);
  };
  const double q0 = q(0.0);
  const double r1 = (q(eps) - q0) / (eps * eps);
  const double r2 = (q(0.5 * eps) - q0) / (0.25 * eps * eps);
  return (4.0 * r2 - r1) / 3.0;
}

double ring_parameter_at(const FluxParams& fp, double fraction) {
  const double t = ring_rigidity_threshold(fp);
  if (fp.regime == Regime::Subquadratic) return fraction * t;
  const double a2 = fp.a * fp.a;
  return -a2 + fraction * (t + a2);
}

BifurcationResult locate_bifurcation(double a_raw, double p,
                                     const RingSolverOptions& opts) {
  const FluxParams fp = FluxParams::make(a_raw, p);
  BifurcationResult br;
  br.closed_form = ring_rigidity_threshold(fp);
  const double shifted = fp.regime == Regime::Subquadratic
                             ? br.closed_form
                             : br.closed_form + fp.a * fp.a;
  require(shifted > 0.0, Status::OutOfRange,
          "no symmetric range at this flux (threshold at domain boundary)");
  auto symmetric_at = [&](double param) {
    RingProblem rp{fp, param, opts};
    ++br.solves;
    return optimal_constant_ring(rp).symmetric;
  };
  double lo = ring_parameter_at(fp, 0.5), hi = ring_parameter_at(fp, 2.0);
  if (!symmetric_at(lo) || symmetric_at(hi))
    fail(Status::NotConverged,
         "bifurcation bracket [0.5, 2] x threshold not established");
  const double floor_width = 1e-7 * shifted;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double width = hi - lo;
    if (width <= std::max(2.5e-4 * std::abs(mid), floor_width)) break;
    if (symmetric_at(mid))
      lo = mid;
    else
      hi = mid;
  }
  br.lower = lo;
  br.upper = hi;
  br.estimate = 0.5 * (lo + hi);
  br.rel_error = std::abs(br.estimate - br.closed_form) /
                 std::max(std::abs(br.closed_form), 1e-300);
  return br;
}

}  // namespace abf
