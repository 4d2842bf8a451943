#include "abflux/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "abflux/common.hpp"

namespace abf {

namespace {

bool ok_point(const SmoothObjective& obj, const Eigen::VectorXd& x) {
  if (!x.allFinite()) return false;
  return !obj.feasible || obj.feasible(x);
}

}  // namespace

MinimizeResult minimize_smooth(const SmoothObjective& obj,
                               const Eigen::VectorXd& x0,
                               const MinimizeOptions& opts) {
  require(ok_point(obj, x0), Status::InvalidArgument,
          "starting point is not feasible");
  MinimizeResult r;
  Eigen::VectorXd x = x0, g(x0.size()), gn(x0.size());
  double f = obj.value(x);
  obj.gradient(x, g);
  auto scale = [&](double fv) { return std::max(std::abs(fv), 1e-300); };

  // Gradient phase.
  double step = 1e-3 / std::max(g.norm(), 1e-300);
  std::deque<double> recent{f};
  for (int i = 0; i < opts.max_gradient_steps; ++i) {
    if (g.norm() <= opts.switch_tol * scale(f)) break;
    const double fref = *std::max_element(recent.begin(), recent.end());
    double t = step;
    Eigen::VectorXd xn;
    double fn = INFINITY;
    int halvings = 0;
    for (; halvings < 60; ++halvings) {
      xn = x - t * g;
      if (ok_point(obj, xn)) {
        fn = obj.value(xn);
        if (fn <= fref - 1e-4 * t * g.squaredNorm()) break;
      }
      t *= 0.5;
    }
    if (halvings == 60) break;
    obj.gradient(xn, gn);
    const Eigen::VectorXd s = xn - x, y = gn - g;
    const double sy = s.dot(y);
    step = sy > 0 ? s.squaredNorm() / sy : 2.0 * t;
    x = xn;
    f = fn;
    g = gn;
    recent.push_back(f);
    if (recent.size() > 10) recent.pop_front();
    ++r.iterations;
  }

  // Newton phase.
  Eigen::MatrixXd H(x.size(), x.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  for (int j = 0; j < opts.max_newton_steps; ++j) {
    obj.hessian(x, H);
    es.compute(0.5 * (H + H.transpose()));
    const Eigen::VectorXd& lam = es.eigenvalues();
    const double lmax = lam.cwiseAbs().maxCoeff();
    if (g.norm() <= opts.grad_tol * scale(f)) {
      if (lam[0] < -1e-8 * lmax && r.saddle_escapes < 6) {
        Eigen::VectorXd v = es.eigenvectors().col(0);
        double t = 0.05 * x.norm() / std::max(v.norm(), 1e-300);
        Eigen::VectorXd xn = x + t * v;
        while (!ok_point(obj, xn) && t > 1e-12) {
          t *= 0.5;
          xn = x + t * v;
        }
        x = xn;
        f = obj.value(x);
        obj.gradient(x, g);
        ++r.saddle_escapes;
        continue;
      }
      r.converged = true;
      break;
    }
    Eigen::VectorXd inv = lam.cwiseAbs().cwiseMax(1e-12 * lmax).cwiseInverse();
    const Eigen::VectorXd d =
        -es.eigenvectors() * (inv.asDiagonal() * (es.eigenvectors().transpose() * g));
    const double slope = g.dot(d);
    Eigen::VectorXd xn;
    double fn = f;
    bool accepted = false;
    if (std::abs(slope) > 1e-11 * scale(f)) {
      double t = 1.0;
      for (int h = 0; h < 50; ++h) {
        xn = x + t * d;
        if (ok_point(obj, xn)) {
          fn = obj.value(xn);
          if (fn <= f + 1e-4 * t * slope) {
            accepted = true;
            break;
          }
        }
        t *= 0.5;
      }
    }
    if (accepted) {
      obj.gradient(xn, gn);
    } else {
      // Decrease below the resolution of f: take the full step if |g| drops.
      xn = x + d;
      if (!ok_point(obj, xn)) break;
      obj.gradient(xn, gn);
      if (gn.norm() >= g.norm()) break;
      fn = obj.value(xn);
    }
    x = xn;
    f = fn;
    g = gn;
    ++r.iterations;
  }
  r.x = x;
  r.f = f;
  r.grad_norm = g.norm();
  if (!r.converged) r.converged = r.grad_norm <= opts.grad_tol * scale(f);
  return r;
}

}  // namespace abf
