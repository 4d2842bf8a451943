#include "abflux/spectra.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "abflux/constants.hpp"
#include "abflux/fft.hpp"
#include "abflux/lanczos.hpp"

namespace abf {

namespace {

LanczosOptions lanczos_opts(int count) {
  LanczosOptions o;
  o.count = count;
  o.krylov_dim = std::max(40, 3 * count + 20);
  return o;
}

struct SectorMatrix {
  Eigen::MatrixXd S;
  std::vector<double> nodes, weights;
};

SectorMatrix sector_matrix(double half_flux, int n) {
  const double alpha = 2.0 * half_flux;
  const Quadrature q = gauss_jacobi(n, alpha);
  const Eigen::MatrixXd D = barycentric_diff_matrix(q.nodes);
  Eigen::VectorXd c(n), isw(n);
  for (int i = 0; i < n; ++i) {
    c[i] = q.weights[i] * (1.0 - q.nodes[i] * q.nodes[i]);
    isw[i] = 1.0 / std::sqrt(q.weights[i]);
  }
  Eigen::MatrixXd K = D.transpose() * c.asDiagonal() * D;
  SectorMatrix out;
  out.S = isw.asDiagonal() * K * isw.asDiagonal();
  out.S = 0.5 * (out.S + out.S.transpose());
  out.S.diagonal().array() += alpha * (1.0 + alpha);
  out.nodes = q.nodes;
  out.weights = q.weights;
  return out;
}

std::vector<double> solve_dense_lowest(const Eigen::MatrixXd& S, int count,
                                       std::vector<double>* residuals) {
  const int n = static_cast<int>(S.rows());
  if (lanczos_opts(count).krylov_dim * 2 >= n) {
    // The Krylov space would span most of the matrix; solve it directly.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    require(es.info() == Eigen::Success, Status::NotConverged,
            "dense sector eigensolver failed");
    std::vector<double> values(count);
    if (residuals) residuals->assign(count, 0.0);
    const double scale = std::max(1.0, std::abs(es.eigenvalues()[n - 1]));
    for (int i = 0; i < count; ++i) {
      values[i] = es.eigenvalues()[i];
      const Eigen::VectorXd v = es.eigenvectors().col(i);
      const double r = (S * v - values[i] * v).norm() / scale;
      require(r < 1e-10, Status::NotConverged, "dense sector residual too large");
      if (residuals) (*residuals)[i] = r;
    }
    return values;
  }
  Eigen::MatrixXd shifted = S;
  shifted.diagonal().array() += 1.0;  // S >= 0
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  require(llt.info() == Eigen::Success, Status::NotConverged,
          "shifted sector matrix is not positive definite");
  LinearMap<double> apply = [&](const Vec<double>& x, Vec<double>& y) {
    y = S * x;
  };
  LinearMap<double> solve = [&](const Vec<double>& x, Vec<double>& y) {
    y = llt.solve(x);
  };
  auto res = lanczos_lowest<double>(n, apply, solve, lanczos_opts(count));
  if (!res.converged) {
    double worst = 0.0;
    for (double r : res.residuals) worst = std::max(worst, r);
    fail(Status::NotConverged,
         "lanczos did not converge; worst residual " + std::to_string(worst));
  }
  if (residuals) *residuals = res.residuals;
  return res.values;
}

void check_count(int count, std::size_t size) {
  require(count >= 1 && static_cast<std::size_t>(count) * 4 <= size,
          Status::InvalidArgument, "count must lie in [1, grid size / 4]");
}

// Ring and torus: diagonal in Fourier space.
std::vector<double> fourier_symbol(const Grid& g, double a) {
  std::vector<double> sym(g.size());
  if (g.domain == Domain::RingS1) {
    const int n = g.shape[0];
    for (int j = 0; j < n; ++j) {
      const double k = wavenumber(j, n) - a;
      sym[j] = k * k;
    }
  } else {
    const int nx = g.shape[0], ny = g.shape[1];
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        const double kx = wavenumber(i, nx), ky = wavenumber(j, ny) - a;
        sym[i * ny + j] = kx * kx + ky * ky;
      }
  }
  return sym;
}

EigenPairs<cd> fourier_lowest(const Grid& g, double a, int count) {
  const auto sym = fourier_symbol(g, a);
  const int n = static_cast<int>(g.size());
  const double inv_n = 1.0 / n;
  auto multiply = [&](const Vec<cd>& x, Vec<cd>& y, bool invert) {
    y = x;
    fft::forward(y.data(), g.shape);
    for (int j = 0; j < n; ++j)
      y[j] *= (invert ? 1.0 / (sym[j] + 1.0) : sym[j]) * inv_n;
    fft::inverse(y.data(), g.shape);
  };
  LinearMap<cd> apply = [&](const Vec<cd>& x, Vec<cd>& y) {
    multiply(x, y, false);
  };
  LinearMap<cd> solve = [&](const Vec<cd>& x, Vec<cd>& y) {
    multiply(x, y, true);
  };
  return lanczos_lowest<cd>(n, apply, solve, lanczos_opts(count));
}

Eigen::MatrixXcd ring_dense(const Grid& g, double a,
                            const std::vector<double>& phi) {
  const int n = g.shape[0];
  const auto sym = fourier_symbol(g, a);
  Eigen::MatrixXcd H(n, n);
  std::vector<cd> col(n);
  for (int l = 0; l < n; ++l) {
    std::fill(col.begin(), col.end(), cd(0.0));
    col[l] = 1.0;
    fft::forward(col.data(), {n});
    for (int j = 0; j < n; ++j) col[j] *= sym[j] / n;
    fft::inverse(col.data(), {n});
    for (int j = 0; j < n; ++j) H(j, l) = col[j];
  }
  H = 0.5 * (H + H.adjoint()).eval();
  for (int j = 0; j < n; ++j) H(j, j) += phi[j];
  return H;
}

EigenPairs<cd> ring_schrodinger_lowest(const Grid& g, double a,
                                       const std::vector<double>& phi,
                                       int count) {
  const Eigen::MatrixXcd H = ring_dense(g, a, phi);
  const double sigma = *std::min_element(phi.begin(), phi.end()) - 1.0;
  Eigen::MatrixXcd shifted = H;
  shifted.diagonal().array() -= sigma;
  Eigen::LLT<Eigen::MatrixXcd> llt(shifted);
  require(llt.info() == Eigen::Success, Status::Internal,
          "ring operator shift is not positive definite");
  LinearMap<cd> apply = [&](const Vec<cd>& x, Vec<cd>& y) { y = H * x; };
  LinearMap<cd> solve = [&](const Vec<cd>& x, Vec<cd>& y) {
    y = llt.solve(x);
  };
  return lanczos_lowest<cd>(static_cast<int>(g.size()), apply, solve,
                            lanczos_opts(count));
}

void ensure_converged(const EigenPairs<cd>& r) {
  if (r.converged) return;
  double worst = 0.0;
  for (double x : r.residuals) worst = std::max(worst, x);
  fail(Status::NotConverged,
       "lanczos did not converge; worst residual " + std::to_string(worst));
}

}  // namespace

std::vector<double> ultraspherical_sector(double half_flux, int n, int count,
                                          std::vector<double>* residuals) {
  require(std::isfinite(half_flux) && half_flux >= 0.0,
          Status::InvalidArgument, "half flux must be >= 0");
  check_count(count, static_cast<std::size_t>(n));
  const SectorMatrix m = sector_matrix(half_flux, n);
  return solve_dense_lowest(m.S, count, residuals);
}

SpectrumResult eigen_solve(const OperatorSpec& op, int count) {
  require(op.grid != nullptr, Status::InvalidArgument, "operator needs a grid");
  require(std::isfinite(op.flux), Status::InvalidArgument,
          "flux must be finite");
  const Grid& g = *op.grid;
  SpectrumResult out;
  out.domain = g.domain;
  out.resolution = g.shape;
  check_count(count, g.size());

  switch (op.kind) {
    case OperatorKind::UltrasphericalSingular:
    case OperatorKind::Sphere2Magnetic: {
      require(g.domain == Domain::IntervalZ, Status::InvalidArgument,
              "sphere operators need an IntervalZ grid");
      const int n = g.shape[0];
      struct Entry {
        double value, err, res;
        ModeLabel label;
      };
      std::vector<Entry> all;
      const bool sphere = op.kind == OperatorKind::Sphere2Magnetic;
      const int kmax = sphere ? op.k_max : 0;
      require(kmax >= 0, Status::InvalidArgument, "k_max must be >= 0");
      for (int k = -kmax; k <= kmax; ++k) {
        const double A = sphere ? 0.5 * std::abs(k - op.flux) : op.flux;
        std::vector<double> res;
        const auto fine = ultraspherical_sector(A, n, count, &res);
        const int half = std::max(n / 2, 4 * count);
        const auto coarse =
            half < n ? ultraspherical_sector(A, half, count, nullptr) : fine;
        for (int l = 0; l < count; ++l)
          all.push_back({fine[l], std::abs(fine[l] - coarse[l]), res[l],
                         {sphere ? k : 0, l}});
      }
      std::stable_sort(all.begin(), all.end(),
                       [](const Entry& x, const Entry& y) {
                         if (x.value != y.value) return x.value < y.value;
                         if (x.label.k != y.label.k)
                           return x.label.k < y.label.k;
                         return x.label.l < y.label.l;
                       });
      for (int i = 0; i < count; ++i) {
        out.eigenvalues.push_back(all[i].value);
        out.est_error.push_back(all[i].err);
        out.residuals.push_back(all[i].res);
        out.labels.push_back(all[i].label);
      }
      return out;
    }
    case OperatorKind::RingMagnetic:
    case OperatorKind::TorusMagnetic: {
      const bool ring = op.kind == OperatorKind::RingMagnetic;
      require(g.domain == (ring ? Domain::RingS1 : Domain::TorusT2),
              Status::InvalidArgument, "grid does not match operator");
      const auto r = fourier_lowest(g, op.flux, count);
      ensure_converged(r);
      out.eigenvalues = r.values;
      out.residuals = r.residuals;
      // Band-limited eigenfunctions: the half grid reproduces the same modes.
      GridSpec hs;
      hs.domain = g.domain;
      hs.n0 = std::max(kMinResolution, g.shape[0] / 2);
      if (!ring) hs.n1 = std::max(kMinResolution, g.shape[1] / 2);
      const GridPtr hg = build_grid(hs);
      const int hc = std::min<int>(count, static_cast<int>(hg->size()) / 4);
      const auto rh = fourier_lowest(*hg, op.flux, hc);
      for (int i = 0; i < count; ++i)
        out.est_error.push_back(
            i < hc ? std::abs(r.values[i] - rh.values[i]) : 0.0);
      return out;
    }
    case OperatorKind::RingSchrodinger: {
      require(g.domain == Domain::RingS1, Status::InvalidArgument,
              "ring operator needs a RingS1 grid");
      require(op.potential.size() == g.size(), Status::InvalidArgument,
              "potential does not match grid");
      for (double x : op.potential)
        require(std::isfinite(x), Status::InvalidArgument,
                "potential must be finite");
      const auto r = ring_schrodinger_lowest(g, op.flux, op.potential, count);
      ensure_converged(r);
      out.eigenvalues = r.values;
      out.residuals = r.residuals;
      const int n = g.shape[0];
      if (n % 2 == 0 && n / 2 >= kMinResolution && count * 4 <= n / 2) {
        GridSpec hs;
        hs.domain = Domain::RingS1;
        hs.n0 = n / 2;
        const GridPtr hg = build_grid(hs);
        std::vector<double> phalf(n / 2);
        for (int j = 0; j < n / 2; ++j) phalf[j] = op.potential[2 * j];
        const auto rh = ring_schrodinger_lowest(*hg, op.flux, phalf, count);
        for (int i = 0; i < count; ++i)
          out.est_error.push_back(std::abs(r.values[i] - rh.values[i]));
      } else {
        out.est_error.assign(count, 0.0);
      }
      // Fix the global phase so the ground state has positive mean.
      Vec<cd> v = r.vectors[0];
      const cd s = v.sum();
      const cd ph = std::abs(s) > 0 ? std::conj(s) / std::abs(s) : cd(1.0);
      v *= ph * std::sqrt(static_cast<double>(n));  // unit L2 in dsigma
      out.ground_state.assign(v.data(), v.data() + n);
      return out;
    }
  }
  fail(Status::Internal, "unknown operator kind");
}

namespace {

double barycentric_eval(const std::vector<double>& x,
                        const std::vector<double>& f, double t) {
  const int n = static_cast<int>(x.size());
  std::vector<double> logw(n, 0.0);
  std::vector<int> sg(n, 1);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = x[j] - x[k];
      logw[j] -= std::log(std::abs(d));
      if (d < 0) sg[j] = -sg[j];
    }
  const double shift = *std::max_element(logw.begin(), logw.end());
  double num = 0.0, den = 0.0;
  for (int j = 0; j < n; ++j) {
    if (t == x[j]) return f[j];
    const double w = sg[j] * std::exp(logw[j] - shift) / (t - x[j]);
    num += w * f[j];
    den += w;
  }
  return num / den;
}

}  // namespace

PoincareRecord weighted_poincare_check(const DiscreteField& f,
                                       double half_flux) {
  require(std::isfinite(half_flux) && half_flux >= 0.0,
          Status::InvalidArgument, "half flux must be >= 0");
  const Grid& g = *f.grid;
  require(g.domain == Domain::IntervalZ, Status::InvalidArgument,
          "weighted Poincare check needs an IntervalZ grid");
  const double alpha = 2.0 * half_flux;
  require(std::abs(g.jacobi - alpha) <= 1e-14 * std::max(1.0, alpha),
          Status::InvalidArgument,
          "grid jacobi exponent must equal twice the half flux");
  const int n = g.shape[0];
  const auto& z = g.nodes[0];
  const Quadrature q = gauss_jacobi(n, alpha);  // same nodes, raw weights
  std::vector<double> gv(n);
  for (int i = 0; i < n; ++i) {
    require(std::abs(f.values[i].imag()) == 0.0, Status::InvalidArgument,
            "weighted Poincare check expects a real field");
    gv[i] = f.values[i].real() / std::pow(1.0 - z[i] * z[i], half_flux);
  }
  const Eigen::MatrixXd D = barycentric_diff_matrix(z);
  const Eigen::VectorXd gvec = Eigen::Map<const Eigen::VectorXd>(gv.data(), n);
  const Eigen::VectorXd dg = D * gvec;
  double lhs = 0.0, mass = 0.0, first = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = 1.0 - z[i] * z[i];
    lhs += q.weights[i] * (t * dg[i] * dg[i] + alpha * (1.0 + alpha) * gv[i] * gv[i]);
    mass += q.weights[i];
    first += q.weights[i] * gv[i];
  }
  PoincareRecord rec;
  rec.projection = first / mass;
  double dev = 0.0, norm2 = 0.0;
  rec.fbar.resize(n);
  for (int i = 0; i < n; ++i) {
    const double d = gv[i] - rec.projection;
    dev += q.weights[i] * d * d;
    norm2 += q.weights[i] * gv[i] * gv[i];
    rec.fbar[i] = rec.projection * std::pow(1.0 - z[i] * z[i], half_flux);
  }
  rec.lambda1 = ultraspherical_eigenvalue(1, half_flux);
  rec.lhs = lhs;
  rec.rhs = rec.lambda1 * dev;
  rec.est_error = 64.0 * n * 2.2e-16 * (std::abs(lhs) + std::abs(rec.rhs));
  if (dev <= 1e-24 * std::max(norm2, 1e-300) || dev == 0.0) {
    rec.degenerate = true;
    rec.ratio = NAN;
  } else {
    rec.ratio = lhs / dev;
  }
  if (half_flux == 0.0) {
    const double lo = barycentric_eval(z, gv, -1.0);
    const double hi = barycentric_eval(z, gv, 1.0);
    const double scale = std::sqrt(norm2 / mass);
    rec.endpoint_nonzero =
        std::max(std::abs(lo), std::abs(hi)) > 1e-10 * std::max(scale, 1e-300);
  }
  return rec;
}

}  // namespace abf
