#include "abflux/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "abflux/common.hpp"

namespace abf {

namespace {

template <class Scalar>
Vec<Scalar> random_vector(int n, std::mt19937_64& rng) {
  Vec<Scalar> v(n);
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    if constexpr (std::is_same_v<Scalar, double>) {
      v[i] = x;
    } else {
      const double y = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
      v[i] = Scalar(x, y);
    }
  }
  return v;
}

template <class Scalar>
void orthogonalize(Vec<Scalar>& w, const std::vector<Vec<Scalar>>& basis) {
  // Two passes of classical Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) w -= b * b.dot(w);
}

}  // namespace

template <class Scalar>
EigenPairs<Scalar> lanczos_lowest(int n, const LinearMap<Scalar>& apply_a,
                                  const LinearMap<Scalar>& solve_shifted,
                                  const LanczosOptions& opts) {
  require(n >= 1, Status::InvalidArgument, "empty operator");
  require(opts.count >= 1 && opts.count <= n, Status::InvalidArgument,
          "eigenpair count out of range");
  std::mt19937_64 rng(opts.seed);
  EigenPairs<Scalar> out;
  std::vector<Vec<Scalar>> locked;
  Vec<Scalar> start = random_vector<Scalar>(n, rng);
  int dim = std::min(n, std::max(opts.krylov_dim, 2 * opts.count + 10));
  int restarts = 0;
  double worst_residual = 0.0;

  while (static_cast<int>(locked.size()) < opts.count) {
    const int m = std::min(dim, n - static_cast<int>(locked.size()));
    std::vector<Vec<Scalar>> Q;
    std::vector<double> alpha, beta;
    Vec<Scalar> q = start;
    orthogonalize(q, locked);
    double nq = q.norm();
    if (nq < 1e-14) {
      q = random_vector<Scalar>(n, rng);
      orthogonalize(q, locked);
      nq = q.norm();
    }
    q /= nq;
    Vec<Scalar> w(n);
    for (int j = 0; j < m; ++j) {
      Q.push_back(q);
      solve_shifted(q, w);
      ++out.operator_applications;
      alpha.push_back(std::real(q.dot(w)));
      orthogonalize(w, locked);
      orthogonalize(w, Q);
      const double b = w.norm();
      if (j + 1 == m || b < 1e-13 * std::max(1.0, std::abs(alpha.back())))
        break;
      beta.push_back(b);
      q = w / b;
    }
    const int k = static_cast<int>(alpha.size());
    Eigen::VectorXd d(k), e(std::max(k - 1, 0));
    for (int i = 0; i < k; ++i) d[i] = alpha[i];
    for (int i = 0; i + 1 < k; ++i) e[i] = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    // Largest theta of the inverse is the lowest eigenvalue of A.
    const int top = k - 1;
    Vec<Scalar> v = Vec<Scalar>::Zero(n);
    for (int i = 0; i < k; ++i) v += Q[i] * Scalar(es.eigenvectors()(i, top));
    orthogonalize(v, locked);
    v.normalize();
    Vec<Scalar> av(n);
    apply_a(v, av);
    const double rayleigh = std::real(v.dot(av));
    const double res = (av - rayleigh * v).norm();
    const double tol = opts.tol * std::max(1.0, std::abs(rayleigh));
    if (res <= tol || restarts >= opts.max_restarts) {
      worst_residual =
          std::max(worst_residual, res / std::max(1.0, std::abs(rayleigh)));
      locked.push_back(v);
      out.values.push_back(rayleigh);
      out.vectors.push_back(v);
      out.residuals.push_back(res);
      start = random_vector<Scalar>(n, rng);
      restarts = 0;
    } else {
      start = v;
      ++restarts;
      dim = std::min(n, dim + dim / 2);
    }
  }
  out.converged = worst_residual <= opts.tol;
  // Sort ascending with vectors.
  std::vector<int> idx(out.values.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(),
            [&](int x, int y) { return out.values[x] < out.values[y]; });
  EigenPairs<Scalar> sorted;
  sorted.converged = out.converged;
  sorted.operator_applications = out.operator_applications;
  for (int i : idx) {
    sorted.values.push_back(out.values[i]);
    sorted.vectors.push_back(out.vectors[i]);
    sorted.residuals.push_back(out.residuals[i]);
  }
  return sorted;
}

template EigenPairs<double> lanczos_lowest<double>(int,
                                                   const LinearMap<double>&,
                                                   const LinearMap<double>&,
                                                   const LanczosOptions&);
template EigenPairs<std::complex<double>> lanczos_lowest<std::complex<double>>(
    int, const LinearMap<std::complex<double>>&,
    const LinearMap<std::complex<double>>&, const LanczosOptions&);

}  // namespace abf
