#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace abf {

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using LinearMap = std::function<void(const Vec<Scalar>&, Vec<Scalar>&)>;

struct LanczosOptions {
  int count = 1;
  int krylov_dim = 60;
  double tol = 1e-10;  // true residual <= tol * max(1, |lambda|)
  int max_restarts = 20;
  unsigned long long seed = 0x5eed;
};

template <class Scalar>
struct EigenPairs {
  std::vector<double> values;  // ascending
  std::vector<Vec<Scalar>> vectors;
  std::vector<double> residuals;
  bool converged = false;
  int operator_applications = 0;
};

// Lowest eigenpairs of the Hermitian operator A via Lanczos on the
// shift-inverted map solve_shifted = (A - sigma)^-1, sigma below the spectrum,
// with full reorthogonalization. One pair is locked per Krylov run, so
// repeated eigenvalues are found one copy at a time.
template <class Scalar>
EigenPairs<Scalar> lanczos_lowest(int n, const LinearMap<Scalar>& apply_a,
                                  const LinearMap<Scalar>& solve_shifted,
                                  const LanczosOptions& opts);

extern template EigenPairs<double> lanczos_lowest<double>(
    int, const LinearMap<double>&, const LinearMap<double>&,
    const LanczosOptions&);
extern template EigenPairs<std::complex<double>>
lanczos_lowest<std::complex<double>>(int,
                                     const LinearMap<std::complex<double>>&,
                                     const LinearMap<std::complex<double>>&,
                                     const LanczosOptions&);

}  // namespace abf
