#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "abflux/common.hpp"

namespace abf {

using cd = std::complex<double>;

enum class Domain { RingS1, TorusT2, IntervalZ, LogRadial, CylindricalR3 };
enum class Measure { NormalizedProbability, Lebesgue };

const char* domain_name(Domain d);

struct GridSpec {
  Domain domain = Domain::RingS1;
  int n0 = 256;  // theta | x | z | s | rho
  int n1 = 0;    //         y |   | theta | theta
  int n2 = 0;    //                       | z
  double truncation = 0.0;    // LogRadial L; CylindricalR3 rho_max
  double truncation_z = 0.0;  // CylindricalR3 z_max
  double jacobi = 0.0;        // IntervalZ: weight (1-z^2)^jacobi
};

// Row-major layout, last axis fastest.
//   TorusT2:        (x, y), y carries the flux
//   LogRadial:      (s, theta)
//   CylindricalR3:  (rho, theta, z)
struct Grid {
  Domain domain = Domain::RingS1;
  Measure measure = Measure::NormalizedProbability;
  std::vector<int> shape;
  std::vector<std::vector<double>> nodes;
  std::vector<std::vector<double>> axis_weights;
  std::vector<double> weights;  // integrate against the grid measure
  // LogRadial: weights integrate ds dtheta = |x|^-2 dx; volume = e^{2s}
  // turns them into Lebesgue weights. Empty elsewhere.
  std::vector<double> volume;
  double truncation = 0.0;
  double truncation_z = 0.0;
  double jacobi = 0.0;

  std::size_t size() const { return weights.size(); }
  double measure_weight(std::size_t i) const {
    return volume.empty() ? weights[i] : weights[i] * volume[i];
  }
};

using GridPtr = std::shared_ptr<const Grid>;

inline constexpr int kMinResolution = 16;

GridPtr build_grid(const GridSpec& spec);

enum class FieldKind { Complex, RealPositiveProfile };

struct DiscreteField {
  GridPtr grid;
  std::vector<cd> values;
  FieldKind kind = FieldKind::Complex;

  static DiscreteField complex_field(GridPtr g, std::vector<cd> v);
  static DiscreteField profile(GridPtr g, const std::vector<double>& v);
  std::vector<double> real_part() const;
  std::vector<double> modulus() const;
};

double lp_norm(const DiscreteField& f, double p);

double magnetic_energy(const DiscreteField& f, double a);

inline constexpr double kVanishFactor = 1e-8;

// (sum w u^-2)^-1, or 0 once min u < kVanishFactor * mean(u).
double inverse_l2_term(const DiscreteField& u);

// Quadrature helpers shared with the solvers.
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes and weights for int_{-1}^{1} g(z) (1-z^2)^alpha dz.
Quadrature gauss_jacobi(int n, double alpha);
inline Quadrature gauss_legendre(int n) { return gauss_jacobi(n, 0.0); }

// Differentiation matrix of the polynomial interpolant on arbitrary nodes.
Eigen::MatrixXd barycentric_diff_matrix(const std::vector<double>& x);

// Spectral derivative of periodic samples on [0, period).
std::vector<double> periodic_derivative(const std::vector<double>& f,
                                        double period, int order = 1);

// Symmetric wavenumber of FFT index j on n points, in [-n/2, n/2).
inline int wavenumber(int j, int n) { return j < (n + 1) / 2 ? j : j - n; }

}  // namespace abf
