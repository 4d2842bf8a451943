#pragma once

#include <string>
#include <vector>

#include "abflux/numerics.hpp"

namespace abf {

enum class OperatorKind {
  RingMagnetic,
  UltrasphericalSingular,  // flux field holds the half-flux A
  Sphere2Magnetic,
  TorusMagnetic,
  RingSchrodinger
};

struct OperatorSpec {
  OperatorKind kind = OperatorKind::RingMagnetic;
  double flux = 0.0;
  GridPtr grid;                   // RingS1, IntervalZ or TorusT2
  std::vector<double> potential;  // RingSchrodinger, sampled on grid
  int k_max = 5;                  // Sphere2Magnetic sector window
};

struct ModeLabel {
  int k = 0;
  int l = 0;
};

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  std::vector<ModeLabel> labels;    // sphere and ultraspherical only
  std::vector<double> est_error;
  std::vector<double> residuals;
  std::vector<int> resolution;
  Domain domain = Domain::RingS1;
  // Ground state vector for RingSchrodinger (count >= 1), on the grid.
  std::vector<cd> ground_state;
};

SpectrumResult eigen_solve(const OperatorSpec& op, int count);

// Lowest `count` eigenvalues of -L_2 + 4A^2/(1-z^2) at n Gauss-Jacobi nodes,
// solved for g = f / (1-z^2)^A.
std::vector<double> ultraspherical_sector(double half_flux, int n, int count,
                                          std::vector<double>* residuals);

struct PoincareRecord {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double projection = 0.0;    // coefficient c in fbar = c (1-z^2)^A
  std::vector<double> fbar;   // samples on the grid
  double lambda1 = 0.0;
  double est_error = 0.0;
  bool degenerate = false;    // f equal to fbar
  bool endpoint_nonzero = false;  // A = 0 reading with f(+-1) != 0
};

// f must be sampled on an IntervalZ grid with jacobi exponent 2A.
PoincareRecord weighted_poincare_check(const DiscreteField& f,
                                       double half_flux);

}  // namespace abf
