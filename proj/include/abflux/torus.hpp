#pragma once

#include <vector>

#include "abflux/minimize.hpp"
#include "abflux/numerics.hpp"
#include "abflux/ring.hpp"

namespace abf {

// Flow schemes for du/dt = Lap u + (p-1)|grad u|^2 / u.
//   ExactPower:      v = u^p solves the heat equation; advanced with the exact
//                    Fourier propagator.
//   ImplicitPower:   backward Euler for the heat equation in v.
//   SemiImplicit:    backward Euler diffusion in u, gradient term explicit.
enum class FlowScheme { ExactPower, ImplicitPower, SemiImplicit };

const char* flow_scheme_name(FlowScheme s);

struct FlowOptions {
  double t_end = 1.0;
  double dt = 1e-3;
  double dt_min = 1e-6;
  FlowScheme scheme = FlowScheme::ExactPower;
  int record_every = 1;
};

struct FlowSample {
  double t = 0.0;
  double functional = 0.0;  // ||grad u||^2 - lambda ||u||^2
  double lp_norm = 0.0;
};

struct FlowState {
  DiscreteField u;
  double t = 0.0;
  double p = 1.5;
  double lambda = 0.0;
  std::vector<FlowSample> history;
  double max_drift = 0.0;           // max |‖u‖_p(t) - ‖u‖_p(0)|
  double drift_per_time = 0.0;      // max_drift / t_end
  double max_increase = 0.0;        // largest step-to-step functional increase
  int steps = 0;
  int halvings = 0;
};

// u0 on RingS1 or TorusT2, strictly positive.
FlowState run_bakry_emery_flow(const DiscreteField& u0, double p, double lambda,
                               const FlowOptions& opts = {});

struct TensorizationRecord {
  double lhs = 0.0;  // (2-p)||grad u||^2 + ||u||_p^2
  double rhs = 0.0;  // ||u||_2^2
  double margin = 0.0;
  double quad_error = 0.0;
};

TensorizationRecord tensorization_check(const DiscreteField& u, double p);

enum class TorusShape { Constant, XIndependent, TwoDimensional };
const char* torus_shape_name(TorusShape s);

struct TorusOptions {
  int nx = 16;
  int ny = 64;
  MinimizeOptions min;
};

struct TorusProblem {
  double a_raw = 0.0;
  double p = 1.5;
  double mu = 1.0;
  TorusOptions opts;
};

struct TorusResult {
  OptimizationResult opt;     // profile on the nx * ny grid, row-major (x, y)
  TorusShape shape = TorusShape::Constant;
  double x_variation = 0.0;   // max over y of (max_x u - min_x u) / mean u
  double reduced_value = 0.0; // phase-eliminated quotient, a lower bound
  double field_value = 0.0;   // quotient of the reconstructed complex field
  double lower_bound = 0.0;   // mu + (1 - mu(2-p)) a^2
  double ring_value = 0.0;    // ring optimum at resolution ny
  double ring_difference = 0.0;
  std::vector<cd> field;      // reconstructed u e^{i phi}
};

TorusResult minimize_rayleigh_torus(const TorusProblem& tp);

}  // namespace abf
