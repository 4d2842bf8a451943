#pragma once

#include <cstdint>
#include <random>

#include "abflux/numerics.hpp"

namespace abf {

enum class Family {
  FourierBandlimited,
  PositiveProfile,
  GaussianBumpPhase,
  CompactSupportSmooth
};

const char* family_name(Family f);

std::uint64_t splitmix64(std::uint64_t& state);

// Per-task seed derived from a master seed and a task counter.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Deterministic 64-bit stream with uniform doubles built from the top 53 bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  int integer(int lo, int hi);           // inclusive
  double normal();                       // Box-Muller pair, cached

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

constexpr int kMaxModes = 8;

// Families by domain:
//   RingS1, TorusT2:  FourierBandlimited (complex), PositiveProfile
//   IntervalZ:        FourierBandlimited ((1-z^2)^{J/2} times a polynomial)
//   LogRadial:        GaussianBumpPhase
//   CylindricalR3:    CompactSupportSmooth
DiscreteField generate_test_function(const GridPtr& grid, Family family,
                                     std::uint64_t seed);

}  // namespace abf
