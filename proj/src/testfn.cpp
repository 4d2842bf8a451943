#include "abflux/testfn.hpp"

#include <algorithm>
#include <cmath>

namespace abf {

const char* family_name(Family f) {
  switch (f) {
    case Family::FourierBandlimited: return "FourierBandlimited";
    case Family::PositiveProfile: return "PositiveProfile";
    case Family::GaussianBumpPhase: return "GaussianBumpPhase";
    case Family::CompactSupportSmooth: return "CompactSupportSmooth";
  }
  return "unknown";
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master ^ (0xd1b54a32d192ed03ULL * (index + 1));
  splitmix64(s);
  return splitmix64(s);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s))};
  gen_.seed(seq);
}

double Rng::uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::integer(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(gen_() % span);
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  have_spare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

namespace {

[[noreturn]] void incompatible(Domain d, Family f) {
  fail(Status::InvalidArgument, std::string("family ") + family_name(f) +
                                    " is not available on " + domain_name(d));
}

// Smooth bump supported in |t| < 1.
double bump(double t) {
  return std::abs(t) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
}

DiscreteField periodic_field(const GridPtr& g, Family family, Rng& rng) {
  const bool torus = g->domain == Domain::TorusT2;
  const int nx = g->shape[0], ny = torus ? g->shape[1] : 1;
  const int modes = rng.integer(1, kMaxModes);
  struct Mode {
    int kx, ky;
    cd c;
  };
  std::vector<Mode> ms;
  for (int m = 0; m < modes; ++m) {
    Mode md;
    md.kx = rng.integer(-4, 4);
    md.ky = torus ? rng.integer(-4, 4) : 0;
    const double decay = 1.0 / (1.0 + md.kx * md.kx + md.ky * md.ky);
    md.c = cd(rng.normal(), rng.normal()) * decay;
    ms.push_back(md);
  }
  std::vector<cd> v(g->size());
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const double x = g->nodes[0][i], y = torus ? g->nodes[1][j] : 0.0;
      cd s = 0.0;
      for (const Mode& md : ms) s += md.c * std::exp(cd(0.0, md.kx * x + md.ky * y));
      v[static_cast<std::size_t>(i) * ny + j] = s;
    }
  if (family == Family::FourierBandlimited)
    return DiscreteField::complex_field(g, std::move(v));
  // Positive profile: 1 + s f / max|f| with s < 0.9.
  double mx = 0.0;
  for (const cd& z : v) mx = std::max(mx, std::abs(z.real()));
  const double s = rng.uniform(0.05, 0.9);
  std::vector<double> u(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    u[i] = 1.0 + (mx > 0.0 ? s * v[i].real() / mx : 0.0);
  return DiscreteField::profile(g, u);
}

DiscreteField interval_field(const GridPtr& g, Rng& rng) {
  const int deg = rng.integer(1, kMaxModes);
  std::vector<double> c(deg + 1);
  for (double& x : c) x = rng.normal();
  std::vector<cd> v(g->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double z = g->nodes[0][i];
    double s = 0.0;
    for (int d = deg; d >= 0; --d) s = s * z + c[d];
    v[i] = std::pow(1.0 - z * z, 0.5 * g->jacobi) * s;
  }
  return DiscreteField::complex_field(g, std::move(v));
}

DiscreteField log_radial_field(const GridPtr& g, Rng& rng) {
  const int ns = g->shape[0], nt = g->shape[1];
  const double L = g->truncation;
  const int bumps = rng.integer(1, 3);
  struct B {
    int k;
    double s0, sigma;
    cd c;
  };
  std::vector<B> bs;
  for (int b = 0; b < bumps; ++b) {
    B x;
    x.k = rng.integer(-3, 3);
    x.sigma = rng.uniform(0.5, 2.0);
    const double room = std::max(0.0, L - 9.0 * x.sigma);
    x.s0 = rng.uniform(-0.5, 0.5) * room;
    x.c = cd(rng.normal(), rng.normal());
    bs.push_back(x);
  }
  std::vector<cd> v(g->size());
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j) {
      const double s = g->nodes[0][i], th = g->nodes[1][j];
      cd z = 0.0;
      for (const B& b : bs) {
        const double t = (s - b.s0) / b.sigma;
        z += b.c * std::exp(-0.5 * t * t) * std::exp(cd(0.0, b.k * th));
      }
      v[static_cast<std::size_t>(i) * nt + j] = z;
    }
  return DiscreteField::complex_field(g, std::move(v));
}

DiscreteField cylindrical_field(const GridPtr& g, Rng& rng) {
  const int nr = g->shape[0], nt = g->shape[1], nz = g->shape[2];
  const double R = g->truncation, Z = g->truncation_z;
  const int bumps = rng.integer(1, 3);
  struct B {
    int k;
    double r0, z0, w;
    cd c;
  };
  std::vector<B> bs;
  for (int b = 0; b < bumps; ++b) {
    B x;
    x.k = rng.integer(-3, 3);
    x.w = rng.uniform(0.15, 0.3) * std::min(R, Z);
    x.r0 = rng.uniform(x.w + 0.05 * R, 0.85 * R - x.w);
    x.z0 = rng.uniform(-0.85 * Z + x.w, 0.85 * Z - x.w);
    x.c = cd(rng.normal(), rng.normal());
    bs.push_back(x);
  }
  std::vector<cd> v(g->size());
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j)
      for (int l = 0; l < nz; ++l) {
        const double r = g->nodes[0][i], th = g->nodes[1][j], z = g->nodes[2][l];
        cd s = 0.0;
        for (const B& b : bs) {
          const double d = std::hypot(r - b.r0, z - b.z0) / b.w;
          s += b.c * bump(d) * std::exp(cd(0.0, b.k * th));
        }
        v[(static_cast<std::size_t>(i) * nt + j) * nz + l] = s;
      }
  return DiscreteField::complex_field(g, std::move(v));
}

}  // namespace

DiscreteField generate_test_function(const GridPtr& grid, Family family,
                                     std::uint64_t seed) {
  require(grid != nullptr, Status::InvalidArgument, "null grid");
  Rng rng(seed);
  switch (grid->domain) {
    case Domain::RingS1:
    case Domain::TorusT2:
      if (family == Family::FourierBandlimited || family == Family::PositiveProfile)
        return periodic_field(grid, family, rng);
      break;
    case Domain::IntervalZ:
      if (family == Family::FourierBandlimited) return interval_field(grid, rng);
      break;
    case Domain::LogRadial:
      if (family == Family::GaussianBumpPhase) return log_radial_field(grid, rng);
      break;
    case Domain::CylindricalR3:
      if (family == Family::CompactSupportSmooth) return cylindrical_field(grid, rng);
      break;
  }
  incompatible(grid->domain, family);
}

}  // namespace abf
