#include "abflux/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "abflux/common.hpp"

namespace abf::fft {

namespace {

struct PlanCache {
  std::mutex mu;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& kv : plans) fftw_destroy_plan(kv.second);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_plan plan_for(const std::vector<int>& shape, int sign) {
  PlanCache& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  auto key = std::make_pair(shape, sign);
  auto it = c.plans.find(key);
  if (it != c.plans.end()) return it->second;
  std::size_t n = 1;
  for (int s : shape) n *= static_cast<std::size_t>(s);
  fftw_complex* scratch = fftw_alloc_complex(n);
  fftw_plan plan =
      fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), scratch,
                    scratch, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  require(plan != nullptr, Status::Internal, "fftw planning failed");
  c.plans.emplace(key, plan);
  return plan;
}

void execute(std::complex<double>* data, const std::vector<int>& shape,
             int sign) {
  fftw_plan plan = plan_for(shape, sign);
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, d, d);
}

}  // namespace

void forward(std::complex<double>* data, const std::vector<int>& shape) {
  execute(data, shape, FFTW_FORWARD);
}

void inverse(std::complex<double>* data, const std::vector<int>& shape) {
  execute(data, shape, FFTW_BACKWARD);
}

std::vector<std::complex<double>> coefficients(
    const std::vector<std::complex<double>>& f, const std::vector<int>& shape) {
  std::vector<std::complex<double>> c = f;
  forward(c.data(), shape);
  const double inv = 1.0 / static_cast<double>(c.size());
  for (auto& x : c) x *= inv;
  return c;
}

}  // namespace abf::fft
