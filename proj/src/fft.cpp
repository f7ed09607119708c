#include "fermilt/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace fermilt {

namespace {
std::mutex plan_mutex;
std::map<int, std::unique_ptr<TransformPlan>>& plan_cache() {
  static std::map<int, std::unique_ptr<TransformPlan>> cache;
  return cache;
}
}  // namespace

TransformPlan::TransformPlan(int n) {
  // FFTW_UNALIGNED lets us execute on arbitrary std::vector storage.
  const std::size_t total = static_cast<std::size_t>(n) * n * n;
  std::vector<std::complex<double>> scratch(total);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fwd_ = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_FORWARD,
                          FFTW_ESTIMATE | FFTW_UNALIGNED);
  bwd_ = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_BACKWARD,
                          FFTW_ESTIMATE | FFTW_UNALIGNED);
}

TransformPlan::~TransformPlan() {
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

const TransformPlan& TransformPlan::for_grid(const SpectralGrid& grid) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(grid.n());
  if (it == cache.end()) {
    it = cache.emplace(grid.n(),
                       std::unique_ptr<TransformPlan>(new TransformPlan(grid.n())))
             .first;
  }
  return *it->second;
}

void TransformPlan::forward(const std::complex<double>* in,
                            std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(fwd_),
                   reinterpret_cast<fftw_complex*>(
                       const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void TransformPlan::inverse(const std::complex<double>* in,
                            std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(bwd_),
                   reinterpret_cast<fftw_complex*>(
                       const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace fermilt
