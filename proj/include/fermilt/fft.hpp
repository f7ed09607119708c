#pragma once

#include <complex>

#include "fermilt/grid.hpp"

namespace fermilt {

/// Cached FFTW plans, one pair per grid size.  Plans are created lazily
/// under a lock; fftw_execute_dft on distinct buffers is safe to call
/// concurrently.  Both directions are unnormalized.
class TransformPlan {
 public:
  static const TransformPlan& for_grid(const SpectralGrid& grid);

  void forward(const std::complex<double>* in, std::complex<double>* out) const;
  void inverse(const std::complex<double>* in, std::complex<double>* out) const;

  TransformPlan(const TransformPlan&) = delete;
  TransformPlan& operator=(const TransformPlan&) = delete;
  ~TransformPlan();

 private:
  explicit TransformPlan(int n);
  void* fwd_;
  void* bwd_;
};

}  // namespace fermilt
