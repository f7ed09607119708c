#include "fermilt/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fermilt/errors.hpp"

namespace fermilt {

SpectralGrid::SpectralGrid(int n, double L)
    : n_(n),
      box_length_(L),
      cell_volume_(std::pow(L / n, 3)),
      k_min_(2.0 * std::numbers::pi / L),
      frequency_(n),
      wavenumber_(n) {
  for (int i = 0; i < n; ++i) {
    frequency_[i] = (i < n / 2) ? i : i - n;
    wavenumber_[i] = k_min_ * frequency_[i];
  }
}

GridPtr SpectralGrid::make(int n, double L) {
  if (n < 8 || n % 2 != 0) {
    throw ConfigError("grid: n must be even and >= 8, got " +
                      std::to_string(n));
  }
  if (!(L > 0.0)) {
    throw ConfigError("grid: box length must be positive");
  }
  return GridPtr(new SpectralGrid(n, L));
}

double SpectralGrid::k_norm(std::size_t flat) const {
  const int iz = static_cast<int>(flat % n_);
  const int iy = static_cast<int>((flat / n_) % n_);
  const int ix = static_cast<int>(flat / (static_cast<std::size_t>(n_) * n_));
  const double kx = wavenumber_[ix];
  const double ky = wavenumber_[iy];
  const double kz = wavenumber_[iz];
  return std::sqrt(kx * kx + ky * ky + kz * kz);
}

std::array<double, 3> SpectralGrid::k_vector(std::size_t flat) const {
  const int iz = static_cast<int>(flat % n_);
  const int iy = static_cast<int>((flat / n_) % n_);
  const int ix = static_cast<int>(flat / (static_cast<std::size_t>(n_) * n_));
  return {wavenumber_[ix], wavenumber_[iy], wavenumber_[iz]};
}

void require_same_grid(const SpectralGrid& a, const SpectralGrid& b) {
  if (!a.same_as(b)) {
    throw GridMismatch("operands live on different grids");
  }
}

}  // namespace fermilt
