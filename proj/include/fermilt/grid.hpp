#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace fermilt {

/// Uniform periodic box [0,L)^3 with the standard signed DFT frequency
/// layout per axis: f in {0, 1, ..., n/2-1, -n/2, ..., -1}, angular
/// wavenumber k = 2*pi*f/L.  Fields are stored row-major in (x,y,z).
class SpectralGrid {
 public:
  /// n must be even and >= 8, L > 0.  Throws ConfigError otherwise.
  static std::shared_ptr<const SpectralGrid> make(int n, double L);

  int n() const { return n_; }
  double box_length() const { return box_length_; }
  double cell_volume() const { return cell_volume_; }
  double volume() const { return box_length_ * box_length_ * box_length_; }
  double spacing() const { return box_length_ / n_; }
  std::size_t size() const {
    return static_cast<std::size_t>(n_) * n_ * n_;
  }

  /// Smallest nonzero |k| on the grid, 2*pi/L.
  double k_min() const { return k_min_; }
  /// Largest per-axis |k| (Nyquist), pi*n/L.
  double k_max_axis() const { return -wavenumber_[n_ / 2]; }

  int frequency(int i) const { return frequency_[i]; }
  double axis_wavenumber(int i) const { return wavenumber_[i]; }
  double axis_coordinate(int i) const { return i * spacing(); }

  std::size_t index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * n_ + iy) * n_ + iz;
  }

  /// |k| at a flat spectral index.
  double k_norm(std::size_t flat) const;
  std::array<double, 3> k_vector(std::size_t flat) const;

  bool same_as(const SpectralGrid& other) const {
    return n_ == other.n_ && box_length_ == other.box_length_;
  }

 private:
  SpectralGrid(int n, double L);

  int n_;
  double box_length_;
  double cell_volume_;
  double k_min_;
  std::vector<int> frequency_;
  std::vector<double> wavenumber_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

void require_same_grid(const SpectralGrid& a, const SpectralGrid& b);

}  // namespace fermilt
