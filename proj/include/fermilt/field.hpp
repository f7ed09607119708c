#pragma once

#include <array>
#include <complex>
#include <vector>

#include "fermilt/grid.hpp"

namespace fermilt {

using cdouble = std::complex<double>;

/// One complex-valued function sampled on a SpectralGrid, row-major (x,y,z).
struct ComplexField {
  GridPtr grid;
  std::vector<cdouble> values;

  ComplexField() = default;
  explicit ComplexField(GridPtr g)
      : grid(std::move(g)), values(grid->size(), cdouble(0.0)) {}
};

/// Real-valued companion (densities, potentials).
struct RealField {
  GridPtr grid;
  std::vector<double> values;

  RealField() = default;
  explicit RealField(GridPtr g)
      : grid(std::move(g)), values(grid->size(), 0.0) {}
};

/// Spectral coefficients of a field.  Normalized so that
/// sum |coeff|^2 == cell_volume * sum |u(x)|^2 (discrete Parseval), which
/// makes the coefficient of a unit-L2-norm plane wave exactly 1.
struct SpectrumData {
  GridPtr grid;
  std::vector<cdouble> coeff;
};

SpectrumData to_spectrum(const ComplexField& u);
ComplexField from_spectrum(const SpectrumData& s);

/// Discrete L2 inner product, conjugate-linear in the first slot.
cdouble inner(const ComplexField& a, const ComplexField& b);
double norm2_sq(const ComplexField& u);
double norm2(const ComplexField& u);

void scale_in_place(ComplexField& u, cdouble factor);
void axpy_in_place(ComplexField& y, cdouble alpha, const ComplexField& x);
ComplexField scaled(const ComplexField& u, cdouble factor);

/// e^{i k0 . x} / sqrt(V) at integer per-axis frequencies.
ComplexField plane_wave(const GridPtr& grid, std::array<int, 3> freq);

/// exp(-|x - center|^2 / (2 sigma^2)) on the torus (minimum-image distance),
/// normalized to unit L2 norm.  Center defaults to the box midpoint.
ComplexField gaussian(const GridPtr& grid, double sigma);
ComplexField gaussian_at(const GridPtr& grid, double sigma,
                         std::array<double, 3> center);

/// Pointwise multiply by the minimum-image coordinate (x_axis - center_axis).
ComplexField multiply_coordinate(const ComplexField& u, int axis,
                                 std::array<double, 3> center);

/// Translation by a vector, implemented as a Fourier phase shift
/// (exact for band-limited fields).
ComplexField translate(const ComplexField& u, std::array<double, 3> shift);

}  // namespace fermilt
