#include "fermilt/field.hpp"

#include <cmath>
#include <numbers>

#include "fermilt/errors.hpp"
#include "fermilt/fft.hpp"

namespace fermilt {

SpectrumData to_spectrum(const ComplexField& u) {
  const auto& g = *u.grid;
  SpectrumData s{u.grid, std::vector<cdouble>(g.size())};
  TransformPlan::for_grid(g).forward(u.values.data(), s.coeff.data());
  const double scale = std::sqrt(g.cell_volume() / static_cast<double>(g.size()));
  for (auto& c : s.coeff) c *= scale;
  return s;
}

ComplexField from_spectrum(const SpectrumData& s) {
  const auto& g = *s.grid;
  ComplexField u(s.grid);
  TransformPlan::for_grid(g).inverse(s.coeff.data(), u.values.data());
  const double scale =
      1.0 / std::sqrt(g.cell_volume() * static_cast<double>(g.size()));
  for (auto& v : u.values) v *= scale;
  return u;
}

cdouble inner(const ComplexField& a, const ComplexField& b) {
  require_same_grid(*a.grid, *b.grid);
  cdouble acc(0.0);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    acc += std::conj(a.values[i]) * b.values[i];
  }
  return acc * a.grid->cell_volume();
}

double norm2_sq(const ComplexField& u) {
  double acc = 0.0;
  for (const auto& v : u.values) acc += std::norm(v);
  return acc * u.grid->cell_volume();
}

double norm2(const ComplexField& u) { return std::sqrt(norm2_sq(u)); }

void scale_in_place(ComplexField& u, cdouble factor) {
  for (auto& v : u.values) v *= factor;
}

void axpy_in_place(ComplexField& y, cdouble alpha, const ComplexField& x) {
  require_same_grid(*y.grid, *x.grid);
  for (std::size_t i = 0; i < y.values.size(); ++i) {
    y.values[i] += alpha * x.values[i];
  }
}

ComplexField scaled(const ComplexField& u, cdouble factor) {
  ComplexField out = u;
  scale_in_place(out, factor);
  return out;
}

ComplexField plane_wave(const GridPtr& grid, std::array<int, 3> freq) {
  const auto& g = *grid;
  ComplexField u(grid);
  const double amp = 1.0 / std::sqrt(g.volume());
  const double w = 2.0 * std::numbers::pi / g.n();
  for (int ix = 0; ix < g.n(); ++ix) {
    for (int iy = 0; iy < g.n(); ++iy) {
      for (int iz = 0; iz < g.n(); ++iz) {
        const double phase = w * (freq[0] * ix + freq[1] * iy + freq[2] * iz);
        u.values[g.index(ix, iy, iz)] =
            amp * cdouble(std::cos(phase), std::sin(phase));
      }
    }
  }
  return u;
}

namespace {
double min_image(double d, double L) {
  d = std::fmod(d, L);
  if (d < -L / 2) d += L;
  if (d >= L / 2) d -= L;
  return d;
}
}  // namespace

ComplexField gaussian_at(const GridPtr& grid, double sigma,
                         std::array<double, 3> center) {
  const auto& g = *grid;
  ComplexField u(grid);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (int ix = 0; ix < g.n(); ++ix) {
    const double dx = min_image(g.axis_coordinate(ix) - center[0], g.box_length());
    for (int iy = 0; iy < g.n(); ++iy) {
      const double dy =
          min_image(g.axis_coordinate(iy) - center[1], g.box_length());
      for (int iz = 0; iz < g.n(); ++iz) {
        const double dz =
            min_image(g.axis_coordinate(iz) - center[2], g.box_length());
        u.values[g.index(ix, iy, iz)] =
            std::exp(-(dx * dx + dy * dy + dz * dz) * inv);
      }
    }
  }
  scale_in_place(u, 1.0 / norm2(u));
  return u;
}

ComplexField gaussian(const GridPtr& grid, double sigma) {
  const double mid = grid->box_length() / 2;
  return gaussian_at(grid, sigma, {mid, mid, mid});
}

ComplexField multiply_coordinate(const ComplexField& u, int axis,
                                 std::array<double, 3> center) {
  const auto& g = *u.grid;
  ComplexField out = u;
  for (int ix = 0; ix < g.n(); ++ix) {
    for (int iy = 0; iy < g.n(); ++iy) {
      for (int iz = 0; iz < g.n(); ++iz) {
        const int idx[3] = {ix, iy, iz};
        const double c =
            min_image(g.axis_coordinate(idx[axis]) - center[axis], g.box_length());
        out.values[g.index(ix, iy, iz)] *= c;
      }
    }
  }
  return out;
}

ComplexField translate(const ComplexField& u, std::array<double, 3> shift) {
  const auto& g = *u.grid;
  SpectrumData s = to_spectrum(u);
  for (int ix = 0; ix < g.n(); ++ix) {
    const double px = g.axis_wavenumber(ix) * shift[0];
    for (int iy = 0; iy < g.n(); ++iy) {
      const double py = g.axis_wavenumber(iy) * shift[1];
      for (int iz = 0; iz < g.n(); ++iz) {
        const double p = px + py + g.axis_wavenumber(iz) * shift[2];
        s.coeff[g.index(ix, iy, iz)] *= cdouble(std::cos(p), -std::sin(p));
      }
    }
  }
  return from_spectrum(s);
}

}  // namespace fermilt
