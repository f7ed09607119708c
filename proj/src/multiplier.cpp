#include "fermilt/multiplier.hpp"

#include <cmath>

#include "fermilt/errors.hpp"

namespace fermilt {

MultiplierSpectrum make_multiplier(const GridPtr& grid, MultiplierKind kind,
                                   double m) {
  if (kind == MultiplierKind::relativistic && m < 0.0) {
    throw ConfigError("multiplier: mass must be nonnegative");
  }
  const auto& g = *grid;
  MultiplierSpectrum s{grid, kind, m, std::vector<double>(g.size())};
  for (int ix = 0; ix < g.n(); ++ix) {
    const double kx = g.axis_wavenumber(ix);
    for (int iy = 0; iy < g.n(); ++iy) {
      const double ky = g.axis_wavenumber(iy);
      for (int iz = 0; iz < g.n(); ++iz) {
        const double kz = g.axis_wavenumber(iz);
        const double k2 = kx * kx + ky * ky + kz * kz;
        double v = 0.0;
        switch (kind) {
          case MultiplierKind::relativistic:
            v = std::sqrt(k2 + m * m);
            break;
          case MultiplierKind::massless:
            v = std::sqrt(k2);
            break;
          case MultiplierKind::inverse_massless:
            v = (k2 > 0.0) ? 1.0 / std::sqrt(k2) : 0.0;
            break;
        }
        s.values[g.index(ix, iy, iz)] = v;
      }
    }
  }
  return s;
}

double quadratic_form(const SpectrumData& uh, const MultiplierSpectrum& s) {
  require_same_grid(*uh.grid, *s.grid);
  double acc = 0.0;
  for (std::size_t i = 0; i < uh.coeff.size(); ++i) {
    acc += s.values[i] * std::norm(uh.coeff[i]);
  }
  return acc;
}

double quadratic_form(const ComplexField& u, const MultiplierSpectrum& s) {
  return quadratic_form(to_spectrum(u), s);
}

double kinetic_form(const SpectrumData& uh, double m) {
  if (m < 0.0) throw ConfigError("kinetic_form: mass must be nonnegative");
  const auto& g = *uh.grid;
  double acc = 0.0;
  for (std::size_t i = 0; i < uh.coeff.size(); ++i) {
    const double k = g.k_norm(i);
    const double sym = k * k / (std::sqrt(k * k + m * m) + m);
    acc += sym * std::norm(uh.coeff[i]);
  }
  return acc;
}

double kinetic_form(const ComplexField& u, double m) {
  return kinetic_form(to_spectrum(u), m);
}

ComplexField apply_multiplier(const ComplexField& u,
                              const MultiplierSpectrum& s) {
  require_same_grid(*u.grid, *s.grid);
  SpectrumData uh = to_spectrum(u);
  for (std::size_t i = 0; i < uh.coeff.size(); ++i) {
    uh.coeff[i] *= s.values[i];
  }
  return from_spectrum(uh);
}

double dc_weight(const ComplexField& u) {
  return std::norm(to_spectrum(u).coeff[0]);
}

ComplexField dilate_pow2(const ComplexField& u, DilateDirection direction) {
  const auto& g = *u.grid;
  const SpectrumData uh = to_spectrum(u);
  if (direction == DilateDirection::up) {
    GridPtr target = SpectralGrid::make(2 * g.n(), 2 * g.box_length());
    SpectrumData out{target, std::vector<cdouble>(target->size(), cdouble(0.0))};
    for (int ix = 0; ix < g.n(); ++ix) {
      const int fx = g.frequency(ix);
      const int jx = (fx + 2 * g.n()) % (2 * g.n());
      for (int iy = 0; iy < g.n(); ++iy) {
        const int fy = g.frequency(iy);
        const int jy = (fy + 2 * g.n()) % (2 * g.n());
        for (int iz = 0; iz < g.n(); ++iz) {
          const int fz = g.frequency(iz);
          const int jz = (fz + 2 * g.n()) % (2 * g.n());
          out.coeff[target->index(jx, jy, jz)] =
              uh.coeff[g.index(ix, iy, iz)];
        }
      }
    }
    return from_spectrum(out);
  }

  // down: keep frequencies |f| < n/4, reject if the rest carries mass.
  const int half = g.n() / 4;
  double total = 0.0;
  double kept = 0.0;
  for (int ix = 0; ix < g.n(); ++ix) {
    const int fx = g.frequency(ix);
    for (int iy = 0; iy < g.n(); ++iy) {
      const int fy = g.frequency(iy);
      for (int iz = 0; iz < g.n(); ++iz) {
        const int fz = g.frequency(iz);
        const double w = std::norm(uh.coeff[g.index(ix, iy, iz)]);
        total += w;
        if (fx >= -half && fx < half && fy >= -half && fy < half &&
            fz >= -half && fz < half) {
          kept += w;
        }
      }
    }
  }
  if (total > 0.0 && (total - kept) > 1e-10 * total) {
    throw BandLimitViolation(
        "dilate_pow2(down): field is not band-limited to the half-spectrum");
  }
  GridPtr target = SpectralGrid::make(g.n() / 2, g.box_length() / 2);
  SpectrumData out{target, std::vector<cdouble>(target->size(), cdouble(0.0))};
  const int tn = target->n();
  for (int ix = 0; ix < g.n(); ++ix) {
    const int fx = g.frequency(ix);
    if (fx < -half || fx >= half) continue;
    const int jx = (fx + tn) % tn;
    for (int iy = 0; iy < g.n(); ++iy) {
      const int fy = g.frequency(iy);
      if (fy < -half || fy >= half) continue;
      const int jy = (fy + tn) % tn;
      for (int iz = 0; iz < g.n(); ++iz) {
        const int fz = g.frequency(iz);
        if (fz < -half || fz >= half) continue;
        const int jz = (fz + tn) % tn;
        out.coeff[target->index(jx, jy, jz)] = uh.coeff[g.index(ix, iy, iz)];
      }
    }
  }
  return from_spectrum(out);
}

}  // namespace fermilt
