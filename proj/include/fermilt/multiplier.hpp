#pragma once

#include "fermilt/field.hpp"

namespace fermilt {

enum class MultiplierKind { relativistic, massless, inverse_massless };

/// Diagonal Fourier multiplier aligned with the grid's frequency layout.
/// relativistic(m): sqrt(|k|^2 + m^2); massless: |k|; inverse_massless:
/// 1/|k| with the k=0 coefficient dropped (treated as 0).  The dropped DC
/// weight is observable through dc_weight() and reported as a bias
/// diagnostic by the d_* estimator.
struct MultiplierSpectrum {
  GridPtr grid;
  MultiplierKind kind = MultiplierKind::massless;
  double mass = 0.0;
  std::vector<double> values;
};

MultiplierSpectrum make_multiplier(const GridPtr& grid, MultiplierKind kind,
                                   double m = 0.0);

/// sum_k s(k) |u_hat(k)|^2, real and >= 0.
double quadratic_form(const ComplexField& u, const MultiplierSpectrum& s);
double quadratic_form(const SpectrumData& uh, const MultiplierSpectrum& s);

/// <u, (sqrt(-Lap + m^2) - m) u>, evaluated through the cancellation-free
/// symbol |k|^2 / (sqrt(|k|^2+m^2) + m); always >= 0.
double kinetic_form(const ComplexField& u, double m);
double kinetic_form(const SpectrumData& uh, double m);

ComplexField apply_multiplier(const ComplexField& u,
                              const MultiplierSpectrum& s);

/// |u_hat(0)|^2, the squared weight of the dropped DC mode.
double dc_weight(const ComplexField& u);

enum class DilateDirection { up, down };

/// Dyadic dilation u_t(x) = t^{3/2} u(tx) realized by exact index mapping in
/// frequency space.  down: t = 2, target grid (n/2, L/2); requires the upper
/// half-spectrum to carry at most 1e-10 of the squared norm.  up: t = 1/2,
/// target grid (2n, 2L).  Preserves the L2 norm exactly.
ComplexField dilate_pow2(const ComplexField& u, DilateDirection direction);

}  // namespace fermilt
