#pragma once

#include "fermilt/multiplier.hpp"
#include "fermilt/state.hpp"

namespace fermilt {

struct EnergyBreakdown {
  double kinetic_massive = 0.0;  // sum_j n_j <w_j, (sqrt(-Lap+m^2)-m) w_j>
  double interaction = 0.0;      // a * integral rho^{4/3}
  double total = 0.0;            // kinetic_massive - interaction
  double a = 0.0;
  double m = 0.0;
};

struct QuotientReport {
  double massless_kinetic = 0.0;  // T = tr(sqrt(-Lap) gamma)
  double lp_interaction = 0.0;    // integral rho^{4/3}
  double quotient = 0.0;          // T / integral rho^{4/3}
  int grid_n = 0;
  double grid_L = 0.0;
};

struct VirialReport {
  double lhs = 0.0;  // T - (3/2) D integral rho^{4/3}
  double rhs = 0.0;  // (3/2) sum_j mu_j ||w_j||^2
  double residual = 0.0;
};

/// integral rho^{4/3} by the uniform-grid quadrature.
double lp43(const RealField& rho);

/// E_a(gamma).  Requires the set orthonormal within 1e-8 (NotOrthonormal).
EnergyBreakdown energy(const OrbitalSet& set, double a, double m);

/// Real-gradient convention for complex fields: directional derivatives obey
/// d/dt E(w + t h)|_0 = Re<g, h>, so g_j = 2 [ (sqrt(-Lap+m^2)-m) w_j
/// - (4a/3) rho^{1/3} w_j ].
std::vector<ComplexField> energy_gradient(const OrbitalSet& set, double a,
                                          double m);

/// Massless Lieb-Thirring quotient at p = 4/3 for unit occupations.
QuotientReport lt_quotient(const OrbitalSet& set);

/// Scale-invariant product tr(sqrt(-Lap) gamma) * tr(gamma / sqrt(-Lap));
/// equals tr(gamma/sqrt(-Lap)) under the normalization tr(sqrt(-Lap)gamma)=1.
double dstar_product(const OrbitalSet& set);

/// Estimate of the negative bias induced by dropping the DC mode of
/// 1/sqrt(-Lap): sum_j |w_j_hat(0)|^2 / k_min.
double dstar_dc_bias(const OrbitalSet& set);

VirialReport virial_residual(const OrbitalSet& set, double D,
                             const std::vector<double>& mus);

}  // namespace fermilt
