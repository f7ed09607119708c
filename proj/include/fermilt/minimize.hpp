#pragma once

#include <cstdint>
#include <string>

#include "fermilt/functionals.hpp"

namespace fermilt {

enum class NormalizeMode { none, unit_massless_kinetic };

struct MinimizeConfig {
  int max_iters = 4000;
  double grad_tol = 1e-6;       // relative projected-gradient norm
  double step_init = 1.0;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  NormalizeMode normalize_mode = NormalizeMode::none;
  // Restrict energy minimization to orbitals with zero field average.  On
  // the torus the constant mode has no massless kinetic cost, so at small
  // mass a spurious uniform branch drops below -2m through the k = 0 mode
  // alone (a pure finite-volume artifact); localized ground states carry
  // vanishing DC weight and are unaffected.  Quotient minimization always
  // works in this sector.
  bool dc_free = false;
  std::uint64_t seed = 0;
  std::string trace_path;  // per-iteration CSV rows when nonempty
};

struct IterationStat {
  double objective;
  double grad_norm;
  double step;
};

struct MinimizeReport {
  OrbitalSet final_set;
  double objective = 0.0;
  double projected_grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> multipliers;   // mu_j, ascending
  std::vector<double> el_residuals;  // ||H w_j - mu_j w_j||_2 per orbital
  std::vector<IterationStat> history;
};

/// Tangent projection on the orthonormal-frame manifold:
/// d_i = g_i - sum_j w_j sym(<w_j, g_i>).
std::vector<ComplexField> project_tangent(const OrbitalSet& set,
                                          const std::vector<ComplexField>& grads);

/// Ground state of E_a(gamma) by projected gradient descent with Loewdin
/// retraction and Armijo backtracking.  Throws DivergingObjective when the
/// objective falls below -10 m N (collapse guard).
MinimizeReport minimize_energy(const OrbitalSet& init, double a, double m,
                               const MinimizeConfig& cfg);

/// Massless Lieb-Thirring quotient minimization; gradient preconditioned by
/// 1/(1+|k|).  The final multipliers satisfy
/// (sqrt(-Lap) - (4/3) Q rho^{1/3}) w_j = mu_j w_j with Q the final quotient.
MinimizeReport minimize_quotient(const OrbitalSet& init,
                                 const MinimizeConfig& cfg);

/// N=1: isotropic Gaussian of width L/8; N=2: {g, x1 g} Loewdin-
/// orthonormalized; N<=4 continues with x2 g, x3 g.
OrbitalSet default_init(const GridPtr& grid, int N);

/// default_init plus seeded band-limited noise, for multi-start runs.
OrbitalSet perturbed_init(const GridPtr& grid, int N, std::uint64_t seed,
                          double amplitude = 0.2);

}  // namespace fermilt
