#pragma once

#include "fermilt/minimize.hpp"
#include "fermilt/multiplier.hpp"
#include "fermilt/state.hpp"

namespace fermilt {

/// H = multiplier(k) + shift + potential(x), multiplier relativistic(m) or
/// massless, potential <= 0 pointwise.
struct LinearizedOperator {
  MultiplierSpectrum mult;
  RealField potential;
  double shift = 0.0;
};

/// H_gamma = sqrt(-Lap+m^2) - m - (4a/3) rho^{1/3}.
LinearizedOperator massive_linearization(const OrbitalSet& set, double a,
                                         double m);
LinearizedOperator massive_linearization(const RealField& rho, double a,
                                         double m);
/// H*_gamma = sqrt(-Lap) - (4/3) D rho^{1/3}.
LinearizedOperator massless_linearization(const OrbitalSet& set, double D);

ComplexField apply_H(const LinearizedOperator& op, const ComplexField& u);

struct EigenReport {
  std::vector<double> eigenvalues;  // ascending
  OrbitalSet vectors;
  std::vector<double> residuals;  // ||H v - mu v||_2
  int iterations = 0;
  bool converged = false;
};

/// k (<= 4) lowest eigenpairs by matrix-free block LOBPCG-style iteration
/// with Rayleigh-Ritz over [X, W, P] and a 1/(symbol+1) preconditioner.
/// Optional warm start from a previous set of vectors.
EigenReport lowest_eigenpairs(const LinearizedOperator& op, int k,
                              double tol = 1e-8, int max_iters = 400,
                              const OrbitalSet* warm = nullptr);

struct ScfResult {
  OrbitalSet set;
  EigenReport eig;
  double energy_total = 0.0;
  int iterations = 0;
  bool converged = false;
  bool oscillation = false;
  double final_mixing = 0.0;
};

struct ScfConfig {
  double mixing = 0.3;
  double tol = 1e-5;       // ||rho - rho_new||_1 / N stopping threshold
  int max_iters = 300;
  double eig_tol = 1e-8;
  std::uint64_t seed = 0;
};

/// Self-consistent-field loop for the massive system: density in, k=N lowest
/// eigenvectors of H_rho out, linear mixing with automatic halving on
/// oscillation.
ScfResult scf_solve(const GridPtr& grid, double a, double m, int N,
                    const ScfConfig& cfg);

}  // namespace fermilt
