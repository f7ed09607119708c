#pragma once

#include <Eigen/Dense>

#include "fermilt/field.hpp"

namespace fermilt {

/// Orbital frame representing the density operator
/// gamma = sum_j n_j |w_j><w_j|.  Occupations are stored but every shipped
/// flow keeps them at 1.
struct OrbitalSet {
  std::vector<ComplexField> orbitals;
  std::vector<double> occupations;

  OrbitalSet() = default;
  explicit OrbitalSet(std::vector<ComplexField> orbs)
      : orbitals(std::move(orbs)), occupations(orbitals.size(), 1.0) {}

  int count() const { return static_cast<int>(orbitals.size()); }
  const GridPtr& grid() const { return orbitals.front().grid; }
};

using GramMatrix = Eigen::MatrixXcd;

/// rho_gamma(x) = sum_j n_j |w_j(x)|^2.
RealField density(const OrbitalSet& set);

/// G_ij = <w_i, w_j> in the discrete L2 product.
GramMatrix gram(const OrbitalSet& set);

/// Largest |G_ij - delta_ij|.
double gram_deviation(const OrbitalSet& set);

/// Symmetric (G^{-1/2}) orthonormalization; throws NearRankDeficient when
/// the smallest Gram eigenvalue is <= 1e-12.
OrbitalSet loewdin(const OrbitalSet& set);

/// Right-multiply the frame by a matrix: w'_i = sum_j w_j M_ji.
OrbitalSet mix(const OrbitalSet& set, const GramMatrix& M);

/// Orthonormal 2N-orbital set spanning {w_j, w_j(. - R axis)}.
OrbitalSet translated_pair(const OrbitalSet& base, double R,
                           std::array<double, 3> axis);

/// Density centroid via circular means, suitable for periodic wrap.
std::array<double, 3> density_centroid(const OrbitalSet& set);

}  // namespace fermilt
