#include "fermilt/state.hpp"

#include <cmath>
#include <numbers>

#include "fermilt/errors.hpp"

namespace fermilt {

RealField density(const OrbitalSet& set) {
  RealField rho(set.grid());
  for (int j = 0; j < set.count(); ++j) {
    const double n_j = set.occupations[j];
    const auto& w = set.orbitals[j].values;
    for (std::size_t i = 0; i < rho.values.size(); ++i) {
      rho.values[i] += n_j * std::norm(w[i]);
    }
  }
  return rho;
}

GramMatrix gram(const OrbitalSet& set) {
  const int N = set.count();
  GramMatrix G(N, N);
  for (int i = 0; i < N; ++i) {
    G(i, i) = norm2_sq(set.orbitals[i]);
    for (int j = i + 1; j < N; ++j) {
      const cdouble v = inner(set.orbitals[i], set.orbitals[j]);
      G(i, j) = v;
      G(j, i) = std::conj(v);
    }
  }
  return G;
}

double gram_deviation(const OrbitalSet& set) {
  const GramMatrix G = gram(set);
  GramMatrix D = G - GramMatrix::Identity(G.rows(), G.cols());
  return D.cwiseAbs().maxCoeff();
}

OrbitalSet mix(const OrbitalSet& set, const GramMatrix& M) {
  const int N = set.count();
  OrbitalSet out;
  out.occupations = set.occupations;
  out.orbitals.reserve(N);
  for (int i = 0; i < static_cast<int>(M.cols()); ++i) {
    ComplexField w(set.grid());
    for (int j = 0; j < N; ++j) {
      axpy_in_place(w, M(j, i), set.orbitals[j]);
    }
    out.orbitals.push_back(std::move(w));
  }
  out.occupations.resize(out.orbitals.size(), 1.0);
  return out;
}

OrbitalSet loewdin(const OrbitalSet& set) {
  const GramMatrix G = gram(set);
  Eigen::SelfAdjointEigenSolver<GramMatrix> es(G);
  if (es.eigenvalues().minCoeff() <= 1e-12) {
    throw NearRankDeficient("loewdin: Gram matrix nearly singular, min eig = " +
                            std::to_string(es.eigenvalues().minCoeff()));
  }
  const GramMatrix inv_sqrt =
      es.eigenvectors() *
      es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
      es.eigenvectors().adjoint();
  return mix(set, inv_sqrt);
}

OrbitalSet translated_pair(const OrbitalSet& base, double R,
                           std::array<double, 3> axis) {
  const auto& g = *base.grid();
  if (!(R < g.box_length() / 2)) {
    throw ConfigError("translated_pair: R must be below L/2");
  }
  OrbitalSet doubled;
  doubled.orbitals = base.orbitals;
  const std::array<double, 3> shift{R * axis[0], R * axis[1], R * axis[2]};
  for (const auto& w : base.orbitals) {
    doubled.orbitals.push_back(translate(w, shift));
  }
  doubled.occupations.assign(doubled.orbitals.size(), 1.0);
  return loewdin(doubled);
}

std::array<double, 3> density_centroid(const OrbitalSet& set) {
  const auto& g = *set.grid();
  const RealField rho = density(set);
  const double w = 2.0 * std::numbers::pi / g.n();
  std::array<cdouble, 3> mean{cdouble(0.0), cdouble(0.0), cdouble(0.0)};
  for (int ix = 0; ix < g.n(); ++ix) {
    for (int iy = 0; iy < g.n(); ++iy) {
      for (int iz = 0; iz < g.n(); ++iz) {
        const double r = rho.values[g.index(ix, iy, iz)];
        mean[0] += r * cdouble(std::cos(w * ix), std::sin(w * ix));
        mean[1] += r * cdouble(std::cos(w * iy), std::sin(w * iy));
        mean[2] += r * cdouble(std::cos(w * iz), std::sin(w * iz));
      }
    }
  }
  std::array<double, 3> c{};
  for (int d = 0; d < 3; ++d) {
    double theta = std::arg(mean[d]);
    if (theta < 0) theta += 2.0 * std::numbers::pi;
    c[d] = theta / (2.0 * std::numbers::pi) * g.box_length();
  }
  return c;
}

}  // namespace fermilt
