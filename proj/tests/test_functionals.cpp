#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fermilt/errors.hpp"
#include "fermilt/functionals.hpp"
#include "support/oracles.hpp"

using namespace fermilt;

namespace {

OrbitalSet gaussian_pair(const GridPtr& g, double sigma) {
  const double mid = g->box_length() / 2;
  OrbitalSet set;
  set.orbitals.push_back(gaussian(g, sigma));
  ComplexField w2 =
      multiply_coordinate(set.orbitals[0], 0, {mid, mid, mid});
  scale_in_place(w2, 1.0 / norm2(w2));
  set.orbitals.push_back(std::move(w2));
  set.occupations = {1.0, 1.0};
  return set;
}

}  // namespace

TEST_CASE("lp43 on a Gaussian matches the closed form") {
  auto g = SpectralGrid::make(32, 16.0);
  const double sigma = 1.6;
  OrbitalSet set;
  set.orbitals.push_back(gaussian(g, sigma));
  set.occupations = {1.0};
  CHECK(lp43(density(set)) ==
        doctest::Approx(oracle::lp43_gaussian(sigma)).epsilon(1e-6));
}

TEST_CASE("lp43 on the Gaussian pair matches the separable quadrature") {
  auto g = SpectralGrid::make(32, 16.0);
  const double sigma = 1.6;
  OrbitalSet set = gaussian_pair(g, sigma);
  CHECK(gram_deviation(set) < 1e-10);
  CHECK(lp43(density(set)) ==
        doctest::Approx(oracle::lp43_pair(sigma)).epsilon(1e-6));
}

TEST_CASE("energy of a single plane wave at k = 0") {
  auto g = SpectralGrid::make(16, 12.0);
  OrbitalSet set;
  set.orbitals.push_back(plane_wave(g, {0, 0, 0}));
  set.occupations = {1.0};
  const double a = 0.9, m = 1.3;
  EnergyBreakdown e = energy(set, a, m);
  CHECK(e.kinetic_massive == doctest::Approx(0.0).epsilon(1e-13));
  // rho = 1/V, so the interaction term is a V^{-1/3}
  CHECK(e.total ==
        doctest::Approx(-a * std::pow(g->volume(), -1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("energy rejects non-orthonormal sets") {
  auto g = SpectralGrid::make(16, 16.0);
  OrbitalSet set;
  set.orbitals.push_back(gaussian(g, 2.0));
  set.orbitals.push_back(scaled(set.orbitals[0], 0.9));
  set.occupations = {1.0, 1.0};
  CHECK_THROWS_AS(energy(set, 1.0, 1.0), NotOrthonormal);
}

TEST_CASE("energy gradient against central finite differences") {
  auto g = SpectralGrid::make(16, 12.0);
  const double a = 1.2, m = 0.9;
  OrbitalSet set = loewdin(gaussian_pair(g, 1.5));
  auto grads = energy_gradient(set, a, m);

  auto value = [&](const OrbitalSet& s) {
    // direct evaluation without the orthonormality gate: the FD probes
    // leave the manifold by O(step)
    double kin = 0.0;
    for (int j = 0; j < s.count(); ++j) kin += kinetic_form(s.orbitals[j], m);
    return kin - a * lp43(density(s));
  };

  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ComplexField> h;
    for (int j = 0; j < set.count(); ++j) {
      h.push_back(oracle::random_field(g, 100 + 2 * trial + j));
    }
    const double fd = oracle::directional_derivative(value, set, h);
    double analytic = 0.0;
    for (int j = 0; j < set.count(); ++j) {
      analytic += std::real(inner(grads[j], h[j]));
    }
    CHECK(analytic == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("lt_quotient basics") {
  auto g = SpectralGrid::make(16, 16.0);

  SUBCASE("constant field is degenerate") {
    OrbitalSet set;
    set.orbitals.push_back(plane_wave(g, {0, 0, 0}));
    set.occupations = {1.0};
    CHECK_THROWS_AS(lt_quotient(set), DegenerateField);
  }

  SUBCASE("nonzero plane wave gives |k0| V^{1/3}") {
    OrbitalSet set;
    set.orbitals.push_back(plane_wave(g, {2, 0, 0}));
    set.occupations = {1.0};
    QuotientReport q = lt_quotient(set);
    const double k0 = 2.0 * 2.0 * M_PI / 16.0;
    CHECK(q.quotient ==
          doctest::Approx(k0 * std::pow(g->volume(), 1.0 / 3.0)).epsilon(1e-12));
  }

  SUBCASE("Gaussian value matches the quadrature oracles") {
    auto fine = SpectralGrid::make(32, 16.0);
    const double sigma = 1.6;
    OrbitalSet set;
    set.orbitals.push_back(gaussian(fine, sigma));
    set.occupations = {1.0};
    QuotientReport q = lt_quotient(set);
    // the cone of |k| at the origin makes the discrete trace differ from
    // the R^3 integral at O(L^-4); pin against the lattice sum
    const double T =
        oracle::lattice_form([](double k) { return k; }, 32, 16.0, sigma);
    const double P = oracle::lp43_gaussian(sigma);
    CHECK(q.massless_kinetic == doctest::Approx(T).epsilon(1e-5));
    CHECK(q.lp_interaction == doctest::Approx(P).epsilon(1e-6));
    CHECK(q.quotient == doctest::Approx(T / P).epsilon(1e-5));
  }
}

TEST_CASE("lt_quotient invariances") {
  auto g = SpectralGrid::make(16, 16.0);
  // wide lumps pick up a small boundary-kink overlap; orthonormalize
  OrbitalSet set = loewdin(gaussian_pair(g, 2.2));
  const double q0 = lt_quotient(set).quotient;

  SUBCASE("dyadic dilation") {
    OrbitalSet up;
    for (const auto& w : set.orbitals) {
      up.orbitals.push_back(dilate_pow2(w, DilateDirection::up));
    }
    up.occupations = set.occupations;
    // rho^{4/3} is not band limited, so the grid quadrature is invariant
    // only up to the trigonometric interpolation error
    CHECK(lt_quotient(up).quotient == doctest::Approx(q0).epsilon(1e-5));
  }

  SUBCASE("translation and global phase") {
    OrbitalSet moved;
    for (const auto& w : set.orbitals) {
      moved.orbitals.push_back(
          scaled(translate(w, {3.1, -1.7, 0.4}), std::polar(1.0, 0.8)));
    }
    moved.occupations = set.occupations;
    CHECK(lt_quotient(moved).quotient == doctest::Approx(q0).epsilon(1e-5));
  }
}

TEST_CASE("dstar product") {
  auto g = SpectralGrid::make(32, 16.0);
  const double sigma = 1.6;
  OrbitalSet set;
  set.orbitals.push_back(gaussian(g, sigma));
  set.occupations = {1.0};

  const double T =
      oracle::lattice_form([](double k) { return k; }, 32, 16.0, sigma);
  const double inv = oracle::lattice_form([](double k) { return 1.0 / k; }, 32,
                                          16.0, sigma, /*drop_dc=*/true);
  // dropped-DC lattice semantics, exact against the analytic spectrum
  CHECK(dstar_product(set) == doctest::Approx(T * inv).epsilon(1e-5));
  CHECK(dstar_dc_bias(set) > 0.0);
  // continuum sanity: adding back the DC estimate lands near the R^3 value
  // up to the O(L^-2) periodization of the 1/|k| kernel
  const double inv_r3 =
      oracle::gaussian_form([](double k) { return 1.0 / k; }, sigma);
  CHECK(dstar_product(set) + T * dstar_dc_bias(set) ==
        doctest::Approx(T * inv_r3).epsilon(0.15));

  SUBCASE("dilation invariance of the product") {
    OrbitalSet up;
    up.orbitals.push_back(dilate_pow2(set.orbitals[0], DilateDirection::up));
    up.occupations = {1.0};
    CHECK(dstar_product(up) ==
          doctest::Approx(dstar_product(set)).epsilon(1e-6));
  }
}

TEST_CASE("virial residual vanishes at stationary multipliers") {
  // For any set, choosing mus consistent with the identity
  // T - (3/2) D P = (3/2) sum mu_j ||w_j||^2 must give residual 0;
  // here probe the bookkeeping with a synthetic single orbital.
  auto g = SpectralGrid::make(16, 16.0);
  OrbitalSet set;
  set.orbitals.push_back(gaussian(g, 2.0));
  set.occupations = {1.0};
  QuotientReport q = lt_quotient(set);
  const double D = 1.1;
  const double mu =
      (q.massless_kinetic - 1.5 * D * q.lp_interaction) / 1.5;
  VirialReport v = virial_residual(set, D, {mu});
  CHECK(v.residual < 1e-12);
  CHECK(v.lhs == doctest::Approx(v.rhs).epsilon(1e-12));
}
