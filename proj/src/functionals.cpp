#include "fermilt/functionals.hpp"

#include <cmath>

#include "fermilt/errors.hpp"

namespace fermilt {

namespace {
constexpr double kOrthoTol = 1e-8;

void require_orthonormal(const OrbitalSet& set, const char* where) {
  const double dev = gram_deviation(set);
  if (dev > kOrthoTol) {
    throw NotOrthonormal(std::string(where) +
                         ": Gram deviation = " + std::to_string(dev));
  }
}
}  // namespace

double lp43(const RealField& rho) {
  double acc = 0.0;
  for (const double r : rho.values) {
    acc += std::pow(r, 4.0 / 3.0);
  }
  return acc * rho.grid->cell_volume();
}

EnergyBreakdown energy(const OrbitalSet& set, double a, double m) {
  require_orthonormal(set, "energy");
  EnergyBreakdown e;
  e.a = a;
  e.m = m;
  for (int j = 0; j < set.count(); ++j) {
    e.kinetic_massive += set.occupations[j] * kinetic_form(set.orbitals[j], m);
  }
  e.interaction = a * lp43(density(set));
  e.total = e.kinetic_massive - e.interaction;
  return e;
}

std::vector<ComplexField> energy_gradient(const OrbitalSet& set, double a,
                                          double m) {
  require_orthonormal(set, "energy_gradient");
  const auto& grid = set.grid();
  const RealField rho = density(set);
  const MultiplierSpectrum rel =
      make_multiplier(grid, MultiplierKind::relativistic, m);
  std::vector<ComplexField> grads;
  grads.reserve(set.count());
  const double c = 4.0 * a / 3.0;
  for (int j = 0; j < set.count(); ++j) {
    ComplexField g = apply_multiplier(set.orbitals[j], rel);
    const auto& w = set.orbitals[j].values;
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      g.values[i] = 2.0 * (g.values[i] - m * w[i] -
                           c * std::cbrt(rho.values[i]) * w[i]);
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

QuotientReport lt_quotient(const OrbitalSet& set) {
  require_orthonormal(set, "lt_quotient");
  const auto& grid = set.grid();
  const MultiplierSpectrum ml =
      make_multiplier(grid, MultiplierKind::massless);
  QuotientReport q;
  q.grid_n = grid->n();
  q.grid_L = grid->box_length();
  for (const auto& w : set.orbitals) {
    q.massless_kinetic += quadratic_form(w, ml);
  }
  if (q.massless_kinetic <= 1e-14) {
    throw DegenerateField("lt_quotient: vanishing massless kinetic energy");
  }
  q.lp_interaction = lp43(density(set));
  q.quotient = q.massless_kinetic / q.lp_interaction;
  return q;
}

double dstar_product(const OrbitalSet& set) {
  require_orthonormal(set, "dstar_product");
  const auto& grid = set.grid();
  const MultiplierSpectrum ml = make_multiplier(grid, MultiplierKind::massless);
  const MultiplierSpectrum inv =
      make_multiplier(grid, MultiplierKind::inverse_massless);
  double T = 0.0;
  double Tinv = 0.0;
  for (const auto& w : set.orbitals) {
    const SpectrumData wh = to_spectrum(w);
    T += quadratic_form(wh, ml);
    Tinv += quadratic_form(wh, inv);
  }
  if (T <= 1e-14) {
    throw DegenerateField("dstar_product: vanishing massless kinetic energy");
  }
  return T * Tinv;
}

double dstar_dc_bias(const OrbitalSet& set) {
  double acc = 0.0;
  for (const auto& w : set.orbitals) {
    acc += dc_weight(w);
  }
  return acc / set.grid()->k_min();
}

VirialReport virial_residual(const OrbitalSet& set, double D,
                             const std::vector<double>& mus) {
  const QuotientReport q = lt_quotient(set);
  VirialReport v;
  v.lhs = q.massless_kinetic - 1.5 * D * q.lp_interaction;
  for (std::size_t j = 0; j < mus.size() && j < set.orbitals.size(); ++j) {
    v.rhs += 1.5 * mus[j] * norm2_sq(set.orbitals[j]);
  }
  v.residual =
      std::abs(v.lhs - v.rhs) /
      std::max({std::abs(v.lhs), std::abs(v.rhs), 1e-12});
  return v;
}

}  // namespace fermilt
