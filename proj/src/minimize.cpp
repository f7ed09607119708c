#include "fermilt/minimize.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <random>

#include "fermilt/errors.hpp"

namespace fermilt {

namespace {

// Objective abstraction shared by the energy and quotient flows.  A full
// evaluation produces value and (unprojected) gradient fields; the line
// search only needs values.
struct Objective {
  std::function<double(const OrbitalSet&)> value;
  std::function<std::vector<ComplexField>(const OrbitalSet&, double&)>
      value_and_grad;  // returns grads, writes value
  MultiplierSpectrum precond;      // diagonal values in (0, 1]
  double divergence_floor = -std::numeric_limits<double>::infinity();
  std::function<std::vector<ComplexField>(const OrbitalSet&)> apply_H;
};

ComplexField precondition(const ComplexField& g, const MultiplierSpectrum& p) {
  return apply_multiplier(g, p);
}

double total_norm_sq(const std::vector<ComplexField>& fields) {
  double acc = 0.0;
  for (const auto& f : fields) acc += norm2_sq(f);
  return acc;
}

OrbitalSet stepped(const OrbitalSet& set, const std::vector<ComplexField>& dir,
                   double step) {
  OrbitalSet out = set;
  for (int i = 0; i < set.count(); ++i) {
    axpy_in_place(out.orbitals[i], cdouble(-step), dir[i]);
  }
  return loewdin(out);
}

MinimizeReport run_descent(const OrbitalSet& init, const Objective& obj,
                           const MinimizeConfig& cfg) {
  MinimizeReport rep;
  OrbitalSet cur = loewdin(init);
  double step = cfg.step_init;
  std::ofstream trace;
  if (!cfg.trace_path.empty()) {
    trace.open(cfg.trace_path);
    trace << "iter,objective,grad_norm,step\n";
  }

  double value = 0.0;
  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    std::vector<ComplexField> grads = obj.value_and_grad(cur, value);
    if (value < obj.divergence_floor) {
      throw DivergingObjective("objective fell below the collapse guard: " +
                               std::to_string(value));
    }
    std::vector<ComplexField> pg = project_tangent(cur, grads);
    const double pg_norm = std::sqrt(total_norm_sq(pg));
    const double rel = pg_norm / (1.0 + std::abs(value));
    rep.history.push_back({value, rel, step});
    if (trace.is_open()) {
      trace << iter << ',' << value << ',' << rel << ',' << step << '\n';
    }
    rep.projected_grad_norm = rel;
    if (rel <= cfg.grad_tol) {
      rep.converged = true;
      break;
    }

    std::vector<ComplexField> dir;
    dir.reserve(pg.size());
    for (const auto& g : pg) dir.push_back(precondition(g, obj.precond));
    dir = project_tangent(cur, dir);
    const double dir_sq = total_norm_sq(dir);
    if (dir_sq <= 0.0) break;

    bool accepted = false;
    while (step >= 1e-14) {
      OrbitalSet trial = stepped(cur, dir, step);
      const double trial_value = obj.value(trial);
      if (trial_value <= value - cfg.armijo_c * step * dir_sq) {
        cur = std::move(trial);
        accepted = true;
        break;
      }
      step *= cfg.armijo_shrink;
    }
    if (!accepted) break;  // stalled at machine precision
    step = std::min(step * 2.0, 1e6);
  }

  rep.iterations = iter;
  rep.objective = value;
  rep.final_set = std::move(cur);

  // Multiplier extraction: diagonalize <w_i, H w_j> and rotate the frame
  // into the eigenbasis (gamma-invariant unitary mixing).
  if (obj.apply_H) {
    const int N = rep.final_set.count();
    std::vector<ComplexField> hw = obj.apply_H(rep.final_set);
    GramMatrix M(N, N);
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        M(i, j) = inner(rep.final_set.orbitals[i], hw[j]);
      }
    }
    const GramMatrix H = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<GramMatrix> es(H);
    rep.final_set = mix(rep.final_set, es.eigenvectors());
    hw = obj.apply_H(rep.final_set);
    rep.multipliers.resize(N);
    rep.el_residuals.resize(N);
    for (int j = 0; j < N; ++j) {
      rep.multipliers[j] = es.eigenvalues()(j);
      ComplexField r = hw[j];
      axpy_in_place(r, cdouble(-rep.multipliers[j]), rep.final_set.orbitals[j]);
      rep.el_residuals[j] = norm2(r);
    }
  }
  return rep;
}

std::vector<ComplexField> massive_apply_H(const OrbitalSet& set, double a,
                                          double m) {
  const RealField rho = density(set);
  const MultiplierSpectrum rel =
      make_multiplier(set.grid(), MultiplierKind::relativistic, m);
  const double c = 4.0 * a / 3.0;
  std::vector<ComplexField> out;
  out.reserve(set.count());
  for (int j = 0; j < set.count(); ++j) {
    ComplexField h = apply_multiplier(set.orbitals[j], rel);
    const auto& w = set.orbitals[j].values;
    for (std::size_t i = 0; i < h.values.size(); ++i) {
      h.values[i] -= (m + c * std::cbrt(rho.values[i])) * w[i];
    }
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<ComplexField> massless_apply_H(const OrbitalSet& set, double D) {
  const RealField rho = density(set);
  const MultiplierSpectrum ml =
      make_multiplier(set.grid(), MultiplierKind::massless);
  const double c = 4.0 * D / 3.0;
  std::vector<ComplexField> out;
  out.reserve(set.count());
  for (int j = 0; j < set.count(); ++j) {
    ComplexField h = apply_multiplier(set.orbitals[j], ml);
    const auto& w = set.orbitals[j].values;
    for (std::size_t i = 0; i < h.values.size(); ++i) {
      h.values[i] -= c * std::cbrt(rho.values[i]) * w[i];
    }
    out.push_back(std::move(h));
  }
  return out;
}

MultiplierSpectrum energy_precond(const GridPtr& grid, double m) {
  MultiplierSpectrum p = make_multiplier(grid, MultiplierKind::relativistic, m);
  for (auto& v : p.values) v = 1.0 / (1.0 + (v - m));
  return p;
}

// Project out the k = 0 mode (the field average).  The constant function
// has zero massless kinetic energy on the torus, so without this the
// quotient infimum degenerates to 0 through the DC mode, a pure
// finite-volume artifact; optimizer profiles decay like |x|^{-4} and their
// DC weight vanishes as the box grows.
void remove_dc(ComplexField& u) {
  cdouble mean(0.0);
  for (const auto& v : u.values) mean += v;
  mean /= static_cast<double>(u.values.size());
  for (auto& v : u.values) v -= mean;
}

MultiplierSpectrum quotient_precond(const GridPtr& grid) {
  MultiplierSpectrum p = make_multiplier(grid, MultiplierKind::massless);
  for (auto& v : p.values) v = 1.0 / (1.0 + v);
  return p;
}

}  // namespace

std::vector<ComplexField> project_tangent(
    const OrbitalSet& set, const std::vector<ComplexField>& grads) {
  const int N = set.count();
  GramMatrix M(N, N);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) {
      M(j, i) = inner(set.orbitals[j], grads[i]);
    }
  }
  const GramMatrix A = 0.5 * (M + M.adjoint());
  std::vector<ComplexField> out;
  out.reserve(N);
  for (int i = 0; i < N; ++i) {
    ComplexField d = grads[i];
    for (int j = 0; j < N; ++j) {
      axpy_in_place(d, -A(j, i), set.orbitals[j]);
    }
    out.push_back(std::move(d));
  }
  return out;
}

MinimizeReport minimize_energy(const OrbitalSet& init, double a, double m,
                               const MinimizeConfig& cfg) {
  const bool dc = cfg.dc_free;
  OrbitalSet start = init;
  if (dc) {
    // Mean-subtract the starting frame; tangent projection, the diagonal
    // preconditioner, and the Loewdin retraction preserve the sector, so
    // iterates stay DC-free once the raw gradients are projected too.
    for (auto& w : start.orbitals) remove_dc(w);
  }
  Objective obj;
  obj.value = [a, m](const OrbitalSet& s) { return energy(s, a, m).total; };
  obj.value_and_grad = [a, m, dc](const OrbitalSet& s, double& value) {
    value = energy(s, a, m).total;
    std::vector<ComplexField> grads = energy_gradient(s, a, m);
    if (dc) {
      for (auto& g : grads) remove_dc(g);
    }
    return grads;
  };
  obj.precond = energy_precond(init.grid(), m);
  obj.divergence_floor = -10.0 * m * init.count();
  obj.apply_H = [a, m, dc](const OrbitalSet& s) {
    std::vector<ComplexField> hw = massive_apply_H(s, a, m);
    if (dc) {
      // Stationarity holds in the DC-free sector; measure it there.
      for (auto& h : hw) remove_dc(h);
    }
    return hw;
  };
  return run_descent(start, obj, cfg);
}

MinimizeReport minimize_quotient(const OrbitalSet& init,
                                 const MinimizeConfig& cfg) {
  // Work in the DC-free sector: mean-subtract the starting frame and every
  // raw gradient.  Tangent projection, the diagonal preconditioner, and the
  // Loewdin retraction all preserve the sector, so iterates stay in it.
  OrbitalSet start = init;
  for (auto& w : start.orbitals) remove_dc(w);
  Objective obj;
  obj.value = [](const OrbitalSet& s) { return lt_quotient(s).quotient; };
  obj.value_and_grad = [](const OrbitalSet& s, double& value) {
    const QuotientReport q = lt_quotient(s);
    value = q.quotient;
    const RealField rho = density(s);
    const MultiplierSpectrum ml =
        make_multiplier(s.grid(), MultiplierKind::massless);
    const double c = 4.0 * q.quotient / 3.0;
    std::vector<ComplexField> grads;
    grads.reserve(s.count());
    for (int j = 0; j < s.count(); ++j) {
      ComplexField g = apply_multiplier(s.orbitals[j], ml);
      const auto& w = s.orbitals[j].values;
      for (std::size_t i = 0; i < g.values.size(); ++i) {
        g.values[i] =
            (2.0 / q.lp_interaction) *
            (g.values[i] - c * std::cbrt(rho.values[i]) * w[i]);
      }
      remove_dc(g);
      grads.push_back(std::move(g));
    }
    return grads;
  };
  obj.precond = quotient_precond(init.grid());
  obj.apply_H = [](const OrbitalSet& s) {
    // Stationarity holds in the DC-free sector (the Lagrange condition
    // picks up a constant-mode component), so measure it there too.
    std::vector<ComplexField> hw =
        massless_apply_H(s, lt_quotient(s).quotient);
    for (auto& h : hw) remove_dc(h);
    return hw;
  };
  return run_descent(start, obj, cfg);
}

OrbitalSet default_init(const GridPtr& grid, int N) {
  if (N < 1 || N > 4) throw ConfigError("default_init: N must be in 1..4");
  const double L = grid->box_length();
  const double mid = L / 2;
  const std::array<double, 3> c{mid, mid, mid};
  const ComplexField g0 = gaussian(grid, L / 8);
  OrbitalSet set;
  set.orbitals.push_back(g0);
  for (int axis = 0; axis + 1 < N; ++axis) {
    ComplexField w = multiply_coordinate(g0, axis, c);
    scale_in_place(w, 1.0 / norm2(w));
    set.orbitals.push_back(std::move(w));
  }
  set.occupations.assign(N, 1.0);
  return loewdin(set);
}

OrbitalSet perturbed_init(const GridPtr& grid, int N, std::uint64_t seed,
                          double amplitude) {
  OrbitalSet set = default_init(grid, N);
  if (seed == 0) return set;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  const auto& g = *grid;
  for (auto& w : set.orbitals) {
    SpectrumData noise{grid, std::vector<cdouble>(g.size(), cdouble(0.0))};
    for (int ix = 0; ix < g.n(); ++ix) {
      const int fx = g.frequency(ix);
      if (std::abs(fx) > 3) continue;
      for (int iy = 0; iy < g.n(); ++iy) {
        const int fy = g.frequency(iy);
        if (std::abs(fy) > 3) continue;
        for (int iz = 0; iz < g.n(); ++iz) {
          const int fz = g.frequency(iz);
          if (std::abs(fz) > 3) continue;
          const double decay =
              std::exp(-0.5 * (fx * fx + fy * fy + fz * fz));
          noise.coeff[g.index(ix, iy, iz)] =
              decay * cdouble(dist(rng), dist(rng));
        }
      }
    }
    ComplexField nf = from_spectrum(noise);
    // Localize the perturbation near the Gaussian core so tails stay thin.
    const ComplexField envelope = gaussian(grid, g.box_length() / 6);
    for (std::size_t i = 0; i < nf.values.size(); ++i) {
      nf.values[i] *= envelope.values[i];
    }
    const double nn = norm2(nf);
    if (nn > 0) axpy_in_place(w, amplitude / nn, nf);
  }
  return loewdin(set);
}

}  // namespace fermilt
