#include "fermilt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "fermilt/errors.hpp"

namespace fermilt {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  LineFit f;
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0 || n < 2) return f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double fit = f.intercept + f.slope * x[i];
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  f.r_squared = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

namespace {

// Split-pair start for N >= 2: identical lumps at moderate separation along
// the first axis.  The quotient landscape is nearly flat in the separation
// coordinate, so descent from a single-well start can settle in a slightly
// higher basin; seeding a separated pair reaches the lower one.
OrbitalSet pair_init(const GridPtr& grid, int N) {
  const double L = grid->box_length();
  const double mid = L / 2;
  const double R = L / 6;
  const double sigma = L / 12;
  OrbitalSet set;
  set.orbitals.push_back(gaussian_at(grid, sigma, {mid - R / 2, mid, mid}));
  set.orbitals.push_back(gaussian_at(grid, sigma, {mid + R / 2, mid, mid}));
  for (int j = 2; j < N; ++j) {
    ComplexField w =
        multiply_coordinate(set.orbitals[0], (j - 1) % 3, {mid, mid, mid});
    scale_in_place(w, 1.0 / norm2(w));
    set.orbitals.push_back(std::move(w));
  }
  set.occupations.assign(N, 1.0);
  return loewdin(set);
}

}  // namespace

EstimateDResult estimate_D(int N, const GridPtr& grid,
                           const MinimizeConfig& cfg, int starts,
                           bool refine_doubled, int refine_iters) {
  EstimateDResult res;
  double best = std::numeric_limits<double>::infinity();
  double worst = -std::numeric_limits<double>::infinity();
  const int total = (N >= 2) ? starts + 1 : starts;
  for (int s = 0; s < total; ++s) {
    MinimizeConfig run_cfg = cfg;
    run_cfg.seed = cfg.seed + s;
    const OrbitalSet init = (N >= 2 && s == total - 1)
                                ? pair_init(grid, N)
                                : perturbed_init(grid, N, run_cfg.seed);
    MinimizeReport rep = minimize_quotient(init, run_cfg);
    res.seed_values.push_back(rep.objective);
    worst = std::max(worst, rep.objective);
    if (rep.objective < best) {
      best = rep.objective;
      res.optimizer = rep.final_set;
      res.converged = rep.converged;
    }
  }
  res.value = best;
  res.spread = (worst - best) / best;
  res.massless_trace = lt_quotient(res.optimizer).massless_kinetic;

  if (refine_doubled) {
    OrbitalSet lifted;
    for (const auto& w : res.optimizer.orbitals) {
      lifted.orbitals.push_back(dilate_pow2(w, DilateDirection::up));
    }
    lifted.occupations.assign(lifted.orbitals.size(), 1.0);
    MinimizeConfig fine_cfg = cfg;
    fine_cfg.max_iters = refine_iters;
    const MinimizeReport fine = minimize_quotient(lifted, fine_cfg);
    res.refined_value = fine.objective;
    res.grid_doubling_delta = std::abs(fine.objective - res.value) / res.value;
  }
  return res;
}

DstarResult estimate_dstar(const std::vector<OrbitalSet>& optimizers) {
  if (optimizers.empty()) {
    throw ConfigError("estimate_dstar: needs at least one optimizer");
  }
  DstarResult res;
  res.value = std::numeric_limits<double>::infinity();
  for (const auto& set : optimizers) {
    const double d = dstar_product(set);
    if (d < res.value) {
      res.value = d;
      res.optimizer = set;
    }
  }
  // Report the DC bias in the same scale-invariant units: the product is
  // T * tr(gamma/sqrt(-Lap)) and the dropped DC term biases the second
  // factor, so multiply the raw estimate by T.
  res.dc_bias = dstar_dc_bias(res.optimizer) *
                lt_quotient(res.optimizer).massless_kinetic;
  return res;
}

OrbitalSet embed_in_doubled_box(const OrbitalSet& set) {
  const auto& g = *set.grid();
  GridPtr big = SpectralGrid::make(2 * g.n(), 2 * g.box_length());
  OrbitalSet out;
  const int off = g.n() / 2;  // center the old box inside the new one
  for (const auto& w : set.orbitals) {
    ComplexField v(big);
    for (int ix = 0; ix < g.n(); ++ix) {
      for (int iy = 0; iy < g.n(); ++iy) {
        for (int iz = 0; iz < g.n(); ++iz) {
          v.values[big->index(ix + off, iy + off, iz + off)] =
              w.values[g.index(ix, iy, iz)];
        }
      }
    }
    scale_in_place(v, 1.0 / norm2(v));
    out.orbitals.push_back(std::move(v));
  }
  out.occupations.assign(out.orbitals.size(), 1.0);
  return loewdin(out);
}

BindingResult binding_check(double a, double m, const GridPtr& grid,
                            const MinimizeConfig& cfg) {
  BindingResult res;
  const MinimizeReport r1 = minimize_energy(default_init(grid, 1), a, m, cfg);
  const MinimizeReport r2 = minimize_energy(default_init(grid, 2), a, m, cfg);
  res.E1 = r1.objective;
  res.E2 = r2.objective;
  res.margin = 2.0 * res.E1 - res.E2;
  res.converged = r1.converged && r2.converged;
  const double tol = 10.0 * cfg.grad_tol * (1.0 + std::abs(res.E2));
  res.strict = res.E2 < 2.0 * res.E1 - tol;
  return res;
}

std::vector<RankSplitRow> rank_splitting_check(
    const OrbitalSet& base, const std::vector<double>& R_list) {
  std::vector<RankSplitRow> rows;
  const std::array<double, 3> e1{1.0, 0.0, 0.0};
  for (const double R : R_list) {
    RankSplitRow row;
    row.R = R;
    double emax = 0.0;
    const std::array<double, 3> shift{R, 0.0, 0.0};
    for (const auto& wi : base.orbitals) {
      const ComplexField wshift = translate(wi, shift);
      for (const auto& wj : base.orbitals) {
        emax = std::max(emax, std::abs(inner(wj, wshift)));
      }
    }
    row.max_overlap = emax;
    row.quotient = lt_quotient(translated_pair(base, R, e1)).quotient;
    rows.push_back(row);
  }
  return rows;
}

CollapseResult collapse_probe(double a, double m, const OrbitalSet& base,
                              int t_steps) {
  CollapseResult res;
  const QuotientReport q = lt_quotient(base);
  res.base_quotient = q.quotient;
  res.predicted_slope = (1.0 - a / q.quotient) * q.massless_kinetic;
  res.floor = -static_cast<double>(base.count()) * m;

  const auto& g = *base.grid();
  std::vector<SpectrumData> spectra;
  for (const auto& w : base.orbitals) spectra.push_back(to_spectrum(w));
  const double P = q.lp_interaction;

  for (int j = 0; j < t_steps; ++j) {
    const double t = std::pow(2.0, j);
    double kinetic = 0.0;
    for (const auto& wh : spectra) {
      for (std::size_t i = 0; i < wh.coeff.size(); ++i) {
        const double tk = t * g.k_norm(i);
        kinetic += tk * tk / (std::sqrt(tk * tk + m * m) + m) *
                   std::norm(wh.coeff[i]);
      }
    }
    res.rows.push_back({t, kinetic - t * a * P});
  }

  if (res.rows.size() >= 2) {
    const auto& r1 = res.rows[res.rows.size() - 2];
    const auto& r2 = res.rows.back();
    res.slope = (r2.energy - r1.energy) / (r2.t - r1.t);
  }
  return res;
}

namespace {
void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRecord>& records, double D2,
                     double m);
}

std::vector<SweepRecord> sweep_a(const std::vector<double>& ratios, double m,
                                 double D2, const GridPtr& grid,
                                 const SweepConfig& cfg) {
  const double cell = grid->spacing();
  const double eps_target = cfg.eps_target_cells * cell;

  // Near the threshold the energy landscape has two branches: a broad
  // metastable state at O(1) scale and the true ground state, a shrinking
  // core at scale eps ~ sqrt(2 delta / d_*) whose energy lies below the
  // dilated-optimizer bound m sqrt(2 delta d_*).  A cold start relaxes
  // onto the broad branch, so every record is seeded on the core branch:
  // first compute a massless-quotient optimizer on this grid (the core
  // profile, scale-invariant), measure its own product constant, and then
  // solve each record in a dilated frame (mass m/t, energies scaled back
  // by t; the covariance E_{a,m} = t E_{a,m/t} is exact) chosen so the
  // predicted core covers eps_target on the lattice.
  MinimizeConfig seed_cfg = cfg.solver;
  const MinimizeReport seed = minimize_quotient(default_init(grid, 2), seed_cfg);
  const double d_local =
      seed.converged ? dstar_product(seed.final_set) : cfg.dstar_guess;

  // Solve one record at effective gap delta (frame from the asymptotic
  // scale law).  The frame must NOT be steered toward the measured scale:
  // discretization penalizes states narrower than a few cells, so a
  // too-small t parks the minimizer on that resolution floor above the
  // true ground state.  With t fixed by the predicted scale every record
  // shares the same box-to-scale geometry and the finite-grid bias enters
  // as a constant shift of the effective threshold (calibrated below).
  // Record solves run at mass m/t with t large; they must stay DC-free or
  // the spurious uniform branch of the torus (constant orbitals: zero
  // massless kinetic cost, finite interaction gain) undercuts -2m once
  // m t^{-1} L falls below ~a.  The physical core carries negligible DC
  // weight, so the restriction is benign.
  MinimizeConfig rec_cfg = cfg.solver;
  rec_cfg.dc_free = true;

  OrbitalSet warm = seed.final_set;
  auto run_record = [&](double a, double delta, double d_use) {
    const double eps_phys_pred = std::sqrt(2.0 * delta / (m * m * d_use));
    double t = std::max(1.0, eps_target / eps_phys_pred);
    OrbitalSet init = warm;

    SweepRecord rec;
    rec.a = a;
    rec.grid_n = grid->n();
    rec.grid_L = grid->box_length();
    rec.threshold = D2;
    rec.frame_scale = t;
    try {
      for (int pass = 0; pass < 2; ++pass) {
        const MinimizeReport rep = minimize_energy(init, a, m / t, rec_cfg);
        const QuotientReport qr = lt_quotient(rep.final_set);
        const double eps_frame = 1.0 / qr.massless_kinetic;
        rec.frame_scale = t;
        rec.E = t * rep.objective;
        rec.eps = eps_frame / t;
        rec.mu1 = rep.multipliers.size() > 0 ? t * rep.multipliers[0] : 0.0;
        rec.mu2 = rep.multipliers.size() > 1 ? t * rep.multipliers[1] : 0.0;
        rec.grad_norm = rep.projected_grad_norm;
        rec.iterations = rep.iterations;
        rec.converged = rep.converged;
        rec.resolution_flag = eps_frame < 4.0 * cell;
        if (!rep.converged || !rec.resolution_flag || pass == 1) {
          if (rec.converged) init = rep.final_set;
          break;
        }
        // Under-resolved core: enlarging t (never shrinking) is safe and
        // re-centers the state on the lattice; rerun warm-started.
        t *= eps_target / eps_frame;
        init = rep.final_set;
      }
      // For a below the effective threshold the ground energy stays
      // strictly above -2m; anything lower has drained into a grid-scale
      // state and is not physical.
      if (rec.E < -2.0 * m) rec.converged = false;
      if (rec.converged) warm = init;
    } catch (const DivergingObjective&) {
      rec.converged = false;  // descent crossed the collapse guard
    }
    return rec;
  };

  // Iterative threshold calibration.  The finite box shifts the effective
  // blow-up threshold: records near the shifted threshold collapse below
  // -2m even though their nominal gap is positive.  The shift is not
  // constant across the sweep -- at moderate gaps the massive tail is
  // exponentially confined inside the box and the shift is small, while
  // in the small-gap limit the box sits entirely in the algebraic-tail
  // regime and the shift saturates at its asymptotic value.  A single
  // linear extrapolation from moderate-gap records therefore
  // underestimates the asymptotic shift, so the calibration is iterated:
  // each pass runs the sweep at a = ratio * A against the current
  // threshold estimate A, refits A from the linear law
  // (E+2m)^2 = (2 d / D2) * (A - a) using the smallest-gap usable
  // records (the ones closest to the asymptotic regime), and repeats
  // until A is stationary.  As the usable window moves toward the
  // threshold the estimate decreases monotonically onto the asymptotic
  // value.
  double A = D2;
  double d_cal = d_local;
  std::vector<SweepRecord> records;
  const double r_max = ratios.back();
  const double tol_A = 0.25 * D2 * (1.0 - r_max);
  const int max_passes = 5;
  for (int p = 0; p < max_passes; ++p) {
    warm = seed.final_set;
    records.clear();
    for (const double ratio : ratios) {
      const double a = ratio * A;
      SweepRecord rec = run_record(a, (A - a) / D2, d_cal);
      rec.threshold = A;
      records.push_back(rec);
    }

    // Refit the threshold from the (up to four) smallest-gap usable
    // records; three points are the minimum for a trustworthy
    // two-parameter line.
    std::vector<double> xs, ys;
    for (auto it = records.rbegin(); it != records.rend(); ++it) {
      if (it->converged && !it->resolution_flag && it->E + 2.0 * m > 0.0 &&
          xs.size() < 4) {
        xs.push_back(it->a);
        ys.push_back((it->E + 2.0 * m) * (it->E + 2.0 * m) / (m * m));
      }
    }
    if (xs.size() < 3) break;
    const LineFit lf = fit_line(xs, ys);
    const double A_fit = -lf.intercept / lf.slope;
    const double d_fit = -lf.slope * D2 / 2.0;
    // Sanity guards: the threshold moves down by at most ~10% and the
    // implied constant stays of the expected magnitude; otherwise the fit
    // is untrustworthy and the current records stand.
    if (!(lf.slope < 0.0) || A_fit > 1.02 * D2 || A_fit < 0.90 * D2 ||
        d_fit < 2.0 || d_fit > 30.0) {
      break;
    }
    d_cal = d_fit;
    if (std::abs(A_fit - A) < tol_A) break;  // self-consistent
    A = A_fit;
  }

  if (!cfg.csv_path.empty()) {
    write_sweep_csv(cfg.csv_path, records, records.front().threshold, m);
  }
  return records;
}

namespace {
void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRecord>& records, double D2,
                     double m) {
  std::ofstream out(path);
  if (!out) throw IoError("sweep: cannot open CSV path " + path);
  out.precision(17);
  out << "a,D_minus_a,E,E_plus_2m,eps,mu1,mu2,converged\n";
  for (const auto& r : records) {
    out << r.a << ',' << (D2 - r.a) << ',' << r.E << ',' << (r.E + 2 * m)
        << ',' << r.eps << ',' << r.mu1 << ',' << r.mu2 << ','
        << (r.converged ? 1 : 0) << '\n';
  }
}
}  // namespace

ScalingFit fit_scaling(const std::vector<SweepRecord>& records, FitTarget target,
                       double D2, double m, double exclude_below) {
  std::vector<double> x, y;
  ScalingFit fit;
  fit.window_a_min = std::numeric_limits<double>::infinity();
  fit.window_a_max = -std::numeric_limits<double>::infinity();
  double smallest_gap = std::numeric_limits<double>::infinity();
  double d_implied = 0.0;
  for (const auto& r : records) {
    const double gap = D2 - r.a;
    if (!r.converged || r.resolution_flag || gap <= exclude_below || gap <= 0) {
      continue;
    }
    const double value =
        (target == FitTarget::eps_law) ? r.eps : (r.E + 2.0 * m);
    if (value <= 0) continue;
    x.push_back(std::log(gap));
    y.push_back(std::log(value));
    fit.window_a_min = std::min(fit.window_a_min, r.a);
    fit.window_a_max = std::max(fit.window_a_max, r.a);
    if (gap < smallest_gap) {
      smallest_gap = gap;
      d_implied = (r.E + 2.0 * m) * (r.E + 2.0 * m) * D2 / (2.0 * m * m * gap);
    }
  }
  if (x.size() < 4) {
    throw InsufficientRecords("fit_scaling: needs >= 4 usable records, got " +
                              std::to_string(x.size()));
  }
  const LineFit lf = fit_line(x, y);
  fit.exponent = lf.slope;
  fit.prefactor = std::exp(lf.intercept);
  fit.r_squared = lf.r_squared;
  fit.points_used = static_cast<int>(x.size());
  if (target == FitTarget::energy_law) fit.d_implied = d_implied;
  return fit;
}

TailFit tail_fit(const ComplexField& orbital, std::array<double, 3> center,
                 double r_lo, double r_hi, TailModel model) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo)) {
    throw ConfigError("tail_fit: window must satisfy 0 < r_lo < r_hi");
  }
  const auto& g = *orbital.grid;
  const double L = g.box_length();
  const double cell = g.spacing();
  const int nbins = static_cast<int>(std::ceil(L / (2 * cell)));
  std::vector<double> sum(nbins, 0.0);
  std::vector<int> count(nbins, 0);

  auto min_image = [L](double d) {
    d = std::fmod(d, L);
    if (d < -L / 2) d += L;
    if (d >= L / 2) d -= L;
    return d;
  };

  for (int ix = 0; ix < g.n(); ++ix) {
    const double dx = min_image(g.axis_coordinate(ix) - center[0]);
    for (int iy = 0; iy < g.n(); ++iy) {
      const double dy = min_image(g.axis_coordinate(iy) - center[1]);
      for (int iz = 0; iz < g.n(); ++iz) {
        const double dz = min_image(g.axis_coordinate(iz) - center[2]);
        const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
        const int bin = static_cast<int>(r / cell);
        if (bin < nbins) {
          sum[bin] += std::abs(orbital.values[g.index(ix, iy, iz)]);
          count[bin] += 1;
        }
      }
    }
  }

  std::vector<double> x, y;
  for (int b = 0; b < nbins; ++b) {
    if (count[b] == 0) continue;
    const double r = (b + 0.5) * cell;
    if (r < r_lo || r > r_hi) continue;
    const double avg = sum[b] / count[b];
    if (avg <= 0) continue;
    x.push_back(model == TailModel::algebraic ? std::log(r) : r);
    y.push_back(std::log(avg));
  }
  TailFit tf;
  tf.points_used = static_cast<int>(x.size());
  if (x.size() < 3) return tf;
  const LineFit lf = fit_line(x, y);
  tf.slope = lf.slope;
  tf.r_squared = lf.r_squared;
  return tf;
}

}  // namespace fermilt
