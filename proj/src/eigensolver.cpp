#include "fermilt/eigensolver.hpp"

#include <cmath>
#include <limits>

#include "fermilt/errors.hpp"

namespace fermilt {

namespace {

RealField attractive_potential(const RealField& rho, double coeff) {
  RealField v = rho;
  for (auto& x : v.values) x = -coeff * std::cbrt(x);
  return v;
}

// Loewdin orthonormalization that drops near-null directions instead of
// throwing; used for the Rayleigh-Ritz trial basis.
std::vector<ComplexField> orthonormal_basis(
    const std::vector<ComplexField>& fields) {
  const int N = static_cast<int>(fields.size());
  GramMatrix G(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      cdouble v = inner(fields[i], fields[j]);
      G(i, j) = v;
      G(j, i) = std::conj(v);
    }
  }
  Eigen::SelfAdjointEigenSolver<GramMatrix> es(G);
  const double lmax = es.eigenvalues().maxCoeff();
  std::vector<int> keep;
  for (int i = 0; i < N; ++i) {
    if (es.eigenvalues()(i) > 1e-10 * lmax) keep.push_back(i);
  }
  std::vector<ComplexField> basis;
  basis.reserve(keep.size());
  for (int c : keep) {
    ComplexField b(fields.front().grid);
    const double s = 1.0 / std::sqrt(es.eigenvalues()(c));
    for (int j = 0; j < N; ++j) {
      axpy_in_place(b, s * es.eigenvectors()(j, c), fields[j]);
    }
    basis.push_back(std::move(b));
  }
  return basis;
}

MultiplierSpectrum eig_precond(const LinearizedOperator& op) {
  MultiplierSpectrum p = op.mult;
  for (auto& v : p.values) v = 1.0 / (1.0 + v);
  return p;
}

}  // namespace

LinearizedOperator massive_linearization(const RealField& rho, double a,
                                         double m) {
  LinearizedOperator op;
  op.mult = make_multiplier(rho.grid, MultiplierKind::relativistic, m);
  op.potential = attractive_potential(rho, 4.0 * a / 3.0);
  op.shift = -m;
  return op;
}

LinearizedOperator massive_linearization(const OrbitalSet& set, double a,
                                         double m) {
  return massive_linearization(density(set), a, m);
}

LinearizedOperator massless_linearization(const OrbitalSet& set, double D) {
  LinearizedOperator op;
  op.mult = make_multiplier(set.grid(), MultiplierKind::massless);
  op.potential = attractive_potential(density(set), 4.0 * D / 3.0);
  op.shift = 0.0;
  return op;
}

ComplexField apply_H(const LinearizedOperator& op, const ComplexField& u) {
  require_same_grid(*op.mult.grid, *u.grid);
  ComplexField out = apply_multiplier(u, op.mult);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] += (op.potential.values[i] + op.shift) * u.values[i];
  }
  return out;
}

EigenReport lowest_eigenpairs(const LinearizedOperator& op, int k, double tol,
                              int max_iters, const OrbitalSet* warm) {
  if (k < 1 || k > 4) throw ConfigError("lowest_eigenpairs: k must be in 1..4");
  const GridPtr grid = op.mult.grid;
  const MultiplierSpectrum precond = eig_precond(op);

  std::vector<ComplexField> X;
  if (warm != nullptr && warm->count() >= k &&
      warm->grid()->same_as(*grid)) {
    for (int i = 0; i < k; ++i) X.push_back(warm->orbitals[i]);
  } else {
    OrbitalSet seed = default_init(grid, k);
    X = std::move(seed.orbitals);
  }
  X = orthonormal_basis(X);

  std::vector<ComplexField> P;
  EigenReport rep;
  for (int iter = 0; iter < max_iters; ++iter) {
    rep.iterations = iter + 1;

    // Rayleigh-Ritz on X, rotate into the Ritz basis.
    std::vector<ComplexField> HX;
    HX.reserve(X.size());
    for (const auto& x : X) HX.push_back(apply_H(op, x));
    GramMatrix M(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) M(i, j) = inner(X[i], HX[j]);
    }
    Eigen::SelfAdjointEigenSolver<GramMatrix> rr(0.5 * (M + M.adjoint()));
    std::vector<ComplexField> Xr, HXr;
    for (int c = 0; c < k; ++c) {
      ComplexField xr(grid), hxr(grid);
      for (int j = 0; j < k; ++j) {
        axpy_in_place(xr, rr.eigenvectors()(j, c), X[j]);
        axpy_in_place(hxr, rr.eigenvectors()(j, c), HX[j]);
      }
      Xr.push_back(std::move(xr));
      HXr.push_back(std::move(hxr));
    }
    X = std::move(Xr);
    HX = std::move(HXr);

    rep.eigenvalues.assign(k, 0.0);
    rep.residuals.assign(k, 0.0);
    std::vector<ComplexField> R;
    bool all_converged = true;
    for (int i = 0; i < k; ++i) {
      rep.eigenvalues[i] = rr.eigenvalues()(i);
      ComplexField r = HX[i];
      axpy_in_place(r, cdouble(-rep.eigenvalues[i]), X[i]);
      rep.residuals[i] = norm2(r);
      if (rep.residuals[i] > tol * std::max(1.0, std::abs(rep.eigenvalues[i]))) {
        all_converged = false;
      }
      R.push_back(std::move(r));
    }
    if (all_converged) {
      rep.converged = true;
      break;
    }

    // Expand with preconditioned residuals and the previous step directions.
    // Project out span(X) and renormalize each direction so that small
    // residual norms rescale instead of falling under the rank-drop
    // threshold of the Loewdin basis (which would stall the iteration).
    std::vector<ComplexField> trial = X;
    auto add_direction = [&](ComplexField d) {
      for (const auto& x : X) axpy_in_place(d, -inner(x, d), x);
      const double nrm = norm2(d);
      if (nrm > 1e-14) {
        scale_in_place(d, 1.0 / nrm);
        trial.push_back(std::move(d));
      }
    };
    for (const auto& r : R) add_direction(apply_multiplier(r, precond));
    for (const auto& p : P) add_direction(p);
    std::vector<ComplexField> B = orthonormal_basis(trial);

    std::vector<ComplexField> HB;
    HB.reserve(B.size());
    for (const auto& b : B) HB.push_back(apply_H(op, b));
    const int nb = static_cast<int>(B.size());
    GramMatrix A(nb, nb);
    for (int i = 0; i < nb; ++i) {
      for (int j = 0; j < nb; ++j) A(i, j) = inner(B[i], HB[j]);
    }
    Eigen::SelfAdjointEigenSolver<GramMatrix> es(0.5 * (A + A.adjoint()));

    std::vector<ComplexField> Xnew;
    for (int c = 0; c < k; ++c) {
      ComplexField x(grid);
      for (int j = 0; j < nb; ++j) {
        axpy_in_place(x, es.eigenvectors()(j, c), B[j]);
      }
      Xnew.push_back(std::move(x));
    }
    // Conjugate directions: the part of the update orthogonal to old X.
    std::vector<ComplexField> Pnew;
    for (int c = 0; c < k; ++c) {
      ComplexField p = Xnew[c];
      for (int j = 0; j < k; ++j) {
        axpy_in_place(p, -inner(X[j], Xnew[c]), X[j]);
      }
      Pnew.push_back(std::move(p));
    }
    X = std::move(Xnew);
    P = std::move(Pnew);
  }

  rep.vectors = OrbitalSet(std::move(X));
  return rep;
}

ScfResult scf_solve(const GridPtr& grid, double a, double m, int N,
                    const ScfConfig& cfg) {
  ScfResult res;
  OrbitalSet set = perturbed_init(grid, N, cfg.seed);
  RealField rho = density(set);
  double mixing = cfg.mixing;
  double prev_delta = std::numeric_limits<double>::infinity();
  int rises = 0;
  const OrbitalSet* warm = nullptr;

  double step_tol = 1e-3;
  const double step_tol_floor = std::max(cfg.eig_tol, 0.05 * cfg.tol);
  int streak = 0;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    res.iterations = iter + 1;
    const LinearizedOperator op = massive_linearization(rho, a, m);
    // Loose eigensolves while the density is still moving; full tolerance
    // once the fixed point is reached.
    res.eig = lowest_eigenpairs(op, N, std::max(step_tol, step_tol_floor),
                                100, warm);
    set = res.eig.vectors;
    warm = &set;
    const RealField rho_new = density(set);
    double delta = 0.0;
    for (std::size_t i = 0; i < rho.values.size(); ++i) {
      delta += std::abs(rho.values[i] - rho_new.values[i]);
    }
    delta *= grid->cell_volume() / N;
    step_tol = std::min(step_tol, 0.03 * delta);
    if (delta <= cfg.tol) {
      res.eig = lowest_eigenpairs(op, N, cfg.eig_tol, 400, warm);
      set = res.eig.vectors;
      res.converged = true;
      rho = rho_new;
      break;
    }
    // Genuine oscillation (not eigensolve noise) halves the mixing; a
    // steady contraction ramps it up toward its ceiling.
    if (delta > 1.2 * prev_delta) {
      streak = 0;
      if (++rises >= 2) {
        mixing = std::max(mixing / 2.0, 0.02);
        res.oscillation = true;
        rises = 0;
      }
    } else if (delta < prev_delta) {
      rises = 0;
      if (++streak >= 5) {
        mixing = std::min(mixing * 1.3, 0.8);
        streak = 0;
      }
    }
    prev_delta = delta;
    for (std::size_t i = 0; i < rho.values.size(); ++i) {
      rho.values[i] = (1.0 - mixing) * rho.values[i] + mixing * rho_new.values[i];
    }
  }

  res.set = std::move(set);
  res.energy_total = energy(res.set, a, m).total;
  res.final_mixing = mixing;
  return res;
}

}  // namespace fermilt
