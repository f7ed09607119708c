#pragma once

// Independent reference computations used to pin expected values in the
// test suites: radial quadrature against closed-form Gaussian transforms,
// dense diagonalization on a tiny grid, and finite-difference derivatives.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "fermilt/eigensolver.hpp"
#include "fermilt/field.hpp"

namespace oracle {

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1] via the Jacobi-matrix eigenproblem.
inline Quadrature gauss_legendre(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = b;
    J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Quadrature q;
  for (int i = 0; i < n; ++i) {
    q.nodes.push_back(es.eigenvalues()(i));
    const double w0 = es.eigenvectors()(0, i);
    q.weights.push_back(2.0 * w0 * w0);
  }
  return q;
}

inline double integrate(const std::function<double(double)>& f, double lo,
                        double hi, int order = 200) {
  const Quadrature q = gauss_legendre(order);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int i = 0; i < order; ++i) {
    acc += q.weights[i] * f(mid + half * q.nodes[i]);
  }
  return acc * half;
}

// <g, s(|k|) g> for the unit-L2 Gaussian exp(-|x|^2/(2 sigma^2)) on R^3:
// (4/sqrt(pi)) sigma^3 int_0^inf s(k) k^2 exp(-sigma^2 k^2) dk.
inline double gaussian_form(const std::function<double(double)>& s,
                            double sigma) {
  const double pref = 4.0 / std::sqrt(M_PI) * sigma * sigma * sigma;
  return pref * integrate(
                    [&](double k) {
                      return s(k) * k * k * std::exp(-sigma * sigma * k * k);
                    },
                    0.0, 16.0 / sigma);
}

// Same form for the unit-L2 odd partner (sqrt(2)/sigma) x1 g:
// (2 sigma^2/3)(4/sqrt(pi)) sigma^3 int s(k) k^4 exp(-sigma^2 k^2) dk.
inline double gaussian_p_form(const std::function<double(double)>& s,
                              double sigma) {
  const double pref =
      2.0 * sigma * sigma / 3.0 * 4.0 / std::sqrt(M_PI) * sigma * sigma * sigma;
  return pref * integrate(
                    [&](double k) {
                      return s(k) * std::pow(k, 4) *
                             std::exp(-sigma * sigma * k * k);
                    },
                    0.0, 16.0 / sigma);
}

// Exact lattice sum of s(|k|) against the analytic Gaussian spectrum
// exp(-sigma^2 k^2) on the n^3 frequency grid of a box of side L,
// normalized to unit total weight.  This is the discrete counterpart of
// gaussian_form: for symbols with a singularity or cone at k = 0 (|k|,
// 1/|k|) the lattice and continuum values differ algebraically in L, so
// discrete quadratic forms must be pinned against this sum instead.
inline double lattice_form(const std::function<double(double)>& s, int n,
                           double L, double sigma, bool drop_dc = false) {
  const double kmin = 2.0 * M_PI / L;
  double num = 0.0, den = 0.0;
  for (int fx = -n / 2; fx < n / 2; ++fx) {
    for (int fy = -n / 2; fy < n / 2; ++fy) {
      for (int fz = -n / 2; fz < n / 2; ++fz) {
        const double k =
            kmin * std::sqrt(double(fx * fx + fy * fy + fz * fz));
        const double w = std::exp(-sigma * sigma * k * k);
        den += w;
        if (k == 0.0 && drop_dc) continue;
        num += w * s(k);
      }
    }
  }
  return num / den;
}

// int rho^{4/3} for rho = |g|^2, g the unit-L2 Gaussian:
// (3/4)^{3/2} pi^{-1/2} / sigma.
inline double lp43_gaussian(double sigma) {
  return std::pow(0.75, 1.5) / (std::sqrt(M_PI) * sigma);
}

// int rho^{4/3} for the pair {g, (sqrt(2)/sigma) x1 g}:
// rho = |g|^2 (1 + 2 x1^2/sigma^2) separates into a closed Gauss factor
// in (x2, x3) and a 1D quadrature in x1.
inline double lp43_pair(double sigma) {
  const double A2 = std::pow(M_PI * sigma * sigma, -1.5);  // peak of |g|^2
  const double perp = 3.0 * M_PI * sigma * sigma / 4.0;
  const double axial = integrate(
      [&](double x) {
        return std::exp(-4.0 * x * x / (3.0 * sigma * sigma)) *
               std::pow(1.0 + 2.0 * x * x / (sigma * sigma), 4.0 / 3.0);
      },
      0.0, 12.0 * sigma);
  return std::pow(A2, 4.0 / 3.0) * perp * 2.0 * axial;
}

// Dense matrix of a linearized operator on a small grid (use 8^3 only).
inline Eigen::MatrixXcd dense_operator(const fermilt::LinearizedOperator& op) {
  const auto& grid = *op.mult.grid;
  const int n = static_cast<int>(grid.size());
  Eigen::MatrixXcd H(n, n);
  for (int j = 0; j < n; ++j) {
    fermilt::ComplexField e(op.mult.grid);
    e.values[j] = 1.0 / std::sqrt(grid.cell_volume());
    const fermilt::ComplexField he = fermilt::apply_H(op, e);
    for (int i = 0; i < n; ++i) {
      H(i, j) = he.values[i] * std::sqrt(grid.cell_volume());
    }
  }
  return H;
}

inline std::vector<double> dense_lowest(const fermilt::LinearizedOperator& op,
                                        int k) {
  Eigen::MatrixXcd H = dense_operator(op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 *
                                                     (H + H.adjoint()));
  std::vector<double> vals;
  for (int i = 0; i < k; ++i) vals.push_back(es.eigenvalues()(i));
  return vals;
}

inline fermilt::ComplexField random_field(const fermilt::GridPtr& grid,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  fermilt::ComplexField f(grid);
  for (auto& v : f.values) v = fermilt::cdouble(dist(rng), dist(rng));
  fermilt::scale_in_place(f, 1.0 / fermilt::norm2(f));
  return f;
}

// Central finite difference of a scalar functional along a direction.
inline double directional_derivative(
    const std::function<double(const fermilt::OrbitalSet&)>& f,
    const fermilt::OrbitalSet& at, const std::vector<fermilt::ComplexField>& h,
    double step = 1e-5) {
  fermilt::OrbitalSet plus = at, minus = at;
  for (int i = 0; i < at.count(); ++i) {
    fermilt::axpy_in_place(plus.orbitals[i], step, h[i]);
    fermilt::axpy_in_place(minus.orbitals[i], -step, h[i]);
  }
  return (f(plus) - f(minus)) / (2.0 * step);
}

}  // namespace oracle
