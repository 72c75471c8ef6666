#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/potential.hpp"
#include "bosegas/summation.hpp"

// Lowest Neumann eigenfunction of the rescaled two-body problem on a ball:
// find the smallest lambda with (-Laplacian + (1/2) n^2 v(n .)) f = lambda f
// on |x| <= ell0, radial, with f'(ell0) = 0, normalized to f(ell0) = 1.
// The associated coefficient profile is eta(r) = -n (1 - f(r)) (equal to -n
// inside a hard core), whose Fourier coefficients over a unit torus feed the
// quasi-free trial states.
namespace bosegas::scattering {

struct NeumannSolution {
  std::vector<double> r, u, f, eta;  // u = r f on the uniform grid
  double lambda = 0.0;
  double ell0 = 0.0;
  double n_scale = 0.0;
  double core_radius = 0.0;  // inner grid start (R/n for a hard core)
  double grid_step = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

namespace detail {
// Tridiagonal solve (Thomas algorithm), general nonsymmetric.
inline void tridiag_solve(const std::vector<double>& sub,
                          const std::vector<double>& diag,
                          const std::vector<double>& sup,
                          std::vector<double> rhs, std::vector<double>& x) {
  const std::size_t m = diag.size();
  std::vector<double> c(m, 0.0);
  double piv = diag[0];
  c[0] = sup[0] / piv;
  rhs[0] /= piv;
  for (std::size_t i = 1; i < m; ++i) {
    piv = diag[i] - sub[i] * c[i - 1];
    if (i + 1 < m) c[i] = sup[i] / piv;
    rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / piv;
  }
  x = rhs;
  for (std::size_t i = m - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
}
}  // namespace detail

inline NeumannSolution solve_neumann(const RadialPotential& v, double n_scale,
                                     double ell0,
                                     std::size_t grid_points = 4097) {
  if (!(n_scale > 0.0) || !(ell0 > 0.0))
    throw DomainError("n_scale and ell0 must be positive");
  if (!(v.range() / n_scale < ell0))
    throw GeometryError("rescaled potential support must fit inside the ball");
  if (grid_points < 64) throw DomainError("grid_points must be at least 64");

  const RadialPotential w = v.scaled(n_scale);
  const bool hard = v.kind() == RadialPotential::Kind::hard_core;
  const double start = hard ? w.range() : 0.0;
  const std::size_t n = grid_points | std::size_t{1};
  const double h = (ell0 - start) / static_cast<double>(n - 1);

  NeumannSolution sol;
  sol.ell0 = ell0;
  sol.n_scale = n_scale;
  sol.core_radius = start;
  sol.grid_step = h;
  sol.r.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    sol.r[i] = start + h * static_cast<double>(i);

  // Unknowns u_1..u_{n-1} (Dirichlet u = 0 at the inner end). The Neumann
  // condition f'(ell0) = 0 translates to u'(ell0) = u(ell0)/ell0; eliminating
  // the ghost node turns the last row into 2(1 - h/ell0)/h^2 on the diagonal
  // with -2/h^2 below.
  const std::size_t m = n - 1;
  std::vector<double> sub(m, -1.0 / (h * h)), diag(m), sup(m, -1.0 / (h * h));
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = k + 1;
    double g = 0.0;
    if (!hard && sol.r[i] - 0.5 * h < w.range()) {
      g = 0.5 * w.cell_average(std::max(start, sol.r[i] - 0.5 * h),
                               std::min(ell0, sol.r[i] + 0.5 * h));
    }
    diag[k] = 2.0 / (h * h) + g;
  }
  sub[0] = 0.0;
  sup[m - 1] = 0.0;
  diag[m - 1] = 2.0 * (1.0 - h / ell0) / (h * h) +
                diag[m - 1] - 2.0 / (h * h);  // keep the potential term
  sub[m - 1] = -2.0 / (h * h);

  const auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t k = 0; k < m; ++k) {
      y[k] = diag[k] * x[k];
      if (k > 0) y[k] += sub[k] * x[k - 1];
      if (k + 1 < m) y[k] += sup[k] * x[k + 1];
    }
  };

  // Inverse iteration with fixed shift -1 (the spectrum is non-negative, so
  // A + I is safely invertible) plus Rayleigh-quotient eigenvalue estimates.
  // The raw residual norm bottoms out near eps * ||A|| ~ eps / h^2, but the
  // Rayleigh quotient converges quadratically in it, so the stopping rule is
  // a 1e-10 relative increment of the eigenvalue on two consecutive sweeps.
  std::vector<double> dshift(diag);
  for (auto& d : dshift) d += 1.0;
  std::vector<double> x(m, 1.0), y(m), ax(m);
  double lambda = 0.0, res = 0.0;
  const int max_iter = 200;
  int it = 0, settled = 0;
  double lambda_prev = std::numeric_limits<double>::infinity();
  for (it = 1; it <= max_iter; ++it) {
    detail::tridiag_solve(sub, dshift, sup, x, y);
    double nrm = 0.0;
    for (double yi : y) nrm += yi * yi;
    nrm = std::sqrt(nrm);
    for (std::size_t k = 0; k < m; ++k) x[k] = y[k] / nrm;
    apply(x, ax);
    double num = 0.0;
    for (std::size_t k = 0; k < m; ++k) num += x[k] * ax[k];
    lambda = num;
    double r2 = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double d = ax[k] - lambda * x[k];
      r2 += d * d;
    }
    res = std::sqrt(r2);
    settled = (std::abs(lambda - lambda_prev) <=
               1e-10 * std::max(1.0, std::abs(lambda)))
                  ? settled + 1
                  : 0;
    if (settled >= 2) break;
    lambda_prev = lambda;
  }
  if (settled < 2)
    throw NonConvergence("inverse iteration did not settle the eigenvalue");

  sol.lambda = lambda;
  sol.residual = res;
  sol.iterations = it;

  // Assemble u on the full grid, sign-fixed and normalized to f(ell0) = 1.
  sol.u.assign(n, 0.0);
  for (std::size_t k = 0; k < m; ++k) sol.u[k + 1] = x[k];
  const double scale = ell0 / sol.u[n - 1];
  for (auto& ui : sol.u) ui *= scale;
  sol.f.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    sol.f[i] = (sol.r[i] > 0.0) ? sol.u[i] / sol.r[i]
                                : (sol.u[1] / h);
  sol.eta.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    sol.eta[i] = -n_scale * (1.0 - sol.f[i]);
  return sol;
}

// Radial Fourier transform of the coefficient profile at momentum magnitude
// p: 4 pi * integral of eta(r) sinc(p r) r^2 dr over [0, ell0], with the
// hard-core region (where eta = -n exactly) integrated in closed form.
inline double eta_radial_transform(const NeumannSolution& sol, double p) {
  if (!(p > 0.0)) throw ZeroMomentum("eta transform needs p > 0");
  const double four_pi = 12.566370614359172953850573533118;
  double core = 0.0;
  if (sol.core_radius > 0.0) {
    const double rc = sol.core_radius;
    core = -sol.n_scale * (std::sin(p * rc) - p * rc * std::cos(p * rc)) /
           (p * p * p);
  }
  // Composite Simpson on the solver grid (odd node count by construction).
  const std::size_t n = sol.r.size();
  std::vector<double> terms;
  terms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = sol.r[i];
    const double sinc = (p * r > 1e-8) ? std::sin(p * r) / (p * r)
                                       : 1.0 - (p * r) * (p * r) / 6.0;
    double wgt = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    terms.push_back(wgt * sol.eta[i] * sinc * r * r);
  }
  const double grid_part = pairwise_sum(terms) * sol.grid_step / 3.0;
  return four_pi * (core + grid_part);
}

// Fourier coefficients of eta on the unit torus, indexed by integer momentum
// triples q (momentum p = 2 pi q), for kappa_h < |p| <= p_cutoff.
inline std::map<std::array<int, 3>, double> eta_coefficients(
    const NeumannSolution& sol, double kappa_h, double p_cutoff) {
  if (!(p_cutoff > kappa_h))
    throw DomainError("p_cutoff must exceed kappa_h");
  const double two_pi = 6.283185307179586476925286766559;
  const int qmax = static_cast<int>(p_cutoff / two_pi) + 1;
  std::map<long, double> radial_cache;
  std::map<std::array<int, 3>, double> out;
  for (int qx = -qmax; qx <= qmax; ++qx)
    for (int qy = -qmax; qy <= qmax; ++qy)
      for (int qz = -qmax; qz <= qmax; ++qz) {
        const long q2 = static_cast<long>(qx) * qx +
                        static_cast<long>(qy) * qy +
                        static_cast<long>(qz) * qz;
        if (q2 == 0) continue;
        const double p = two_pi * std::sqrt(static_cast<double>(q2));
        if (p <= kappa_h || p > p_cutoff * (1.0 + 1e-12)) continue;
        auto it = radial_cache.find(q2);
        if (it == radial_cache.end())
          it = radial_cache.emplace(q2, eta_radial_transform(sol, p)).first;
        out.emplace(std::array<int, 3>{qx, qy, qz}, it->second);
      }
  return out;
}

}  // namespace bosegas::scattering
