#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/potential.hpp"
#include "bosegas/quadrature.hpp"

// Zero-energy two-body scattering in three dimensions. With f the radial
// zero-energy solution of (-Laplacian + v/2) f = 0 normalized to f -> 1 at
// infinity, the reduced function u = r f satisfies u'' = (v/2) u, behaves
// like r - a outside the support of v, and the intercept a is the scattering
// length. Equivalently a = (1/2) * integral of v u r dr, which doubles as a
// consistency check on the solver.
namespace bosegas::scattering {

struct SolveOptions {
  std::size_t grid_points = 8193;  // marching nodes (forced odd)
  double fit_window = 0.25;        // trailing fraction of [range, r_max] fitted
};

struct ScatteringSolution {
  std::vector<double> r;  // uniform grid; starts at the core radius for a hard core
  std::vector<double> u;  // reduced solution, slope-normalized: u ~ r - a outside
  std::vector<double> f;  // f = u / r
  double a = 0.0;         // scattering length from the asymptotic linear fit
  double r_max = 0.0;
  double grid_start = 0.0;
  double grid_step = 0.0;
  double fit_residual = 0.0;        // max |u - (r-a)| / r_max over the fit window
  double window_consistency = 0.0;  // |a| change when the fit window is halved
};

// Integrates u'' = (v/2) u outward with the second-order three-point
// recurrence, sampling the potential as exact cell averages so that jump
// discontinuities do not degrade the order. The scattering length comes from
// a least-squares straight-line fit over the trailing window, where the
// solution is exactly linear.
inline ScatteringSolution solve_zero_energy(const RadialPotential& v,
                                            double r_max,
                                            SolveOptions opts = {}) {
  const double r0 = v.range();
  if (!(r_max > 2.0 * r0) || !std::isfinite(r_max))
    throw GeometryError("r_max must exceed twice the potential range");
  if (opts.grid_points < 64)
    throw DomainError("grid_points must be at least 64");
  if (!(opts.fit_window > 0.0 && opts.fit_window < 0.9))
    throw DomainError("fit_window must lie in (0, 0.9)");

  const std::size_t n = opts.grid_points | std::size_t{1};
  const bool hard = v.kind() == RadialPotential::Kind::hard_core;
  const double start = hard ? v.range() : 0.0;
  const double h = (r_max - start) / static_cast<double>(n - 1);

  ScatteringSolution sol;
  sol.r_max = r_max;
  sol.grid_start = start;
  sol.grid_step = h;
  sol.r.resize(n);
  sol.u.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    sol.r[i] = start + h * static_cast<double>(i);

  sol.u[0] = 0.0;
  sol.u[1] = h;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double g = 0.0;
    if (!hard && sol.r[i] - 0.5 * h < r0) {
      g = 0.5 * v.cell_average(std::max(start, sol.r[i] - 0.5 * h),
                               std::min(r_max, sol.r[i] + 0.5 * h));
    }
    sol.u[i + 1] = 2.0 * sol.u[i] - sol.u[i - 1] + h * h * g * sol.u[i];
    if (!std::isfinite(sol.u[i + 1]) || std::abs(sol.u[i + 1]) > 1e300)
      throw NonConvergence("outward integration overflowed");
  }

  // Linear fit u = alpha r + beta over trailing windows of [range, r_max].
  const auto fit = [&](double window) {
    const double from = r_max - window * (r_max - r0);
    std::size_t i0 = 0;
    while (i0 < n && sol.r[i0] < from) ++i0;
    if (n - i0 < 8) throw GeometryError("fit window contains too few points");
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = i0; i < n; ++i) {
      sw += 1.0;
      sx += sol.r[i];
      sy += sol.u[i];
      sxx += sol.r[i] * sol.r[i];
      sxy += sol.r[i] * sol.u[i];
    }
    const double det = sw * sxx - sx * sx;
    const double alpha = (sw * sxy - sx * sy) / det;
    const double beta = (sxx * sy - sx * sxy) / det;
    return std::pair<double, double>{alpha, beta};
  };

  const auto [alpha, beta] = fit(opts.fit_window);
  if (!(std::isfinite(alpha)) || alpha == 0.0)
    throw NonConvergence("asymptotic slope fit failed");
  sol.a = -beta / alpha;

  const auto [alpha2, beta2] = fit(opts.fit_window * 0.5);
  const double a2 = -beta2 / alpha2;
  sol.window_consistency = std::abs(a2 - sol.a);
  if (sol.window_consistency > 1e-4 * std::max(1.0, std::abs(sol.a)))
    throw NonConvergence(
        "solution is not linear over the fit window; increase r_max or grid "
        "resolution");

  for (auto& ui : sol.u) ui /= alpha;
  sol.f.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    sol.f[i] = (sol.r[i] > 0.0) ? sol.u[i] / sol.r[i] : sol.u[1] / h;

  double res = 0.0;
  const double from = r_max - opts.fit_window * (r_max - r0);
  for (std::size_t i = 0; i < n; ++i) {
    if (sol.r[i] < from) continue;
    res = std::max(res, std::abs(sol.u[i] - (sol.r[i] - sol.a)) / r_max);
  }
  sol.fit_residual = res;
  return sol;
}

// Independent evaluation of the scattering length through the integral
// identity a = (1/2) * integral of v(r) u(r) r dr, using its own quadrature
// grid with cubic interpolation of u. Only integrable kinds qualify.
inline double scattering_length_integral(const RadialPotential& v,
                                         const ScatteringSolution& sol,
                                         int panels = 4096) {
  if (!v.evaluable())
    throw UnsupportedKind(
        "integral identity needs a pointwise-evaluable potential");
  const double r0 = v.range();
  if (r0 <= 0.0) return 0.0;
  if (v.kind() == RadialPotential::Kind::tabulated &&
      v.max_table_gap() > 0.25 * r0)
    throw QuadratureFailure(
        "tabulated potential is too coarsely sampled for the integral "
        "identity");
  UniformTable u_of_r(sol.grid_start, sol.grid_step, sol.u);
  std::vector<double> breaks;
  if (v.kind() == RadialPotential::Kind::tabulated) {
    breaks = v.table_r();
  } else if (v.kind() == RadialPotential::Kind::square_well) {
    breaks.push_back(r0);
  }
  return simpson_split(
      [&](double r) { return 0.5 * v.value(r) * u_of_r(r) * r; }, 0.0, r0,
      breaks, panels);
}

// Scattering length of the rescaled potential n^2 v(n x), computed on the
// correspondingly shrunk domain with the same node count. Exact scaling
// gives a(n) = a / n.
inline double scaled_scattering_length(const RadialPotential& v, double n_scale,
                                       double r_max, SolveOptions opts = {}) {
  if (!(n_scale > 0.0) || !std::isfinite(n_scale))
    throw DomainError("scale factor must be positive and finite");
  return solve_zero_energy(v.scaled(n_scale), r_max / n_scale, opts).a;
}

}  // namespace bosegas::scattering
