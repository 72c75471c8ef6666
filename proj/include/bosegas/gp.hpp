#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/grid.hpp"
#include "bosegas/rng.hpp"
#include "bosegas/summation.hpp"

// Energy functional and ground-state solver for a dilute condensate wave
// function on a periodic or boxed grid:
//
//   E[phi] = sum_a ||D_a phi||^2 + int W |phi|^2 + c int |phi|^4,
//   D_a = i d_a + A_a,   A = (omega ^ x) / 2,   W = V_ext - |A|^2,
//
// minimized over int |phi|^2 = 1. Without rotation this reduces to
// int |grad phi|^2 + V |phi|^2 + c |phi|^4. Derivatives are spectral, so
// i d_a is exactly self-adjoint on the grid, and A_a, W are real pointwise
// multipliers; the discrete energy therefore has the exact discrete gradient
//   H phi = sum_a D_a(D_a phi) + W phi + 2 c |phi|^2 phi,
// which finite-difference checks confirm to roundoff.
namespace bosegas::gp {

using Field = std::vector<std::complex<double>>;

inline constexpr double kFourPi = 12.566370614359172953850573533118;

// Quartic coefficient of the three-dimensional functional: 4 pi a.
inline double coupling_3d(double scattering_length) {
  if (!(scattering_length >= 0.0) || !std::isfinite(scattering_length))
    throw DomainError("scattering length must be non-negative");
  return kFourPi * scattering_length;
}

// Quartic coefficient of the dilute two-dimensional functional:
// 4 pi g with g = n / |log(n a^2)|, valid only for n a^2 < 1.
inline double coupling_2d(double n_particles, double scattering_length) {
  if (!(n_particles > 0.0) || !std::isfinite(n_particles))
    throw DomainError("particle number must be positive");
  if (!(scattering_length > 0.0) || !std::isfinite(scattering_length))
    throw DomainError("scattering length must be positive");
  const double x = n_particles * scattering_length * scattering_length;
  if (x >= 1.0)
    throw DomainError("two-dimensional coupling requires n * a^2 < 1");
  return kFourPi * n_particles / std::abs(std::log(x));
}

struct GpProblem {
  GridSpec grid;
  std::vector<double> v_ext;  // samples on the grid; empty means zero
  double coupling = 0.0;      // coefficient of |phi|^4 in the energy
  double omega = 0.0;         // rotation speed about the z axis

  void validate() const {
    if (!(coupling >= 0.0) || !std::isfinite(coupling))
      throw DomainError("quartic coupling must be non-negative");
    if (!std::isfinite(omega)) throw DomainError("rotation speed must be finite");
    if (!v_ext.empty() && v_ext.size() != grid.size())
      throw GeometryError("external potential samples do not match the grid");
  }
};

struct EnergyBreakdown {
  double kinetic = 0.0;      // int |grad phi|^2
  double external = 0.0;     // int V_ext |phi|^2
  double interaction = 0.0;  // c int |phi|^4
  double rotation = 0.0;     // -omega * <L_z>
  double total = 0.0;        // value of the discrete functional
};

struct GpEvaluation {
  EnergyBreakdown energy;
  Field gradient;         // H phi for the raw (un-normalized) field
  Field kinetic_applied;  // inverse transform of k^2 * fft(phi)
  double mu = 0.0;        // <phi, H phi> / <phi, phi>
  double residual = 0.0;  // L2 norm of H phi - mu phi
};

namespace detail {

inline void require_same_grid(const GridSpec& a, const GridSpec& b) {
  bool same = a.dim == b.dim;
  for (int i = 0; i < 3; ++i)
    same = same && a.n[i] == b.n[i] && a.length[i] == b.length[i] &&
           a.origin[i] == b.origin[i];
  if (!same)
    throw GeometryError("workspace grid does not match the problem grid");
}

inline double real_inner(double cell, const Field& a, const Field& b) {
  std::vector<double> terms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    terms[i] = a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return cell * pairwise_sum(terms);
}

inline double norm_squared(double cell, const Field& a) {
  std::vector<double> terms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) terms[i] = std::norm(a[i]);
  return cell * pairwise_sum(terms);
}

// out[i] = scale * k_axis(i) * in[i] for one coordinate axis.
inline void multiply_axis_wavenumber(const SpectralWorkspace& ws, int axis,
                                     double scale, const Field& in,
                                     Field& out) {
  const GridSpec& g = ws.grid();
  const std::vector<double>& ka = ws.kaxis(axis);
  std::size_t flat = 0;
  for (int ix = 0; ix < g.n[0]; ++ix)
    for (int iy = 0; iy < g.n[1]; ++iy)
      for (int iz = 0; iz < g.n[2]; ++iz, ++flat) {
        const int idx = (axis == 0) ? ix : (axis == 1) ? iy : iz;
        out[flat] = scale * ka[idx] * in[flat];
      }
}

struct Operators {
  const SpectralWorkspace* ws = nullptr;
  double coupling = 0.0;
  double omega = 0.0;
  bool rotating = false;
  std::vector<double> v;          // external potential (may be empty)
  std::vector<double> w_eff;      // v - |A|^2, rotating only
  std::vector<double> a_axis[2];  // A_x, A_y, rotating only
};

inline Operators build_operators(const GpProblem& p,
                                 const SpectralWorkspace& ws) {
  p.validate();
  require_same_grid(p.grid, ws.grid());
  Operators ops;
  ops.ws = &ws;
  ops.coupling = p.coupling;
  ops.omega = p.omega;
  ops.v = p.v_ext;
  if (p.omega != 0.0) {
    ops.rotating = true;
    const GridSpec& g = ws.grid();
    const std::size_t n = g.size();
    ops.a_axis[0].resize(n);
    ops.a_axis[1].resize(n);
    ops.w_eff.resize(n);
    std::size_t flat = 0;
    for (int ix = 0; ix < g.n[0]; ++ix)
      for (int iy = 0; iy < g.n[1]; ++iy)
        for (int iz = 0; iz < g.n[2]; ++iz, ++flat) {
          const double x = g.coordinate(0, ix);
          const double y = g.coordinate(1, iy);
          const double ax = -0.5 * p.omega * y;
          const double ay = 0.5 * p.omega * x;
          ops.a_axis[0][flat] = ax;
          ops.a_axis[1][flat] = ay;
          const double vv = ops.v.empty() ? 0.0 : ops.v[flat];
          ops.w_eff[flat] = vv - (ax * ax + ay * ay);
        }
  }
  return ops;
}

inline GpEvaluation eval_with(const Operators& ops, const Field& phi) {
  const SpectralWorkspace& ws = *ops.ws;
  const GridSpec& g = ws.grid();
  const std::size_t n = g.size();
  if (phi.size() != n)
    throw GeometryError("field size does not match the grid");
  const double cell = g.cell_volume();

  Field hat = phi;
  ws.forward(hat);

  GpEvaluation ev;
  ev.kinetic_applied.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    ev.kinetic_applied[i] = ws.k2()[i] * hat[i];
  ws.backward(ev.kinetic_applied);
  const double kin_plain = real_inner(cell, phi, ev.kinetic_applied);

  double kin_disc = 0.0;  // sum_a ||D_a phi||^2
  if (!ops.rotating) {
    ev.gradient = ev.kinetic_applied;
    kin_disc = kin_plain;
  } else {
    ev.gradient.assign(n, {0.0, 0.0});
    Field work(n);
    if (g.dim == 3) {
      // Axis without a vector-potential component: D_z D_z = -d_z^2.
      const std::vector<double>& kz = ws.kaxis(2);
      std::size_t flat = 0;
      for (int ix = 0; ix < g.n[0]; ++ix)
        for (int iy = 0; iy < g.n[1]; ++iy)
          for (int iz = 0; iz < g.n[2]; ++iz, ++flat)
            work[flat] = kz[iz] * kz[iz] * hat[flat];
      ws.backward(work);
      kin_disc += real_inner(cell, phi, work);
      for (std::size_t i = 0; i < n; ++i) ev.gradient[i] += work[i];
    }
    for (int axis = 0; axis < 2; ++axis) {
      const std::vector<double>& a = ops.a_axis[axis];
      // D_a phi = inverse(-k_a * hat) + A_a phi
      multiply_axis_wavenumber(ws, axis, -1.0, hat, work);
      ws.backward(work);
      for (std::size_t i = 0; i < n; ++i) work[i] += a[i] * phi[i];
      kin_disc += norm_squared(cell, work);
      // D_a (D_a phi)
      Field second = work;
      ws.forward(second);
      multiply_axis_wavenumber(ws, axis, -1.0, second, second);
      ws.backward(second);
      for (std::size_t i = 0; i < n; ++i)
        ev.gradient[i] += second[i] + a[i] * work[i];
    }
  }

  const std::vector<double>& w = ops.rotating ? ops.w_eff : ops.v;
  std::vector<double> ext_terms(n), w_terms(n), quartic_terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dens = std::norm(phi[i]);
    const double vv = ops.v.empty() ? 0.0 : ops.v[i];
    const double ww = w.empty() ? 0.0 : w[i];
    ext_terms[i] = vv * dens;
    w_terms[i] = ww * dens;
    quartic_terms[i] = dens * dens;
    ev.gradient[i] += ww * phi[i] + 2.0 * ops.coupling * dens * phi[i];
  }
  const double ext_v = cell * pairwise_sum(ext_terms);
  const double w_term = cell * pairwise_sum(w_terms);
  const double inter = ops.coupling * cell * pairwise_sum(quartic_terms);

  ev.energy.kinetic = kin_plain;
  ev.energy.external = ext_v;
  ev.energy.interaction = inter;
  ev.energy.rotation = ops.rotating ? (kin_disc + w_term) - (kin_plain + ext_v)
                                    : 0.0;
  ev.energy.total = kin_disc + w_term + inter;

  const double nn = norm_squared(cell, phi);
  if (!(nn > 0.0))
    throw NormalizationError("field has zero norm");
  ev.mu = real_inner(cell, phi, ev.gradient) / nn;
  Field defect(n);
  for (std::size_t i = 0; i < n; ++i)
    defect[i] = ev.gradient[i] - ev.mu * phi[i];
  ev.residual = std::sqrt(norm_squared(cell, defect));
  return ev;
}

}  // namespace detail

// --- fields -----------------------------------------------------------

inline double field_norm(const GridSpec& g, const Field& phi) {
  return std::sqrt(detail::norm_squared(g.cell_volume(), phi));
}

inline void normalize(const GridSpec& g, Field& phi) {
  const double nn = field_norm(g, phi);
  if (!(nn > 0.0) || !std::isfinite(nn))
    throw NormalizationError("cannot normalize a zero or non-finite field");
  const double s = 1.0 / nn;
  for (std::complex<double>& x : phi) x *= s;
}

inline std::vector<double> sample_scalar(
    const GridSpec& g, const std::function<double(double, double, double)>& f) {
  std::vector<double> out(g.size());
  std::size_t flat = 0;
  for (int ix = 0; ix < g.n[0]; ++ix)
    for (int iy = 0; iy < g.n[1]; ++iy)
      for (int iz = 0; iz < g.n[2]; ++iz, ++flat)
        out[flat] = f(g.coordinate(0, ix), g.coordinate(1, iy),
                      g.dim == 3 ? g.coordinate(2, iz) : 0.0);
  return out;
}

// strength * |x - x_center|^2 about the geometric center of the box.
inline std::vector<double> harmonic_potential(const GridSpec& g,
                                              double strength = 1.0) {
  std::array<double, 3> c{0.0, 0.0, 0.0};
  for (int a = 0; a < g.dim; ++a) c[a] = g.origin[a] + 0.5 * g.length[a];
  return sample_scalar(g, [&](double x, double y, double z) {
    const double dx = x - c[0], dy = y - c[1], dz = z - c[2];
    return strength * (dx * dx + dy * dy + dz * dz);
  });
}

inline Field constant_state(const GridSpec& g) {
  double vol = 1.0;
  for (int a = 0; a < g.dim; ++a) vol *= g.length[a];
  return Field(g.size(), {1.0 / std::sqrt(vol), 0.0});
}

inline Field gaussian_state(const GridSpec& g, double width) {
  if (!(width > 0.0)) throw DomainError("gaussian width must be positive");
  std::array<double, 3> c{0.0, 0.0, 0.0};
  for (int a = 0; a < g.dim; ++a) c[a] = g.origin[a] + 0.5 * g.length[a];
  Field phi(g.size());
  std::size_t flat = 0;
  for (int ix = 0; ix < g.n[0]; ++ix)
    for (int iy = 0; iy < g.n[1]; ++iy)
      for (int iz = 0; iz < g.n[2]; ++iz, ++flat) {
        const double dx = g.coordinate(0, ix) - c[0];
        const double dy = g.coordinate(1, iy) - c[1];
        const double dz = g.dim == 3 ? g.coordinate(2, iz) - c[2] : 0.0;
        const double r2 = dx * dx + dy * dy + dz * dz;
        phi[flat] = {std::exp(-r2 / (2.0 * width * width)), 0.0};
      }
  normalize(g, phi);
  return phi;
}

inline Field random_state(const GridSpec& g, std::uint64_t seed) {
  Rng rng(seed);
  Field phi(g.size());
  for (std::complex<double>& x : phi) {
    const double re = rng.normal();
    const double im = rng.normal();
    x = {re, im};
  }
  normalize(g, phi);
  return phi;
}

// --- evaluation and descent -------------------------------------------

// Energy, gradient, chemical potential, and residual of the raw field;
// no normalization is applied, so directional finite differences of the
// energy match 2 Re <gradient, delta> exactly.
inline GpEvaluation evaluate(const GpProblem& p, const SpectralWorkspace& ws,
                             const Field& phi) {
  return detail::eval_with(detail::build_operators(p, ws), phi);
}

// One normalized semi-implicit descent step:
//   w = phi - dt (H phi - K phi - mu phi),  phi' = (1 + dt K)^{-1} w,
// renormalized. A state with H phi = mu phi is an exact fixed point.
namespace detail {
inline Field imex_step(const Operators& ops, const Field& phi,
                       const GpEvaluation& ev, double dt) {
  const SpectralWorkspace& ws = *ops.ws;
  const std::size_t n = phi.size();
  Field next(n);
  for (std::size_t i = 0; i < n; ++i)
    next[i] = phi[i] -
              dt * (ev.gradient[i] - ev.kinetic_applied[i] - ev.mu * phi[i]);
  ws.forward(next);
  for (std::size_t i = 0; i < n; ++i) next[i] /= 1.0 + dt * ws.k2()[i];
  ws.backward(next);
  normalize(ws.grid(), next);
  return next;
}
}  // namespace detail

inline Field descent_step(const GpProblem& p, const SpectralWorkspace& ws,
                          const Field& phi, const GpEvaluation& ev,
                          double dt) {
  return detail::imex_step(detail::build_operators(p, ws), phi, ev, dt);
}

struct MinimizeOptions {
  int max_iterations = 20000;
  double tolerance = 1e-9;  // residual and relative energy-change target
  double dt_initial = 0.1;
  double dt_max = 5.0;
  std::function<void(int, const EnergyBreakdown&, double)> callback;
};

struct MinimizeResult {
  Field phi;
  EnergyBreakdown energy;
  double mu = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double dt_final = 0.0;
};

namespace detail {

inline MinimizeResult run_flow(const Operators& ops, Field phi,
                               const MinimizeOptions& opts) {
  const SpectralWorkspace& ws = *ops.ws;
  normalize(ws.grid(), phi);
  GpEvaluation ev = eval_with(ops, phi);
  if (!std::isfinite(ev.energy.total))
    throw DivergentEnergy("initial energy is not finite");

  double dt = opts.dt_initial;
  double e_prev = std::numeric_limits<double>::infinity();
  int accepted = 0;
  int accepts_in_row = 0;
  for (int attempt = 0; attempt < opts.max_iterations; ++attempt) {
    const double e = ev.energy.total;
    if (ev.residual <= opts.tolerance &&
        std::abs(e - e_prev) <= opts.tolerance * std::max(1.0, std::abs(e))) {
      MinimizeResult res;
      res.phi = std::move(phi);
      res.energy = ev.energy;
      res.mu = ev.mu;
      res.residual = ev.residual;
      res.iterations = accepted;
      res.dt_final = dt;
      return res;
    }
    Field trial = imex_step(ops, phi, ev, dt);
    GpEvaluation trial_ev = eval_with(ops, trial);
    const bool decreased =
        std::isfinite(trial_ev.energy.total) &&
        trial_ev.energy.total <= e + 1e-14 * std::max(1.0, std::abs(e));
    if (decreased) {
      e_prev = e;
      phi = std::move(trial);
      ev = std::move(trial_ev);
      ++accepted;
      if (++accepts_in_row >= 5) {
        dt = std::min(dt * 1.3, opts.dt_max);
        accepts_in_row = 0;
      }
      if (opts.callback) opts.callback(accepted, ev.energy, ev.residual);
    } else {
      dt *= 0.5;
      accepts_in_row = 0;
      if (dt < 1e-12)
        throw DivergentEnergy(
            "descent step underflowed while backtracking on the energy");
    }
  }
  throw NonConvergence("gradient flow did not reach the requested tolerance");
}

}  // namespace detail

// Ground state without rotation. The problem must have omega == 0.
inline MinimizeResult minimize_gp(const GpProblem& p,
                                  const SpectralWorkspace& ws,
                                  const Field& initial,
                                  const MinimizeOptions& opts = {}) {
  if (p.omega != 0.0)
    throw DomainError("plain minimizer requires omega == 0; use the rotating one");
  return detail::run_flow(detail::build_operators(p, ws), initial, opts);
}

// Ground state in a frame rotating about the z axis. Requires an
// origin-centered box and an effective potential W = V - |A|^2 that stays
// positive on the box boundary; omega == 0 delegates to the plain path.
inline MinimizeResult minimize_gp_rotating(const GpProblem& p,
                                           const SpectralWorkspace& ws,
                                           const Field& initial,
                                           const MinimizeOptions& opts = {}) {
  p.validate();
  detail::require_same_grid(p.grid, ws.grid());
  if (p.omega == 0.0) return minimize_gp(p, ws, initial, opts);
  const GridSpec& g = p.grid;
  if (!g.centered_box())
    throw GeometryError("rotation requires an origin-centered box");
  double w_min = std::numeric_limits<double>::infinity();
  std::size_t flat = 0;
  for (int ix = 0; ix < g.n[0]; ++ix)
    for (int iy = 0; iy < g.n[1]; ++iy)
      for (int iz = 0; iz < g.n[2]; ++iz, ++flat) {
        bool boundary = ix == 0 || ix == g.n[0] - 1 || iy == 0 ||
                        iy == g.n[1] - 1;
        if (g.dim == 3) boundary = boundary || iz == 0 || iz == g.n[2] - 1;
        if (!boundary) continue;
        const double x = g.coordinate(0, ix);
        const double y = g.coordinate(1, iy);
        const double vv = p.v_ext.empty() ? 0.0 : p.v_ext[flat];
        const double a2 = 0.25 * p.omega * p.omega * (x * x + y * y);
        w_min = std::min(w_min, vv - a2);
      }
  if (!(w_min > 0.0))
    throw ConfinementError(
        "effective potential is not confining at the box boundary");
  return detail::run_flow(detail::build_operators(p, ws), initial, opts);
}

}  // namespace bosegas::gp
