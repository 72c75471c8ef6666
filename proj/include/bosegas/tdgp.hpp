#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/gp.hpp"
#include "bosegas/grid.hpp"

// Unitary time evolution of a condensate wave function,
//
//   i d/dt phi = -Lap phi + V phi + 2 c |phi|^2 phi,
//
// which is the Hamiltonian flow of the energy functional in gp.hpp with
// quartic coefficient c (so a three-dimensional gas with scattering length a
// has nonlinear coefficient 2 c = 8 pi a). Second-order Strang splitting:
// half a kinetic step in Fourier space, one exact pointwise phase for the
// potential and the interaction (|phi| is constant along that sub-flow),
// then the second kinetic half-step. Every sub-step applies pure phases or
// a unitary transform pair, so the norm is conserved to roundoff and the
// energy drift is O(dt^2). evolve() fuses the trailing and leading kinetic
// half-steps of consecutive steps into one full step, which halves the
// transform count without changing the trajectory.
namespace bosegas::tdgp {

using gp::Field;

class StrangPropagator {
 public:
  StrangPropagator(gp::GpProblem problem, const SpectralWorkspace& ws,
                   double dt)
      : p_(std::move(problem)), ws_(ws), dt_(dt) {
    p_.validate();
    gp::detail::require_same_grid(p_.grid, ws.grid());
    if (p_.omega != 0.0)
      throw DomainError("time evolution supports omega == 0 only");
    if (!(dt > 0.0) || !std::isfinite(dt))
      throw DomainError("time step must be positive");
    const std::size_t n = ws.grid().size();
    half_kinetic_.resize(n);
    full_kinetic_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      half_kinetic_[i] = unit_phase(-0.5 * dt * ws.k2()[i]);
      full_kinetic_[i] = unit_phase(-dt * ws.k2()[i]);
    }
  }

  double dt() const { return dt_; }
  const gp::GpProblem& problem() const { return p_; }

  void step(Field& phi) const {
    check(phi);
    kinetic_half(phi);
    potential_phase(phi);
    kinetic_half(phi);
  }

  // Building blocks for fused multi-step streams:
  // (K_half P K_half)^n = K_half P (K_full P)^{n-1} K_half.
  void kinetic_half(Field& phi) const { apply_table(half_kinetic_, phi); }
  void kinetic_full(Field& phi) const { apply_table(full_kinetic_, phi); }
  void potential_phase(Field& phi) const {
    check(phi);
    const double two_c = 2.0 * p_.coupling;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      const double v = p_.v_ext.empty() ? 0.0 : p_.v_ext[i];
      phi[i] *= unit_phase(-dt_ * (v + two_c * std::norm(phi[i])));
    }
  }

 private:
  // e^{i theta} rounded onto the unit circle, so repeated multiplication
  // does not carry a modulus bias.
  static std::complex<double> unit_phase(double theta) {
    const std::complex<double> p = std::polar(1.0, theta);
    return p / std::abs(p);
  }

  void check(const Field& phi) const {
    if (phi.size() != ws_.grid().size())
      throw GeometryError("field size does not match the grid");
  }

  void apply_table(const Field& table, Field& phi) const {
    check(phi);
    ws_.forward(phi);
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] *= table[i];
    ws_.backward(phi);
  }

  gp::GpProblem p_;
  const SpectralWorkspace& ws_;
  double dt_;
  Field half_kinetic_;
  Field full_kinetic_;
};

struct EvolveResult {
  Field phi;
  double time = 0.0;
  int steps = 0;
  double norm_initial = 0.0;
  double norm_final = 0.0;
  gp::EnergyBreakdown energy_initial;
  gp::EnergyBreakdown energy_final;
};

// Propagate `phi` through `steps` Strang steps of size dt, with optional
// snapshots every `snapshot_every` steps (0 disables them). Snapshot states
// are the full Strang iterates; the internal stream keeps the fused form and
// completes the trailing half-step on a copy when a snapshot is due.
inline EvolveResult evolve(
    const gp::GpProblem& p, const SpectralWorkspace& ws, Field phi, double dt,
    int steps,
    const std::function<void(int, double, const Field&)>& snapshot = {},
    int snapshot_every = 0) {
  if (steps < 0) throw DomainError("step count must be non-negative");
  if (snapshot_every < 0)
    throw DomainError("snapshot interval must be non-negative");
  const StrangPropagator prop(p, ws, dt);
  EvolveResult res;
  res.norm_initial = gp::field_norm(ws.grid(), phi);
  res.energy_initial = gp::evaluate(p, ws, phi).energy;
  if (steps > 0) {
    const bool want_snapshots = snapshot && snapshot_every > 0;
    prop.kinetic_half(phi);
    for (int s = 1; s <= steps; ++s) {
      prop.potential_phase(phi);
      if (s == steps) {
        prop.kinetic_half(phi);
        if (want_snapshots && s % snapshot_every == 0)
          snapshot(s, s * dt, phi);
      } else {
        if (want_snapshots && s % snapshot_every == 0) {
          Field at_step = phi;
          prop.kinetic_half(at_step);
          snapshot(s, s * dt, at_step);
        }
        prop.kinetic_full(phi);
      }
    }
  }
  res.norm_final = gp::field_norm(ws.grid(), phi);
  res.energy_final = gp::evaluate(p, ws, phi).energy;
  res.phi = std::move(phi);
  res.time = steps * dt;
  res.steps = steps;
  return res;
}

}  // namespace bosegas::tdgp
