#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/lattice.hpp"
#include "bosegas/summation.hpp"

// Free Bose gas on a torus of side L (unit mass convention: single-particle
// dispersion p^2 with p in (2 pi / L) Z^3) and the thermodynamic-limit
// critical point. Densities and free energies are evaluated by explicit
// lattice sums truncated where the Bose factor falls below its roundoff
// contribution, with deterministic pairwise accumulation.
namespace bosegas::ideal_gas {

// zeta(3/2) from a one-million-term series plus the Euler-Maclaurin tail.
inline double zeta_three_halves() {
  static const double value = [] {
    const std::size_t n_terms = 1000000;
    std::vector<double> terms(n_terms);
    for (std::size_t i = 0; i < n_terms; ++i)
      terms[i] = std::pow(static_cast<double>(i + 1), -1.5);
    const double head = pairwise_sum(terms);
    const double n = static_cast<double>(n_terms);
    const double tail = 2.0 / std::sqrt(n) - 0.5 * std::pow(n, -1.5) +
                        0.125 * std::pow(n, -2.5);
    return head + tail;
  }();
  return value;
}

// Critical density at inverse temperature beta: zeta(3/2) / (4 pi beta)^{3/2}.
inline double critical_density(double beta) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  const double four_pi = 12.566370614359172953850573533118;
  return zeta_three_halves() * std::pow(four_pi * beta, -1.5);
}

// Inverse critical temperature at density rho (inverse of the above).
inline double critical_beta(double rho) {
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  const double four_pi = 12.566370614359172953850573533118;
  return std::pow(zeta_three_halves() / rho, 2.0 / 3.0) / four_pi;
}

// Number of integer lattice vectors with |q|^2 = m, for m = 0..m_max.
using lattice::shell_counts;

// Guarded Bose occupation 1/(e^x - 1) for x > 0; never overflows.
inline double bose_factor(double x) {
  if (!(x > 0.0)) throw DomainError("Bose factor needs a positive argument");
  if (x > 700.0) return 0.0;
  const double t = std::exp(-x);
  return t / (1.0 - t);
}

// Finite torus with its momentum-shell table. Shells are retained until the
// Boltzmann exponent beta p^2 reaches `exponent_cut` (default 60, i.e. a
// dropped-tail weight below 1e-26 of the retained sum).
struct TorusSpec {
  double box_length = 1.0;
  double beta = 1.0;
  int m_cut = 0;
  std::vector<long> counts;

  static TorusSpec make(double box_length, double beta,
                        double exponent_cut = 60.0) {
    if (!(box_length > 0.0) || !(beta > 0.0))
      throw DomainError("box_length and beta must be positive");
    TorusSpec ts;
    ts.box_length = box_length;
    ts.beta = beta;
    const double two_pi = 6.283185307179586476925286766559;
    const double unit = two_pi / box_length;  // momentum quantum
    ts.m_cut = static_cast<int>(
                   std::ceil(exponent_cut / (beta * unit * unit))) +
               1;
    ts.counts = shell_counts(ts.m_cut);
    return ts;
  }

  double volume() const { return box_length * box_length * box_length; }
  double shell_p2(int m) const {
    const double two_pi = 6.283185307179586476925286766559;
    const double unit = two_pi / box_length;
    return unit * unit * static_cast<double>(m);
  }
};

// Mean particle density at chemical potential mu < 0.
inline double density(const TorusSpec& ts, double mu) {
  if (!(mu < 0.0)) throw DomainError("mu must be negative");
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(ts.m_cut) + 1);
  terms.push_back(bose_factor(-ts.beta * mu));
  for (int m = 1; m <= ts.m_cut; ++m) {
    if (ts.counts[static_cast<std::size_t>(m)] == 0) continue;
    terms.push_back(static_cast<double>(ts.counts[static_cast<std::size_t>(m)]) *
                    bose_factor(ts.beta * (ts.shell_p2(m) - mu)));
  }
  return pairwise_sum(terms) / ts.volume();
}

struct MuSolution {
  double mu = 0.0;
  double rho0 = 0.0;      // condensate (zero-mode) density
  double rho = 0.0;       // target total density
  double residual = 0.0;  // |density(mu) - rho| / rho
  int iterations = 0;
};

// Chemical potential at fixed density by bisection down from -1e-16, to a
// relative density residual of 1e-10. The lower bracket end starts at
// -L^3/beta and doubles until the density falls below the target (at small
// rho beta the zero mode alone can exceed rho there).
inline MuSolution solve_mu(const TorusSpec& ts, double rho) {
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  double lo = -ts.volume() / ts.beta;
  double hi = -1e-16;
  int widen = 0;
  while (density(ts, lo) >= rho && widen++ < 64) lo *= 2.0;
  if (density(ts, lo) >= rho)
    throw BracketFailure("density at the lower bracket end exceeds the target");
  if (density(ts, hi) <= rho)
    throw BracketFailure("density at the upper bracket end is below the target");
  MuSolution out;
  out.rho = rho;
  const int max_iter = 200;
  double mid = 0.5 * (lo + hi), res = 1.0;
  for (int it = 1; it <= max_iter; ++it) {
    mid = 0.5 * (lo + hi);
    const double d = density(ts, mid);
    res = std::abs(d - rho) / rho;
    out.iterations = it;
    if (res <= 1e-10) break;
    if (d < rho)
      lo = mid;
    else
      hi = mid;
  }
  if (res > 1e-10)
    throw NonConvergence("bisection did not reach the density residual");
  out.mu = mid;
  out.residual = res;
  out.rho0 = bose_factor(-ts.beta * mid) / ts.volume();
  return out;
}

inline double condensate_fraction(const TorusSpec& ts, double rho) {
  const auto sol = solve_mu(ts, rho);
  return sol.rho0 / rho;
}

// Two-step Richardson extrapolation of the condensate fraction over box
// sides L, 2L, 4L (the leading finite-size correction scales like 1/L).
inline double condensate_fraction_extrapolated(double beta, double rho,
                                               double box_length) {
  const double f1 = condensate_fraction(TorusSpec::make(box_length, beta), rho);
  const double f2 =
      condensate_fraction(TorusSpec::make(2.0 * box_length, beta), rho);
  const double f4 =
      condensate_fraction(TorusSpec::make(4.0 * box_length, beta), rho);
  const double y1 = 2.0 * f2 - f1;
  const double y2 = 2.0 * f4 - f2;
  return (4.0 * y2 - y1) / 3.0;
}

// Thermodynamic-limit condensate fraction max(0, 1 - rho_c(beta)/rho).
inline double condensate_fraction_infinite(double beta, double rho) {
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  return std::max(0.0, 1.0 - critical_density(beta) / rho);
}

// Grand-canonical free energy of n particles on the unit torus:
// F0 = mu n + (1/beta) sum_p log(1 - e^{-beta (p^2 - mu)}), zero mode included.
inline double free_energy_ideal(double beta, double n_particles) {
  if (!(n_particles > 0.0)) throw DomainError("n_particles must be positive");
  const auto ts = TorusSpec::make(1.0, beta);
  const auto sol = solve_mu(ts, n_particles);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(ts.m_cut) + 1);
  // log(1 - e^{beta mu}) without cancellation as mu -> 0^-.
  terms.push_back(std::log(-std::expm1(ts.beta * sol.mu)));
  for (int m = 1; m <= ts.m_cut; ++m) {
    if (ts.counts[static_cast<std::size_t>(m)] == 0) continue;
    const double x = ts.beta * (ts.shell_p2(m) - sol.mu);
    if (x > 700.0) continue;
    terms.push_back(static_cast<double>(ts.counts[static_cast<std::size_t>(m)]) *
                    std::log1p(-std::exp(-x)));
  }
  return sol.mu * n_particles + pairwise_sum(terms) / beta;
}

// First-order interacting correction on the unit torus:
// F = F0 + 4 pi (a / n) (2 rho^2 - rho0^2) with rho = n (unit volume).
inline double free_energy_gp(double beta, double n_particles, double a) {
  if (!(a >= 0.0)) throw DomainError("scattering length must be non-negative");
  const double f0 = free_energy_ideal(beta, n_particles);
  const auto ts = TorusSpec::make(1.0, beta);
  const auto sol = solve_mu(ts, n_particles);
  const double four_pi = 12.566370614359172953850573533118;
  const double rho = n_particles;
  return f0 + four_pi * (a / n_particles) *
                  (2.0 * rho * rho - sol.rho0 * sol.rho0);
}

}  // namespace bosegas::ideal_gas
