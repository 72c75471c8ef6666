#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/potential.hpp"
#include "bosegas/quadrature.hpp"
#include "bosegas/rng.hpp"
#include "bosegas/scattering.hpp"

// Kinetic-energy localization inequality: for any radial H^1 function phi on
// the ball |x| <= ball_radius, any mu > 0, and any radial weight U >= 0
// supported outside the potential range with integral of U r^2 dr <= 1,
//
//   integral over the ball of [ mu |phi'|^2 + (1/2) v |phi|^2 ] r^2 dr
//     >= mu * a(v/mu) * integral of U |phi|^2 r^2 dr,
//
// where a(v/mu) is the scattering length of v/mu. The checker evaluates both
// sides by breakpoint-aware quadrature; the trial factory generates random
// admissible triples (v, U, phi) for property testing.
namespace bosegas::scattering {

struct RadialProfile {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
};

struct ShellWeight {
  std::function<double(double)> value;
  double lo = 0.0;
  double hi = 0.0;
};

struct DysonResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs
  double scattering_length = 0.0;
  double shell_mass = 0.0;
  bool satisfied = false;
};

struct DysonOptions {
  int panels = 4096;
  SolveOptions solve;
};

inline DysonResult dyson_check(const RadialPotential& v, double mu,
                               const ShellWeight& shell,
                               const RadialProfile& phi, double ball_radius,
                               DysonOptions opts = {}) {
  if (!v.evaluable())
    throw UnsupportedKind("the checker needs a pointwise-evaluable potential");
  if (!(mu > 0.0)) throw DomainError("mu must be positive");
  const double r0 = v.range();
  if (!(ball_radius > r0))
    throw GeometryError("ball must strictly contain the potential support");
  if (shell.lo < r0 - 1e-12 || shell.hi > ball_radius + 1e-12 ||
      !(shell.hi > shell.lo))
    throw GeometryError("weight must be supported in [range, ball_radius]");

  DysonResult out;
  out.shell_mass = simpson(
      [&](double r) { return shell.value(r) * r * r; }, shell.lo, shell.hi,
      opts.panels / 2);
  if (out.shell_mass > 1.0 + 1e-9)
    throw NormalizationError("weight mass integral exceeds one");

  out.scattering_length =
      solve_zero_energy(v.amplitude_scaled(1.0 / mu),
                        std::max(2.5 * r0, 5.0 * shell.hi / 4.0 + r0),
                        opts.solve)
          .a;

  const double breaks[] = {r0, shell.lo, shell.hi};
  out.lhs = simpson_split(
      [&](double r) {
        const double dp = phi.deriv(r);
        const double pv = phi.value(r);
        const double pot = (r < r0) ? v.value(r) : 0.0;
        return (mu * dp * dp + 0.5 * pot * pv * pv) * r * r;
      },
      0.0, ball_radius, breaks, opts.panels);
  out.rhs = mu * out.scattering_length *
            simpson(
                [&](double r) {
                  const double pv = phi.value(r);
                  return shell.value(r) * pv * pv * r * r;
                },
                shell.lo, shell.hi, opts.panels / 2);
  const double tol = 1e-9 * (1.0 + std::abs(out.lhs) + std::abs(out.rhs));
  out.margin = out.lhs - out.rhs;
  out.satisfied = out.lhs >= out.rhs - tol;
  return out;
}

struct DysonTrial {
  RadialPotential v;
  double mu = 1.0;
  ShellWeight shell;
  RadialProfile phi;
  double ball_radius = 1.0;
};

// Seeded random admissible trial: a random integrable potential, a smooth
// cos^2 bump weight normalized to a random mass <= 1, and a smooth signed
// trial profile built from a constant plus three gaussian bumps.
inline DysonTrial make_random_dyson_trial(std::uint64_t seed) {
  Rng rng(seed);
  DysonTrial t{RadialPotential::square_well(1.0, 1.0)};

  const int kind = static_cast<int>(rng.integer(3));
  if (kind == 0) {
    t.v = RadialPotential::square_well(rng.uniform(0.5, 30.0),
                                       rng.uniform(0.3, 1.2));
  } else if (kind == 1) {
    t.v = RadialPotential::gaussian(rng.uniform(0.5, 30.0),
                                    rng.uniform(0.2, 0.8));
  } else {
    const std::size_t n_samp = 24 + rng.integer(41);
    const double r_end = rng.uniform(0.5, 1.5);
    const double amp = rng.uniform(0.5, 20.0);
    const double w = r_end * rng.uniform(0.35, 0.7);
    const double om = rng.uniform(2.0, 7.0);
    const double ph = rng.uniform(0.0, 6.283185307179586);
    std::vector<double> rr(n_samp), vv(n_samp);
    for (std::size_t i = 0; i < n_samp; ++i) {
      const double r = r_end * static_cast<double>(i) /
                       static_cast<double>(n_samp - 1);
      rr[i] = r;
      vv[i] = amp * std::exp(-(r / w) * (r / w)) *
              (1.0 + 0.5 * std::sin(om * r + ph));
    }
    t.v = RadialPotential::tabulated(std::move(rr), std::move(vv));
  }

  t.mu = rng.uniform(0.2, 5.0);
  const double r0 = t.v.range();
  t.ball_radius = r0 * rng.uniform(1.6, 3.0);

  const double c = rng.uniform(r0 + 0.15 * (t.ball_radius - r0),
                               t.ball_radius - 0.15 * (t.ball_radius - r0));
  const double half_w =
      std::min(c - r0, t.ball_radius - c) * rng.uniform(0.3, 0.95);
  const double mass_target = rng.uniform(0.05, 0.999);
  const double pi = 3.1415926535897932384626433832795;
  const auto bump = [c, half_w, pi](double r) {
    if (std::abs(r - c) >= half_w) return 0.0;
    const double cw = std::cos(pi * (r - c) / (2.0 * half_w));
    return cw * cw;
  };
  const double mass0 = simpson(
      [&](double r) { return bump(r) * r * r; }, c - half_w, c + half_w, 2048);
  const double amp_u = mass_target / mass0;
  t.shell.lo = c - half_w;
  t.shell.hi = c + half_w;
  t.shell.value = [bump, amp_u](double r) { return amp_u * bump(r); };

  const double c0 = rng.uniform(0.3, 1.5);
  std::vector<double> bj(3), mj(3), sj(3);
  for (int j = 0; j < 3; ++j) {
    bj[j] = c0 * rng.uniform(-0.35, 0.75);
    mj[j] = rng.uniform(0.0, t.ball_radius);
    sj[j] = t.ball_radius * rng.uniform(0.1, 0.5);
  }
  t.phi.value = [c0, bj, mj, sj](double r) {
    double s = c0;
    for (int j = 0; j < 3; ++j) {
      const double z = (r - mj[j]) / sj[j];
      s += bj[j] * std::exp(-0.5 * z * z);
    }
    return s;
  };
  t.phi.deriv = [bj, mj, sj](double r) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double z = (r - mj[j]) / sj[j];
      s += bj[j] * std::exp(-0.5 * z * z) * (-z / sj[j]);
    }
    return s;
  };
  return t;
}

// Trial profile assembled from a scattering solution: phi = max(f(r), floor)
// continued by its outer form 1 - a/r beyond the solver grid. Used to probe
// near-sharpness of the localization inequality.
inline RadialProfile profile_from_solution(const ScatteringSolution& sol) {
  const double h = sol.grid_step;
  const std::size_t n = sol.u.size();
  std::vector<double> fprime(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    fprime[i] = (sol.f[i + 1] - sol.f[i - 1]) / (2.0 * h);
  }
  fprime[0] = (sol.f[1] - sol.f[0]) / h;
  fprime[n - 1] = (sol.f[n - 1] - sol.f[n - 2]) / h;
  auto fv = std::make_shared<UniformTable>(sol.grid_start, h, sol.f);
  auto fd = std::make_shared<UniformTable>(sol.grid_start, h, fprime);
  const double start = sol.grid_start, stop = sol.r_max, a = sol.a;
  RadialProfile p;
  p.value = [fv, start, stop, a](double r) {
    if (r < start) return 0.0;
    if (r > stop) return 1.0 - a / r;
    return (*fv)(r);
  };
  p.deriv = [fd, start, stop, a](double r) {
    if (r < start) return 0.0;
    if (r > stop) return a / (r * r);
    return (*fd)(r);
  };
  return p;
}

}  // namespace bosegas::scattering
