// Release acceptance gate. Every shipped guarantee is rechecked here from a
// plain main(), one PASS/FAIL line per check, and the exit status is the
// number of failures. argv[1] names the command-line binary; only the final
// byte-determinism check needs it.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "bosegas/bogoliubov.hpp"
#include "bosegas/dyson.hpp"
#include "bosegas/fock.hpp"
#include "bosegas/gp.hpp"
#include "bosegas/grid.hpp"
#include "bosegas/ideal_gas.hpp"
#include "bosegas/lattice.hpp"
#include "bosegas/potential.hpp"
#include "bosegas/rng.hpp"
#include "bosegas/scattering.hpp"
#include "bosegas/tdgp.hpp"

namespace fs = std::filesystem;
using namespace bosegas;

namespace {

std::string g_cli;  // path of the command-line binary under test

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw CheckFailure(message);
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

double least_squares_slope(const std::vector<double>& x,
                           const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double binomial(long n, long k) {
  double result = 1.0;
  for (long i = 1; i <= k; ++i)
    result *= static_cast<double>(n - k + i) / static_cast<double>(i);
  return result;
}

// --- scattering ---------------------------------------------------------

std::string check_hard_core() {
  double worst = 0.0, slowest = 0.0;
  for (double radius : {0.25, 0.5, 1.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sol = scattering::solve_zero_energy(
        RadialPotential::hard_core(radius), std::max(2.5, 2.5 * radius));
    const double dt = elapsed_seconds(t0);
    const double rel = std::abs(sol.a - radius) / radius;
    require(rel <= 1e-6, "radius " + num(radius) + ": relative error " +
                             num(rel) + " exceeds 1e-6");
    require(dt < 1.0, "radius " + num(radius) + ": took " + num(dt) + " s");
    worst = std::max(worst, rel);
    slowest = std::max(slowest, dt);
  }
  return "worst relative error " + num(worst) + ", slowest solve " +
         num(slowest) + " s";
}

std::string check_square_well() {
  // Repulsive well: the interior solution is hyperbolic, so the intercept is
  // a = R (1 - tanh(kR)/(kR)) with k = sqrt(V0/2).
  double worst = 0.0;
  for (const auto& [v0, radius] :
       std::vector<std::pair<double, double>>{{1.0, 1.0}, {4.0, 0.5}}) {
    const double k = std::sqrt(v0 / 2.0);
    const double exact = radius * (1.0 - std::tanh(k * radius) / (k * radius));
    const auto sol = scattering::solve_zero_energy(
        RadialPotential::square_well(v0, radius), std::max(2.5, 2.5 * radius));
    const double rel = std::abs(sol.a - exact) / std::abs(exact);
    require(rel <= 1e-6, "V0=" + num(v0) + " R=" + num(radius) +
                             ": relative error " + num(rel));
    worst = std::max(worst, rel);
  }
  return "worst relative error " + num(worst);
}

std::string check_scaling_law() {
  const RadialPotential v = RadialPotential::gaussian(4.0, 0.5);
  const double r_max = std::max(2.5 * v.range(), 2.5);
  const double base = scattering::solve_zero_energy(v, r_max).a;
  double worst = 0.0;
  for (double n : {2.0, 10.0, 100.0}) {
    const double scaled = scattering::scaled_scattering_length(v, n, r_max);
    const double ratio = scaled * n / base;
    require(std::abs(ratio - 1.0) <= 1e-8,
            "N=" + num(n) + ": ratio deviates by " + num(ratio - 1.0));
    worst = std::max(worst, std::abs(ratio - 1.0));
  }
  return "worst ratio deviation " + num(worst);
}

std::string check_first_order_bound() {
  // 8 pi a < integral of the potential, i.e. a stays strictly below half the
  // second moment, for every integrable shape.
  const std::vector<RadialPotential> shapes = {
      RadialPotential::square_well(1.0, 1.0),
      RadialPotential::square_well(4.0, 0.5),
      RadialPotential::square_well(12.0, 0.7),
      RadialPotential::gaussian(2.0, 0.5),
      RadialPotential::gaussian(8.0, 0.3)};
  double tightest = std::numeric_limits<double>::infinity();
  for (const auto& v : shapes) {
    const double r_max = std::max(2.5 * v.range(), 2.5);
    const double a = scattering::solve_zero_energy(v, r_max).a;
    const double bound = v.born_scattering_length();
    require(a < bound, "shape with range " + num(v.range()) +
                           ": a=" + num(a) + " does not stay below " +
                           num(bound));
    tightest = std::min(tightest, (bound - a) / bound);
  }
  return "tightest relative margin " + num(tightest);
}

std::string check_localization_inequality() {
  const auto t0 = std::chrono::steady_clock::now();
  int violations = 0;
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    const auto t = scattering::make_random_dyson_trial(derive_seed(5001, trial));
    const auto res =
        scattering::dyson_check(t.v, t.mu, t.shell, t.phi, t.ball_radius);
    if (!res.satisfied) ++violations;
  }
  const double dt = elapsed_seconds(t0);
  require(violations == 0, std::to_string(violations) + " of 1000 trials failed");
  require(dt < 60.0, "1000 trials took " + num(dt) + " s");
  return "1000 trials, 0 violations, " + num(dt) + " s";
}

// --- ideal gas ----------------------------------------------------------

std::string check_ideal_gas() {
  // Frozen from tests/oracles/thermo_constants.py: zeta(3/2)/(4 pi)^(3/2).
  const double series = 0.05864362134764442;
  const double got = ideal_gas::critical_density(1.0);
  require(std::abs(got - series) <= 1e-10,
          "critical density off by " + num(got - series));
  const double rho = 2.0 * got;
  const double fraction =
      ideal_gas::condensate_fraction_extrapolated(1.0, rho, 8.0);
  require(std::abs(fraction - 0.5) <= 1e-2,
          "extrapolated fraction " + num(fraction) + " vs 1/2");
  return "fraction at twice the critical density: " + num(fraction);
}

// --- condensate functional ----------------------------------------------

std::string check_gp_minimizer() {
  // Flat torus: the constant state is the exact minimizer and its energy is
  // the quartic coupling itself.
  const GridSpec g = GridSpec::torus(3, 16);
  const SpectralWorkspace ws(g);
  gp::GpProblem p;
  p.grid = g;
  p.coupling = gp::coupling_3d(0.02);
  const auto flat = gp::minimize_gp(p, ws, gp::random_state(g, 40));
  const double flat_err = std::abs(flat.energy.total - p.coupling);
  require(flat_err <= 1e-8, "torus energy off by " + num(flat_err));

  // Linear problem in a quadratic trap: ground energy 3 (one unit per axis).
  const GridSpec gb = GridSpec::box(3, 64, 8.0);
  const SpectralWorkspace wsb(gb);
  gp::GpProblem pb;
  pb.grid = gb;
  pb.v_ext = gp::harmonic_potential(gb);
  const auto osc = gp::minimize_gp(pb, wsb, gp::gaussian_state(gb, 1.15));
  const double osc_err = std::abs(osc.energy.total - 3.0);
  require(osc_err <= 1e-6, "oscillator energy off by " + num(osc_err));
  require(std::abs(osc.mu - 3.0) <= 1e-6,
          "oscillator mu off by " + num(osc.mu - 3.0));
  return "torus error " + num(flat_err) + ", oscillator error " + num(osc_err);
}

double real_pairing(const GridSpec& g, const gp::Field& a, const gp::Field& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return g.cell_volume() * s;
}

std::string check_gp_gradient() {
  const GridSpec g = GridSpec::box(3, 8, 3.0);
  const SpectralWorkspace ws(g);
  gp::GpProblem p;
  p.grid = g;
  p.v_ext = gp::harmonic_potential(g);
  p.coupling = 1.7;
  gp::Field phi = gp::random_state(g, 17);
  for (std::complex<double>& x : phi) x *= 1.37;  // deliberately unnormalized
  const gp::GpEvaluation ev = gp::evaluate(p, ws, phi);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const gp::Field dir = gp::random_state(g, derive_seed(88, k));
    gp::Field plus = phi, minus = phi;
    const double t = 1e-5;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      plus[i] += t * dir[i];
      minus[i] -= t * dir[i];
    }
    const double fd = (gp::evaluate(p, ws, plus).energy.total -
                       gp::evaluate(p, ws, minus).energy.total) /
                      (2.0 * t);
    const double lin = 2.0 * real_pairing(g, ev.gradient, dir);
    const double rel = std::abs(fd - lin) / std::max(1.0, std::abs(fd));
    require(rel <= 1e-6,
            "direction " + std::to_string(k) + ": deviation " + num(rel));
    worst = std::max(worst, rel);
  }
  return "worst directional deviation " + num(worst);
}

// --- time evolution -----------------------------------------------------

double max_energy_drift(const gp::GpProblem& p, const SpectralWorkspace& ws,
                        const gp::Field& initial, double dt, int steps) {
  const tdgp::StrangPropagator prop(p, ws, dt);
  gp::Field phi = initial;
  const double e0 = gp::evaluate(p, ws, phi).energy.total;
  double drift = 0.0;
  for (int s = 0; s < steps; ++s) {
    prop.step(phi);
    drift = std::max(drift, std::abs(gp::evaluate(p, ws, phi).energy.total - e0));
  }
  return drift;
}

std::string check_time_evolution() {
  // Norm conservation over ten thousand steps.
  {
    const GridSpec g = GridSpec::torus(3, 20, 4.0);
    const SpectralWorkspace ws(g);
    gp::GpProblem p;
    p.grid = g;
    p.v_ext = gp::sample_scalar(g, [](double x, double y, double z) {
      const double w = 2.0 * 3.14159265358979323846 / 4.0;
      return 1.0 + 0.5 * std::sin(w * x) + 0.3 * std::cos(w * y) +
             0.2 * std::sin(w * z);
    });
    p.coupling = 0.8;
    const auto res = tdgp::evolve(p, ws, gp::random_state(g, 21), 1e-3, 10000);
    const double drift = std::abs(res.norm_final - res.norm_initial);
    require(drift <= 1e-12, "norm drifted by " + num(drift));
  }

  // Energy drift falls at second order under step halving.
  const GridSpec g = GridSpec::box(3, 16, 6.0);
  const SpectralWorkspace ws(g);
  gp::GpProblem p;
  p.grid = g;
  p.v_ext = gp::harmonic_potential(g);
  p.coupling = 0.5;
  gp::Field displaced(g.size());
  std::size_t flat = 0;
  for (int ix = 0; ix < g.n[0]; ++ix)
    for (int iy = 0; iy < g.n[1]; ++iy)
      for (int iz = 0; iz < g.n[2]; ++iz, ++flat) {
        const double x = g.coordinate(0, ix) - 1.0;
        const double y = g.coordinate(1, iy);
        const double z = g.coordinate(2, iz);
        displaced[flat] = {std::exp(-0.5 * (x * x + y * y + z * z)), 0.0};
      }
  gp::normalize(g, displaced);
  const double horizon = 2.0;
  const double d1 = max_energy_drift(p, ws, displaced, 0.02, int(horizon / 0.02));
  const double d2 = max_energy_drift(p, ws, displaced, 0.01, int(horizon / 0.01));
  const double d3 = max_energy_drift(p, ws, displaced, 0.005, int(horizon / 0.005));
  const double order12 = std::log2(d1 / d2);
  const double order23 = std::log2(d2 / d3);
  for (double order : {order12, order23})
    require(order >= 1.8 && order <= 2.2, "drift order " + num(order));

  // A minimizer output is stationary up to a global phase.
  const auto ground = gp::minimize_gp(p, ws, gp::gaussian_state(g, 1.2));
  const auto evolved = tdgp::evolve(p, ws, ground.phi, 1e-3, 1000);
  std::complex<double> inner{0.0, 0.0};
  for (std::size_t i = 0; i < ground.phi.size(); ++i)
    inner += std::conj(ground.phi[i]) * evolved.phi[i];
  const double overlap = std::abs(inner) * g.cell_volume();
  require(overlap >= 1.0 - 1e-6, "stationary overlap " + num(overlap));
  return "drift orders " + num(order12) + "/" + num(order23) + ", overlap 1-" +
         num(1.0 - overlap);
}

// --- quasi-particle theory ----------------------------------------------

std::string check_dispersion_identity() {
  Rng rng(derive_seed(1000, 0));
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double pn = rng.uniform(0.05, 40.0);
    const double a = rng.uniform(0.0, 0.5);
    const double y = 8.0 * bogoliubov::kPi * a;
    const double p2 = pn * pn;
    const double composed = std::sqrt((p2 + y) * (p2 + y) - y * y);
    const double eps = bogoliubov::dispersion_magnitude(pn, {a});
    const double rel = std::abs(composed - eps) / eps;
    require(rel <= 1e-12, "p=" + num(pn) + " a=" + num(a) +
                              ": relative gap " + num(rel));
    worst = std::max(worst, rel);
  }
  return "worst relative deviation " + num(worst);
}

std::string check_pair_oracle() {
  Rng rng(derive_seed(1100, 0));
  double worst_gap = 0.0, worst_occ = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double d = rng.uniform(0.5, 3.0);
    const double sign = rng.integer(2) == 0 ? 1.0 : -1.0;
    const double b = sign * d * rng.uniform(0.05, 0.5);
    const fock::QuadraticHamiltonian h{{d}, {b}, 0.0};
    const auto diag = fock::symplectic_diagonalize(h);
    const auto space = fock::FockSpace::product(2, 60);
    const auto levels = fock::excited_levels(h, space, 2);
    const double gap_err =
        std::abs((levels[1] - levels[0]) - std::sqrt(d * d - b * b));
    require(gap_err <= 1e-6,
            "trial " + std::to_string(trial) + ": gap off by " + num(gap_err));
    const auto ground = fock::exact_ground_state(h, space);
    const double occ = ground.occupations[0] + ground.occupations[1];
    const double occ_err = std::abs(occ - (d - diag.eps[0]) / diag.eps[0]);
    require(occ_err <= 1e-6, "trial " + std::to_string(trial) +
                                 ": occupation off by " + num(occ_err));
    worst_gap = std::max(worst_gap, gap_err);
    worst_occ = std::max(worst_occ, occ_err);
  }

  // Two interacting pairs: the exact level gaps must reproduce the
  // quasi-particle line enumeration in order, degeneracies included.
  const fock::QuadraticHamiltonian h2{{1.5, 2.2}, {0.5, 0.9}, 0.0};
  const auto diag2 = fock::symplectic_diagonalize(h2);
  const auto space4 = fock::FockSpace::product(4, 10);
  const auto levels = fock::excited_levels(h2, space4, 8);
  const double e1 = diag2.eps[0], e2 = diag2.eps[1];
  const auto lines =
      bogoliubov::enumerate_levels({e1, e1, e2, e2}, 2.0 * e1 + 1e-9);
  std::vector<double> expected;
  for (const auto& line : lines)
    for (std::uint64_t c = 0; c < line.degeneracy; ++c)
      expected.push_back(line.energy);
  require(expected.size() >= levels.size(), "enumeration returned too few lines");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double diff = std::abs((levels[k] - levels[0]) - expected[k]);
    require(diff <= 1e-6,
            "level " + std::to_string(k) + " off by " + num(diff));
  }
  return "worst single-pair gap " + num(worst_gap) + ", occupation " +
         num(worst_occ);
}

std::string check_excitation_map() {
  double worst = 0.0;
  for (long n : {2L, 3L, 4L}) {
    for (int modes : {2, 3}) {
      const auto report = fock::excitation_map_check(n, modes);
      require(report.sector_dimension ==
                  static_cast<std::size_t>(binomial(n + modes, modes) + 0.5),
              "sector dimension mismatch at N=" + std::to_string(n));
      for (double dev :
           {report.transfer_deviation, report.condensate_number_deviation,
            report.raising_deviation, report.composed_deviation}) {
        require(dev <= 1e-12, "identity deviation " + num(dev));
        worst = std::max(worst, dev);
      }
    }
  }
  return "largest identity deviation " + num(worst);
}

// --- lattice sums -------------------------------------------------------

std::string check_finite_volume_constant() {
  bogoliubov::ELambdaOptions opts;
  opts.m_max = 256;
  opts.extrapolation_levels = 3;
  opts.threads = 2;
  const auto res = bogoliubov::e_lambda(opts);
  require(res.window_means.size() == 3, "expected three window means");
  const double gap1 = std::abs(res.window_means[1] - res.window_means[0]);
  const double gap2 = std::abs(res.window_means[2] - res.window_means[1]);
  require(gap1 <= 1e-3 && gap2 <= 1e-3,
          "doubling gaps " + num(gap1) + ", " + num(gap2));
  for (int m : {8, 23, 64}) {
    const double full = bogoliubov::cube_partial_sum(m);
    const double octant = bogoliubov::cube_partial_sum_octant(m);
    require(std::abs(full - octant) <= 1e-12,
            "octant recomputation at M=" + std::to_string(m) + " off by " +
                num(full - octant));
  }
  return "value " + num(res.value) + ", doubling gaps " + num(gap1) + "/" +
         num(gap2);
}

std::string check_sum_tails() {
  const double a = 0.1;
  const double e_lambda_value = 10.413633;  // tests/oracles/elambda_study.py
  const double cutoff = 16.0 * bogoliubov::kPi;

  const auto energy_near =
      bogoliubov::ground_state_energy(1000, a, cutoff, e_lambda_value);
  const auto energy_far =
      bogoliubov::ground_state_energy(1000, a, 2.0 * cutoff, e_lambda_value);
  const double energy_change =
      std::abs(energy_far.term_bogoliubov_sum - energy_near.term_bogoliubov_sum);
  require(energy_change < energy_near.tail_estimate,
          "energy sum moved " + num(energy_change) + " vs bound " +
              num(energy_near.tail_estimate));

  const auto depl_near = bogoliubov::depletion(a, cutoff);
  const auto depl_far = bogoliubov::depletion(a, 2.0 * cutoff);
  const double depl_change = std::abs(depl_far.value - depl_near.value);
  require(depl_change < depl_near.tail_estimate,
          "depletion sum moved " + num(depl_change) + " vs bound " +
              num(depl_near.tail_estimate));

  // Both summands fall off at fourth order in |p|.
  const auto counts = lattice::shell_counts(400);
  std::vector<double> lx, le, ld;
  for (int s = 50; s <= 400; ++s) {
    if (counts[static_cast<std::size_t>(s)] == 0) continue;
    const double p2 = bogoliubov::kTwoPi * bogoliubov::kTwoPi * double(s);
    lx.push_back(0.5 * std::log(p2));
    le.push_back(std::log(std::abs(bogoliubov::energy_summand(p2, a))));
    ld.push_back(std::log(bogoliubov::depletion_summand(p2, a)));
  }
  const double slope_energy = least_squares_slope(lx, le);
  const double slope_depletion = least_squares_slope(lx, ld);
  for (double slope : {slope_energy, slope_depletion})
    require(slope >= -4.3 && slope <= -3.7, "summand slope " + num(slope));
  return "slopes " + num(slope_energy) + " / " + num(slope_depletion) +
         ", changes within bounds";
}

std::string check_spectrum_enumeration() {
  const double a = 0.02;
  const double eps1 = bogoliubov::dispersion({1, 0, 0}, {a});
  const auto vacuum_only = bogoliubov::enumerate_spectrum(a, 0.999 * eps1);
  require(vacuum_only.size() == 1 && vacuum_only[0].energy == 0.0 &&
              vacuum_only[0].degeneracy == 1,
          "threshold below the first mode must leave only the vacuum");
  const auto low = bogoliubov::enumerate_spectrum(a, 1.5 * eps1);
  require(low.size() >= 2, "first excitation line missing");
  require(low[1].degeneracy == 6,
          "first line degeneracy " + std::to_string(low[1].degeneracy));
  require(std::abs(low[1].energy - eps1) <= 1e-9, "first line misplaced");

  // Free case: per-line counts against a direct knapsack over the explicit
  // lattice modes (no shell grouping, no closed-form combinatorics).
  const int k_max = 9;
  std::vector<int> mode_weights;
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y)
      for (int z = -3; z <= 3; ++z) {
        const int s = x * x + y * y + z * z;
        if (s >= 1 && s <= k_max) mode_weights.push_back(s);
      }
  std::vector<std::uint64_t> ways(k_max + 1, 0);
  ways[0] = 1;
  for (int s : mode_weights)
    for (int e = s; e <= k_max; ++e) ways[e] += ways[e - s];

  const double unit = bogoliubov::kTwoPi * bogoliubov::kTwoPi;
  const auto lines = bogoliubov::enumerate_spectrum(0.0, unit * (k_max + 0.5));
  require(lines.size() == static_cast<std::size_t>(k_max + 1),
          "expected " + std::to_string(k_max + 1) + " lines, got " +
              std::to_string(lines.size()));
  std::uint64_t total = 0;
  for (int t = 0; t <= k_max; ++t) {
    require(lines[t].degeneracy == ways[t],
            "line " + std::to_string(t) + ": " +
                std::to_string(lines[t].degeneracy) + " vs " +
                std::to_string(ways[t]));
    require(std::abs(lines[t].energy - unit * t) <= 1e-9 * (1.0 + unit * t),
            "line " + std::to_string(t) + " misplaced");
    total += ways[t];
  }
  return std::to_string(total) + " occupation maps across " +
         std::to_string(lines.size()) + " free lines";
}

// --- command-line determinism --------------------------------------------

int run_command(const std::string& args) {
  const std::string cmd = g_cli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::vector<char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::vector<char>(std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>());
}

std::string compare_trees(const fs::path& a, const fs::path& b) {
  const auto list = [](const fs::path& root) {
    std::vector<fs::path> rel;
    for (const auto& entry : fs::recursive_directory_iterator(root))
      if (entry.is_regular_file())
        rel.push_back(fs::relative(entry.path(), root));
    std::sort(rel.begin(), rel.end());
    return rel;
  };
  const auto la = list(a), lb = list(b);
  if (la != lb) return "file lists differ";
  for (const auto& r : la)
    if (read_bytes(a / r) != read_bytes(b / r))
      return "bytes differ in " + r.string();
  return {};
}

std::string check_cli_determinism() {
  require(!g_cli.empty(), "pass the command-line binary as argv[1]");
  const fs::path base = fs::temp_directory_path() / "bosegas_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);

  int files_checked = 0;
  const std::vector<std::string> runs = {
      "gp-min --n 12 --a 0.02 --init random --seed 7",
      "oracle pair --D 50 --B 10 --nmax 60"};
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const fs::path dir_a = base / ("run" + std::to_string(k) + "a");
    const fs::path dir_b = base / ("run" + std::to_string(k) + "b");
    require(run_command(runs[k] + " --out " + dir_a.string()) == 0,
            "first run failed: " + runs[k]);
    require(run_command(runs[k] + " --out " + dir_b.string()) == 0,
            "second run failed: " + runs[k]);
    const std::string diff = compare_trees(dir_a, dir_b);
    require(diff.empty(), runs[k] + ": " + diff);
    for (const auto& entry : fs::recursive_directory_iterator(dir_a))
      if (entry.is_regular_file()) ++files_checked;
  }
  fs::remove_all(base);
  return std::to_string(files_checked) + " files byte-identical across re-runs";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli = argv[1];

  struct Check {
    const char* name;
    std::function<std::string()> run;
  };
  const std::vector<Check> checks = {
      {"hard-core scattering length matches the core radius", check_hard_core},
      {"square-well scattering length matches the closed form",
       check_square_well},
      {"scattering length obeys the 1/N scaling law", check_scaling_law},
      {"scattering length stays below its first-order bound",
       check_first_order_bound},
      {"kinetic-energy localization inequality holds on random trials",
       check_localization_inequality},
      {"ideal-gas critical density and finite-size condensate fraction",
       check_ideal_gas},
      {"condensate minimizer reproduces flat-torus and oscillator energies",
       check_gp_minimizer},
      {"energy gradient matches centered finite differences",
       check_gp_gradient},
      {"time evolution conserves the norm and drifts at second order",
       check_time_evolution},
      {"dispersion law matches its quadratic-form composition",
       check_dispersion_identity},
      {"pair Hamiltonians match the closed-form diagonalization",
       check_pair_oracle},
      {"excitation-map identities hold on fixed-number sectors",
       check_excitation_map},
      {"finite-volume constant is stable under cube doubling",
       check_finite_volume_constant},
      {"lattice-sum tails are bounded and decay at fourth order",
       check_sum_tails},
      {"spectrum enumeration matches a brute-force mode count",
       check_spectrum_enumeration},
      {"command-line runs are byte-identical when repeated",
       check_cli_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    std::string verdict = "PASS", detail;
    try {
      detail = checks[i].run();
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = e.what();
      ++failures;
    }
    std::printf("%s %2zu. %s — %s\n", verdict.c_str(), i + 1, checks[i].name,
                detail.c_str());
    std::fflush(stdout);
  }
  if (failures == 0)
    std::printf("all %zu checks passed\n", checks.size());
  else
    std::printf("%d of %zu checks failed\n", failures, checks.size());
  return failures;
}
