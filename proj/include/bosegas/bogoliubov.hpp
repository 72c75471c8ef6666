#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/lattice.hpp"
#include "bosegas/summation.hpp"

// Second-order theory of the dilute Bose gas on the unit torus: the
// quasi-particle dispersion law, the two-term ground-state energy expansion
// with its finite-volume lattice constant, the condensate depletion, and
// exact enumeration of the low-lying excitation spectrum. Momenta live on
// the dual lattice 2 pi Z^3; all infinite sums are either absolutely
// convergent (evaluated with spherical cutoffs plus analytic tail bounds)
// or conditionally convergent (evaluated with the cube truncation they are
// defined by, plus windowed averaging of the partial sums).
namespace bosegas::bogoliubov {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// ---------------------------------------------------------------------------
// Dispersion law
// ---------------------------------------------------------------------------

struct DispersionParams {
  double a = 0.0;  // scattering length of the pair interaction; a >= 0

  void validate() const {
    if (!(a >= 0.0) || !std::isfinite(a))
      throw DomainError("scattering length must be finite and >= 0");
  }
};

namespace detail {

// eps as a function of the squared momentum, factored as
// sqrt(p^2) sqrt(p^2 + 16 pi a) so that a == 0 reproduces p^2 exactly and
// large p^2 never overflows the intermediate square. Assumes validated
// arguments.
inline double dispersion_from_p2(double p2, double a) {
  if (a == 0.0) return p2;
  return std::sqrt(p2) * std::sqrt(p2 + 16.0 * kPi * a);
}

}  // namespace detail

// eps(|p|) = sqrt(|p|^4 + 16 pi a |p|^2) at a real momentum magnitude.
inline double dispersion_magnitude(double p_norm, const DispersionParams& params) {
  params.validate();
  if (!(p_norm > 0.0)) throw ZeroMomentum("dispersion needs |p| > 0");
  return detail::dispersion_from_p2(p_norm * p_norm, params.a);
}

// Dispersion at a dual-lattice momentum p = 2 pi m, m integer. Works from
// the exact squared momentum (2 pi)^2 |m|^2, so a == 0 gives |p|^2 exactly.
inline double dispersion(const std::array<int, 3>& m, const DispersionParams& params) {
  params.validate();
  const double m2 = double(m[0]) * m[0] + double(m[1]) * m[1] + double(m[2]) * m[2];
  if (m2 == 0.0) throw ZeroMomentum("dispersion needs p != 0");
  return detail::dispersion_from_p2(kTwoPi * kTwoPi * m2, params.a);
}

// ---------------------------------------------------------------------------
// Summands of the absolutely convergent lattice sums
// ---------------------------------------------------------------------------

// Energy-correction bracket at squared momentum p2:
//   B(p) = p^2 + 8 pi a - eps(p) - (8 pi a)^2 / (2 p^2).
// Writing x = p^2 + 8 pi a, y = 8 pi a one has eps = sqrt(x^2 - y^2) =
// x - y^2/(x + eps), so B = y^2/(x + eps) - y^2/(2 p^2) < 0 strictly for
// a > 0 (since x + eps > 2 p^2), with |B| <= y^3 / (2 p^4). We evaluate it
// through that difference of reciprocals, which is exact about the
// cancellation and makes the a == 0 case vanish identically.
inline double energy_summand(double p2, double a) {
  if (!(p2 > 0.0)) throw ZeroMomentum("summand needs |p| > 0");
  if (!(a >= 0.0)) throw DomainError("scattering length must be >= 0");
  if (a == 0.0) return 0.0;
  const double y = 8.0 * kPi * a;
  const double x = p2 + y;
  const double eps = std::sqrt(p2) * std::sqrt(p2 + 2.0 * y);
  return y * y * (1.0 / (x + eps) - 1.0 / (2.0 * p2));
}

// Depletion summand G(p) = (p^2 + 8 pi a - eps(p)) / (2 eps(p)) >= 0,
// evaluated through the same cancellation-free split: numerator =
// y^2 / (x + eps).
inline double depletion_summand(double p2, double a) {
  if (!(p2 > 0.0)) throw ZeroMomentum("summand needs |p| > 0");
  if (!(a >= 0.0)) throw DomainError("scattering length must be >= 0");
  if (a == 0.0) return 0.0;
  const double y = 8.0 * kPi * a;
  const double x = p2 + y;
  const double eps = std::sqrt(p2) * std::sqrt(p2 + 2.0 * y);
  return y * y / ((x + eps) * 2.0 * eps);
}

namespace detail {

// Largest integer shell s with (2 pi)^2 s <= cutoff^2, with a relative slack
// of 1e-12 so that cutoffs specified as exact multiples of 2 pi include
// their boundary shell.
inline int max_shell(double cutoff) {
  if (!(cutoff > 0.0) || !std::isfinite(cutoff))
    throw DomainError("momentum cutoff must be finite and positive");
  const double raw = cutoff * cutoff / (kTwoPi * kTwoPi);
  return static_cast<int>(std::floor(raw * (1.0 + 1e-12)));
}

// Sum of f(p^2) over the dual lattice points 0 < |p| <= cutoff, grouped by
// integer shells |p|^2 = (2 pi)^2 s and reduced pairwise.
template <typename F>
double shell_sum(double cutoff, F&& f) {
  const int s_max = max_shell(cutoff);
  const auto counts = lattice::shell_counts(s_max);
  std::vector<double> terms;
  terms.reserve(counts.size());
  for (int s = 1; s <= s_max; ++s) {
    if (counts[static_cast<std::size_t>(s)] == 0) continue;
    const double p2 = kTwoPi * kTwoPi * static_cast<double>(s);
    terms.push_back(static_cast<double>(counts[static_cast<std::size_t>(s)]) * f(p2));
  }
  return pairwise_sum(terms);
}

// Tail bound scaffold: sum over dual-lattice points |p| > P of 1/p^4.
// Each lattice point owns a disjoint cube of side 2 pi (half-diagonal
// sqrt(3) pi); on its cube, 1/|p|^4 <= kappa / |x|^4 with
// kappa = ((P + sqrt(3) pi)/P)^4, and the cubes lie inside |x| > P - sqrt(3) pi.
// Hence the sum is at most
//   kappa / (2 pi)^3 * Int_{|x| > P - sqrt(3) pi} |x|^{-4} dx
//     = kappa / (2 pi^2 (P - sqrt(3) pi)).
inline double quartic_tail_factor(double cutoff) {
  const double margin = std::sqrt(3.0) * kPi;
  if (!(cutoff > 2.0 * margin))
    throw DomainError("cutoff too small for the tail bound");
  const double kappa = std::pow((cutoff + margin) / cutoff, 4);
  return kappa / (2.0 * kPi * kPi * (cutoff - margin));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// e_Lambda: the conditionally convergent finite-volume constant
// ---------------------------------------------------------------------------

// Cube partial sum S(M) = sum over integer p != 0 with max|p_i| <= M of
// cos(|p|)/|p|^2 (the constant itself is 2 - lim S(M)). Direct triple loop;
// deterministic pairwise reduction.
inline double cube_partial_sum(int m_cube) {
  if (m_cube < 1) throw DomainError("cube truncation needs M >= 1");
  std::vector<double> planes;
  for (int x = -m_cube; x <= m_cube; ++x) {
    std::vector<double> plane;
    plane.reserve(static_cast<std::size_t>(2 * m_cube + 1) * (2 * m_cube + 1));
    for (int y = -m_cube; y <= m_cube; ++y)
      for (int z = -m_cube; z <= m_cube; ++z) {
        const double p2 = double(x) * x + double(y) * y + double(z) * z;
        if (p2 == 0.0) continue;
        plane.push_back(std::cos(std::sqrt(p2)) / p2);
      }
    planes.push_back(pairwise_sum(plane));
  }
  return pairwise_sum(planes);
}

// The same sum assembled from the positive octant: q in [0,M]^3 \ {0}
// counted with weight 2^{#nonzero coordinates} (sign flips of the nonzero
// coordinates reproduce the full cube without double-counting the
// coordinate planes). Used as an independent summation path.
inline double cube_partial_sum_octant(int m_cube) {
  if (m_cube < 1) throw DomainError("cube truncation needs M >= 1");
  std::vector<double> planes;
  for (int x = 0; x <= m_cube; ++x) {
    std::vector<double> plane;
    plane.reserve(static_cast<std::size_t>(m_cube + 1) * (m_cube + 1));
    for (int y = 0; y <= m_cube; ++y)
      for (int z = 0; z <= m_cube; ++z) {
        const int nonzero = (x != 0) + (y != 0) + (z != 0);
        if (nonzero == 0) continue;
        const double p2 = double(x) * x + double(y) * y + double(z) * z;
        const double weight = static_cast<double>(1 << nonzero);
        plane.push_back(weight * std::cos(std::sqrt(p2)) / p2);
      }
    planes.push_back(pairwise_sum(plane));
  }
  return pairwise_sum(planes);
}

namespace detail {

// Sum of cos(|p|)/|p|^2 over the boundary layer max|p_i| = M (M >= 1).
// The three face families p1 = +-M (p2, p3 free), p2 = +-M (p1 short,
// p3 free), p3 = +-M (p1, p2 short), with "short" = |.| <= M-1, partition
// the layer exactly.
inline double boundary_layer_sum(int m_layer) {
  const double fixed2 = double(m_layer) * m_layer;
  std::vector<double> terms;
  const int full = 2 * m_layer + 1;
  const int shrt = 2 * m_layer - 1;
  terms.reserve(static_cast<std::size_t>(2 * (full * full + shrt * full + shrt * shrt)));
  auto face = [&](int a_lo, int a_hi, int b_lo, int b_hi) {
    for (int a = a_lo; a <= a_hi; ++a)
      for (int b = b_lo; b <= b_hi; ++b) {
        const double p2 = fixed2 + double(a) * a + double(b) * b;
        terms.push_back(2.0 * std::cos(std::sqrt(p2)) / p2);
      }
  };
  face(-m_layer, m_layer, -m_layer, m_layer);          // p1 = +-M
  face(-(m_layer - 1), m_layer - 1, -m_layer, m_layer);  // p2 = +-M
  face(-(m_layer - 1), m_layer - 1, -(m_layer - 1), m_layer - 1);  // p3 = +-M
  return pairwise_sum(terms);
}

}  // namespace detail

struct ELambdaOptions {
  int m_max = 256;              // largest cube half-side M
  int extrapolation_levels = 3; // dyadic window means at M, M/2, ..., M/2^{levels-1}
  unsigned threads = 1;         // workers for the boundary-layer fill

  void validate() const {
    if (m_max < 8) throw DomainError("e_lambda needs m_max >= 8");
    if (extrapolation_levels < 2)
      throw DomainError("e_lambda needs at least two extrapolation levels");
    int m = m_max;
    for (int k = 1; k < extrapolation_levels; ++k) {
      if (m % 2 != 0)
        throw DomainError("m_max must be divisible by 2^(levels-1)");
      m /= 2;
    }
    if (m < 8)
      throw DomainError("smallest dyadic window must still reach m_max/2^(levels-1) >= 8");
  }
};

struct ELambdaResult {
  double value = 0.0;        // windowed estimate at the largest cube
  double uncertainty = 0.0;  // spread of the last two window means
  std::vector<double> window_means;  // one entry per dyadic level, ascending M
  int m_max = 0;
  int extrapolation_levels = 0;
};

// Evaluates e_Lambda = 2 - lim_{M->inf} S(M) from the cube partial sums.
// S(M) oscillates at fixed amplitude in M (the summand only decays like
// 1/p^2), so the raw sequence does not converge numerically; a Hann-weighted
// mean of 2 - S(m) over the dyadic window m in (M/2, M],
//   w_m = sin^2(pi (m - M/2) / (M/2)),
// averages the oscillation out. The reported uncertainty is the spread of
// the last two window means; the spread sequence must not grow.
inline ELambdaResult e_lambda(const ELambdaOptions& options = {}) {
  options.validate();
  // Boundary layers are independent, so the fill parallelizes with a
  // deterministic (thread-count independent) result.
  const std::vector<double> layers = indexed_block_values(
      static_cast<std::size_t>(options.m_max), options.threads,
      [](std::size_t i) { return detail::boundary_layer_sum(static_cast<int>(i) + 1); });
  // Prefix sums: partial[m-1] = 2 - S(m).
  std::vector<double> partial(layers.size());
  double running = 0.0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    running += layers[i];
    partial[i] = 2.0 - running;
  }

  ELambdaResult result;
  result.m_max = options.m_max;
  result.extrapolation_levels = options.extrapolation_levels;
  std::vector<int> windows;
  int m = options.m_max;
  for (int k = 0; k < options.extrapolation_levels; ++k, m /= 2) windows.push_back(m);
  std::reverse(windows.begin(), windows.end());
  for (int mb : windows) {
    const int lo = mb / 2;
    std::vector<double> weighted;
    weighted.reserve(static_cast<std::size_t>(mb - lo));
    double weight_total = 0.0;
    for (int i = lo + 1; i <= mb; ++i) {
      const double w = std::pow(std::sin(kPi * double(i - lo) / double(lo)), 2);
      weighted.push_back(w * partial[static_cast<std::size_t>(i - 1)]);
      weight_total += w;
    }
    result.window_means.push_back(pairwise_sum(weighted) / weight_total);
  }

  const std::size_t n = result.window_means.size();
  result.value = result.window_means[n - 1];
  result.uncertainty = std::abs(result.window_means[n - 1] - result.window_means[n - 2]);
  if (n >= 3) {
    const double prev = std::abs(result.window_means[n - 2] - result.window_means[n - 3]);
    if (result.uncertainty > 2.0 * prev && result.uncertainty > 1e-6)
      throw NonConvergence("e_lambda window means stopped contracting");
  }
  return result;
}

// ---------------------------------------------------------------------------
// Ground-state energy and depletion
// ---------------------------------------------------------------------------

struct EnergyFormulaResult {
  double total = 0.0;
  double term_leading = 0.0;         // 4 pi a (N - 1)
  double term_finite_volume = 0.0;   // e_Lambda a^2
  double term_bogoliubov_sum = 0.0;  // -(1/2) sum of the energy bracket
  double cutoff_used = 0.0;
  double tail_estimate = 0.0;  // bound on the dropped |p| > cutoff part
  double e_lambda_used = 0.0;
  // The expansion carries an O(N^{-1/4}) model error which no computed
  // number here includes; surfaced as a label for output layers.
  static constexpr const char* kCaveat = "accuracy O(N^(-1/4)); constant not computed";
};

// Two-term ground-state energy per the second-order expansion:
//   E = 4 pi a (N - 1) + e_Lambda a^2 - (1/2) sum_{0<|p|<=cutoff} B(p),
// B the energy bracket above. The lattice sum converges absolutely
// (|B| <= (8 pi a)^3 / (2 p^4)); tail_estimate bounds the dropped part.
// e_lambda_value overrides the finite-volume constant (pass the value of a
// dedicated e_lambda() run; the default recomputes one at stock options and
// caches it).
inline EnergyFormulaResult ground_state_energy(
    long n_particles, double a, double cutoff,
    std::optional<double> e_lambda_value = std::nullopt) {
  if (n_particles < 2) throw DomainError("energy expansion needs N >= 2");
  if (!(a >= 0.0) || !std::isfinite(a))
    throw DomainError("scattering length must be finite and >= 0");
  if (!(cutoff >= 16.0 * kPi))
    throw DomainError("energy expansion needs cutoff >= 16 pi");

  EnergyFormulaResult result;
  result.cutoff_used = cutoff;
  if (e_lambda_value) {
    result.e_lambda_used = *e_lambda_value;
  } else {
    static const double cached = e_lambda().value;
    result.e_lambda_used = cached;
  }
  result.term_leading = 4.0 * kPi * a * static_cast<double>(n_particles - 1);
  result.term_finite_volume = result.e_lambda_used * a * a;
  if (a == 0.0) {
    // Every term vanishes identically; keep the zeros exact.
    result.term_finite_volume = 0.0;
    result.term_bogoliubov_sum = 0.0;
    result.tail_estimate = 0.0;
    result.total = 0.0;
    return result;
  }
  result.term_bogoliubov_sum =
      -0.5 * detail::shell_sum(cutoff, [a](double p2) { return energy_summand(p2, a); });
  // |B(p)| <= (8 pi a)^3 / (2 p^4) and the reported term carries the 1/2.
  const double y = 8.0 * kPi * a;
  result.tail_estimate = 0.25 * y * y * y * detail::quartic_tail_factor(cutoff);
  result.total = result.term_leading + result.term_finite_volume + result.term_bogoliubov_sum;
  return result;
}

struct DepletionResult {
  double value = 0.0;
  double tail_estimate = 0.0;
  double cutoff_used = 0.0;
};

// Expected number of particles outside the condensate:
//   sum_{0<|p|<=cutoff} (p^2 + 8 pi a - eps(p)) / (2 eps(p)).
// The summand is bounded by (8 pi a)^2 / (4 p^4), giving the same style of
// integral tail bound as the energy sum.
inline DepletionResult depletion(double a, double cutoff) {
  if (!(a >= 0.0) || !std::isfinite(a))
    throw DomainError("scattering length must be finite and >= 0");
  if (!(cutoff >= 4.0 * kPi))
    throw DomainError("depletion sum needs cutoff >= 4 pi");
  DepletionResult result;
  result.cutoff_used = cutoff;
  if (a == 0.0) return result;
  result.value =
      detail::shell_sum(cutoff, [a](double p2) { return depletion_summand(p2, a); });
  // G(p) <= (8 pi a)^2 / (4 p^4).
  const double y = 8.0 * kPi * a;
  result.tail_estimate = 0.25 * y * y * detail::quartic_tail_factor(cutoff);
  return result;
}

// ---------------------------------------------------------------------------
// Excitation spectrum enumeration
// ---------------------------------------------------------------------------

struct SpectrumLine {
  double energy = 0.0;
  std::uint64_t degeneracy = 0;
  // Occupations of one representative map for the line: (lattice index m,
  // occupation number) with p = 2 pi m; empty for the vacuum line.
  std::vector<std::pair<std::array<int, 3>, int>> occupations;
};

namespace detail {

// Lexicographically smallest integer vector with |m|^2 = s (s >= 1 with a
// nonempty shell); deterministic representative for spectrum lines.
inline std::array<int, 3> shell_representative(int s) {
  const int r = static_cast<int>(std::ceil(std::sqrt(double(s))));
  for (int x = -r; x <= r; ++x)
    for (int y = -r; y <= r; ++y)
      for (int z = -r; z <= r; ++z)
        if (x * x + y * y + z * z == s) return {x, y, z};
  throw DomainError("empty lattice shell");
}

struct SpectrumGroup {
  int shell = 0;       // |m|^2
  double eps = 0.0;    // dispersion of every mode in the shell
  long modes = 0;      // number of lattice vectors in the shell
};

// Number of ways to put k indistinguishable quanta into c modes:
// C(k + c - 1, c - 1), with overflow detection.
inline std::uint64_t stars_and_bars(long k, long c) {
  std::uint64_t result = 1;
  // product over i = 1..c-1 of (k + i) / i, kept exact by multiplying before
  // dividing (the intermediate product of i consecutive integers divides i!).
  for (long i = 1; i < c; ++i) {
    const std::uint64_t factor = static_cast<std::uint64_t>(k + i);
    if (result > std::numeric_limits<std::uint64_t>::max() / factor)
      throw ThresholdTooLarge("spectrum degeneracy overflows 64 bits");
    result = result * factor / static_cast<std::uint64_t>(i);
  }
  return result;
}

}  // namespace detail

// All excitation lines with total energy sum n_p eps(p) <= zeta. Modes are
// grouped by lattice shell (all modes in a shell share eps); within a group
// the number of occupation maps with k quanta is the stars-and-bars count.
// Lines within 1e-9 of each other in energy are merged into one with summed
// degeneracy. `budget` caps the enumeration work: both the mode-set size
// and the total number of occupation maps counted.
inline std::vector<SpectrumLine> enumerate_spectrum(double a, double zeta,
                                                    std::uint64_t budget = 1000000) {
  if (!(a >= 0.0) || !std::isfinite(a))
    throw DomainError("scattering length must be finite and >= 0");
  if (!(zeta > 0.0) || !std::isfinite(zeta))
    throw DomainError("spectrum threshold must be finite and positive");

  // Collect the shells with eps <= zeta (eps is strictly increasing in the
  // shell index, so stop at the first one past the threshold).
  const double slack = 1.0 + 1e-12;
  std::vector<detail::SpectrumGroup> groups;
  std::uint64_t mode_count = 0;
  std::vector<long> counts = lattice::shell_counts(16);
  for (int s = 1;; ++s) {
    if (static_cast<std::size_t>(s) >= counts.size())
      counts = lattice::shell_counts(2 * s);
    const long c = counts[static_cast<std::size_t>(s)];
    const double eps = detail::dispersion_from_p2(kTwoPi * kTwoPi * double(s), a);
    if (eps > zeta * slack) break;
    if (c == 0) continue;
    mode_count += static_cast<std::uint64_t>(c);
    if (mode_count > budget)
      throw ThresholdTooLarge("spectrum mode set exceeds the enumeration budget");
    groups.push_back({s, eps, c});
  }

  // Depth-first walk over per-group quanta. Each leaf contributes the
  // product of per-group stars-and-bars counts to its energy line.
  struct RawLine {
    double energy;
    std::uint64_t degeneracy;
    std::vector<std::pair<int, int>> shells_occupied;  // (shell, quanta)
  };
  std::vector<RawLine> raw;
  std::vector<std::pair<int, int>> stack;
  std::uint64_t total_maps = 0;
  const double energy_slack = zeta * 1e-12;

  auto emit = [&](double energy, std::uint64_t degeneracy) {
    if (degeneracy > budget || total_maps > budget - degeneracy)
      throw ThresholdTooLarge("spectrum line count exceeds the enumeration budget");
    total_maps += degeneracy;
    raw.push_back({energy, degeneracy, stack});
  };

  // Recursive lambda via explicit recursion on index.
  auto walk = [&](auto&& self, std::size_t g, double energy,
                  std::uint64_t degeneracy) -> void {
    if (g == groups.size()) {
      emit(energy, degeneracy);
      return;
    }
    const auto& group = groups[g];
    // k = 0 first (keeps the vacuum line first before sorting).
    self(self, g + 1, energy, degeneracy);
    for (long k = 1;; ++k) {
      const double added = energy + double(k) * group.eps;
      if (added > zeta + energy_slack) break;
      const std::uint64_t ways = detail::stars_and_bars(k, group.modes);
      if (degeneracy > std::numeric_limits<std::uint64_t>::max() / ways)
        throw ThresholdTooLarge("spectrum degeneracy overflows 64 bits");
      stack.emplace_back(group.shell, static_cast<int>(k));
      self(self, g + 1, added, degeneracy * ways);
      stack.pop_back();
    }
  };
  walk(walk, 0, 0.0, 1);

  std::sort(raw.begin(), raw.end(), [](const RawLine& l, const RawLine& r) {
    return l.energy < r.energy;
  });

  // Merge lines within the binning tolerance.
  std::vector<SpectrumLine> lines;
  for (const auto& entry : raw) {
    if (!lines.empty() && entry.energy - lines.back().energy <= 1e-9) {
      lines.back().degeneracy += entry.degeneracy;
      continue;
    }
    SpectrumLine line;
    line.energy = entry.energy;
    line.degeneracy = entry.degeneracy;
    for (const auto& [shell, quanta] : entry.shells_occupied)
      line.occupations.emplace_back(detail::shell_representative(shell), quanta);
    lines.push_back(std::move(line));
  }
  return lines;
}

// Excitation lines over an explicit list of mode energies (one entry per
// mode; equal energies may repeat). Same enumeration, binning, and budget
// semantics as enumerate_spectrum; representatives are omitted since the
// modes carry no lattice labels. Used to cross-check small oracle models.
inline std::vector<SpectrumLine> enumerate_levels(const std::vector<double>& mode_energies,
                                                  double threshold,
                                                  std::uint64_t budget = 1000000) {
  if (!(threshold > 0.0) || !std::isfinite(threshold))
    throw DomainError("spectrum threshold must be finite and positive");
  for (double e : mode_energies)
    if (!(e > 0.0) || !std::isfinite(e))
      throw DomainError("mode energies must be finite and positive");
  if (mode_energies.size() > budget)
    throw ThresholdTooLarge("mode set exceeds the enumeration budget");

  // Group equal energies (within 1e-12 relative) so degeneracies use
  // stars-and-bars instead of per-mode loops.
  std::vector<double> sorted = mode_energies;
  std::sort(sorted.begin(), sorted.end());
  std::vector<detail::SpectrumGroup> groups;
  for (double e : sorted) {
    if (!groups.empty() && e - groups.back().eps <= 1e-12 * std::max(1.0, e)) {
      ++groups.back().modes;
      continue;
    }
    groups.push_back({0, e, 1});
  }

  struct RawLine {
    double energy;
    std::uint64_t degeneracy;
  };
  std::vector<RawLine> raw;
  std::uint64_t total_maps = 0;
  const double energy_slack = threshold * 1e-12;
  auto walk = [&](auto&& self, std::size_t g, double energy,
                  std::uint64_t degeneracy) -> void {
    if (g == groups.size()) {
      if (degeneracy > budget || total_maps > budget - degeneracy)
        throw ThresholdTooLarge("level count exceeds the enumeration budget");
      total_maps += degeneracy;
      raw.push_back({energy, degeneracy});
      return;
    }
    const auto& group = groups[g];
    self(self, g + 1, energy, degeneracy);
    for (long k = 1;; ++k) {
      const double added = energy + double(k) * group.eps;
      if (added > threshold + energy_slack) break;
      const std::uint64_t ways = detail::stars_and_bars(k, group.modes);
      if (degeneracy > std::numeric_limits<std::uint64_t>::max() / ways)
        throw ThresholdTooLarge("level degeneracy overflows 64 bits");
      self(self, g + 1, added, degeneracy * ways);
    }
  };
  walk(walk, 0, 0.0, 1);

  std::sort(raw.begin(), raw.end(), [](const RawLine& l, const RawLine& r) {
    return l.energy < r.energy;
  });
  std::vector<SpectrumLine> lines;
  for (const auto& entry : raw) {
    if (!lines.empty() && entry.energy - lines.back().energy <= 1e-9) {
      lines.back().degeneracy += entry.degeneracy;
      continue;
    }
    lines.push_back({entry.energy, entry.degeneracy, {}});
  }
  return lines;
}

// Shape of the condensation-rate bound: constant * (zeta + 1). The constant
// is a configuration knob (the theory asserts existence, not a value); the
// default 1 matches the desk-scale oracle checks.
inline double condensation_rate_bound(double zeta, double constant = 1.0) {
  if (!(zeta >= 0.0) || !std::isfinite(zeta))
    throw DomainError("energy excess must be finite and >= 0");
  if (!(constant > 0.0) || !std::isfinite(constant))
    throw DomainError("bound constant must be finite and positive");
  return constant * (zeta + 1.0);
}

}  // namespace bosegas::bogoliubov
