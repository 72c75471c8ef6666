#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/lanczos.hpp"
#include "bosegas/summation.hpp"

// Brute-force ground truth on truncated bosonic Fock spaces over a handful
// of modes: exact creation/annihilation matrices, quadratic pair
// Hamiltonians with their closed-form Bogoliubov diagonalization, exact
// ground states and low-lying levels, reduced one-particle density
// matrices, and the unitary that identifies a fixed-N sector with the
// excitation (bounded-total) space.
namespace bosegas::fock {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class BasisKind {
  ProductCap,    // every occupation n_i <= n_max, independent modes
  TotalExact,    // sum_i n_i = n_total (fixed-N sector)
  TotalBounded,  // sum_i n_i <= n_total (excitation space over a sector)
};

// Occupation-vector basis in ascending lexicographic order. Desk scale:
// at most 8 modes, dimension capped by an explicit budget checked before
// enumeration.
class FockSpace {
 public:
  static constexpr std::uint64_t kDefaultBudget = 20000;

  static FockSpace product(int modes, int n_max, std::uint64_t budget = kDefaultBudget) {
    if (n_max < 1 || n_max > 255)
      throw DomainError("per-mode cap must lie in [1, 255]");
    return FockSpace(BasisKind::ProductCap, modes, n_max, 0, budget);
  }
  static FockSpace total_exact(int modes, long n_total,
                               std::uint64_t budget = kDefaultBudget) {
    if (n_total < 0 || n_total > 255)
      throw DomainError("sector particle number must lie in [0, 255]");
    return FockSpace(BasisKind::TotalExact, modes, static_cast<int>(n_total), n_total,
                     budget);
  }
  static FockSpace total_bounded(int modes, long n_total,
                                 std::uint64_t budget = kDefaultBudget) {
    if (n_total < 0 || n_total > 255)
      throw DomainError("total particle bound must lie in [0, 255]");
    return FockSpace(BasisKind::TotalBounded, modes, static_cast<int>(n_total), n_total,
                     budget);
  }

  BasisKind kind() const { return kind_; }
  int modes() const { return modes_; }
  int cap() const { return cap_; }  // largest occupation any mode may take
  long total() const { return total_; }
  std::size_t dimension() const { return basis_.size(); }
  const std::vector<int>& occupation(std::size_t index) const { return basis_[index]; }

  // Basis index of an occupation vector; -1 if it lies outside the space
  // (over a cap, or off the sector constraint).
  std::ptrdiff_t index_of(const std::vector<int>& occ) const {
    if (static_cast<int>(occ.size()) != modes_) return -1;
    long sum = 0;
    for (int n : occ) {
      if (n < 0 || n > cap_) return -1;
      sum += n;
    }
    if (kind_ == BasisKind::TotalExact && sum != total_) return -1;
    if (kind_ == BasisKind::TotalBounded && sum > total_) return -1;
    const auto it = index_.find(pack(occ));
    return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
  }

 private:
  FockSpace(BasisKind kind, int modes, int cap, long total, std::uint64_t budget)
      : kind_(kind), modes_(modes), cap_(cap), total_(total) {
    if (modes < 1 || modes > 8)
      throw DomainError("Fock spaces support 1 to 8 modes");
    check_budget(budget);
    std::vector<int> occ(static_cast<std::size_t>(modes), 0);
    enumerate(occ, 0, 0);
    index_.reserve(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i)
      index_.emplace(pack(basis_[i]), i);
  }

  // Predicted dimension, used to reject oversized spaces before any work:
  // (n_max+1)^m, C(N+m-1, m-1), or C(N+m, m) by kind.
  void check_budget(std::uint64_t budget) const {
    double predicted = 1.0;
    switch (kind_) {
      case BasisKind::ProductCap:
        predicted = std::pow(double(cap_) + 1.0, modes_);
        break;
      case BasisKind::TotalExact:
        predicted = binomial(total_ + modes_ - 1, modes_ - 1);
        break;
      case BasisKind::TotalBounded:
        predicted = binomial(total_ + modes_, modes_);
        break;
    }
    if (predicted > static_cast<double>(budget)) {
      std::ostringstream msg;
      msg << "Fock basis would have " << predicted << " states (budget " << budget
          << ")";
      throw BudgetExceeded(msg.str());
    }
  }

  static double binomial(long n, long k) {
    double result = 1.0;
    for (long i = 1; i <= k; ++i)
      result *= static_cast<double>(n - k + i) / static_cast<double>(i);
    return result;
  }

  void enumerate(std::vector<int>& occ, int mode, long sum) {
    if (mode == modes_) {
      if (kind_ == BasisKind::TotalExact && sum != total_) return;
      basis_.push_back(occ);
      return;
    }
    for (int n = 0; n <= cap_; ++n) {
      const long next = sum + n;
      if (kind_ != BasisKind::ProductCap && next > total_) break;
      occ[static_cast<std::size_t>(mode)] = n;
      enumerate(occ, mode + 1, next);
    }
    occ[static_cast<std::size_t>(mode)] = 0;
  }

  static std::uint64_t pack(const std::vector<int>& occ) {
    std::uint64_t key = 0;
    for (int n : occ) key = (key << 8) | static_cast<std::uint64_t>(n);
    return key;
  }

  BasisKind kind_;
  int modes_;
  int cap_;
  long total_;
  std::vector<std::vector<int>> basis_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Elementary operators
// ---------------------------------------------------------------------------

namespace detail {

inline void require_mode(const FockSpace& space, int mode) {
  if (mode < 0 || mode >= space.modes())
    throw DomainError("mode index out of range");
}

}  // namespace detail

// Annihilation matrix a_mode on a product-cap space (lowering stays inside
// the space, so the matrix is square; fixed-total sectors are not closed
// under a single annihilator -- use transfer_operator there).
inline SparseMatrix annihilator(const FockSpace& space, int mode) {
  detail::require_mode(space, mode);
  if (space.kind() != BasisKind::ProductCap)
    throw DomainError(
        "annihilator requires a product-cap space; fixed-total sectors need "
        "transfer_operator");
  const auto dim = static_cast<Eigen::Index>(space.dimension());
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const auto& occ = space.occupation(i);
    const int n = occ[static_cast<std::size_t>(mode)];
    if (n == 0) continue;
    std::vector<int> lowered = occ;
    --lowered[static_cast<std::size_t>(mode)];
    const auto j = space.index_of(lowered);
    triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), std::sqrt(double(n)));
  }
  SparseMatrix a(dim, dim);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

// Creation matrix a*_mode = transpose of the annihilator (states raised past
// the cap are dropped: that is the truncation).
inline SparseMatrix creator(const FockSpace& space, int mode) {
  return SparseMatrix(annihilator(space, mode).transpose());
}

// Diagonal occupation-number matrix n_mode (any basis kind).
inline SparseMatrix number_operator(const FockSpace& space, int mode) {
  detail::require_mode(space, mode);
  const auto dim = static_cast<Eigen::Index>(space.dimension());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(space.dimension());
  for (std::size_t i = 0; i < space.dimension(); ++i)
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i),
                          double(space.occupation(i)[static_cast<std::size_t>(mode)]));
  SparseMatrix n(dim, dim);
  n.setFromTriplets(triplets.begin(), triplets.end());
  return n;
}

// Number-conserving hop a*_p a_q (p == q gives the number operator). Square
// on every basis kind; targets outside the space are dropped (truncation on
// product caps; impossible on exact sectors).
inline SparseMatrix transfer_operator(const FockSpace& space, int p, int q) {
  detail::require_mode(space, p);
  detail::require_mode(space, q);
  if (p == q) return number_operator(space, p);
  const auto dim = static_cast<Eigen::Index>(space.dimension());
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const auto& occ = space.occupation(i);
    const int nq = occ[static_cast<std::size_t>(q)];
    if (nq == 0) continue;
    std::vector<int> moved = occ;
    --moved[static_cast<std::size_t>(q)];
    ++moved[static_cast<std::size_t>(p)];
    const auto j = space.index_of(moved);
    if (j < 0) continue;
    const double amp =
        std::sqrt(double(nq)) * std::sqrt(double(moved[static_cast<std::size_t>(p)]));
    triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), amp);
  }
  SparseMatrix t(dim, dim);
  t.setFromTriplets(triplets.begin(), triplets.end());
  return t;
}

// ---------------------------------------------------------------------------
// Quadratic pair Hamiltonians
// ---------------------------------------------------------------------------

// H = sum_j [ D_j (n_{2j} + n_{2j+1}) + B_j (a*_{2j} a*_{2j+1} + a_{2j} a_{2j+1}) ]
//     + shift,
// pair j living on modes (2j, 2j+1) of a product-cap space. Stability of
// the quadratic form requires D_j > |B_j| >= 0.
struct QuadraticHamiltonian {
  std::vector<double> d;  // per-pair diagonal coefficient
  std::vector<double> b;  // per-pair pairing coefficient
  double shift = 0.0;

  void validate() const {
    if (d.empty() || d.size() != b.size())
      throw DomainError("quadratic form needs matching nonempty D and B lists");
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (!std::isfinite(d[j]) || !std::isfinite(b[j]))
        throw UnstableForm("quadratic coefficients must be finite");
      if (!(d[j] > std::abs(b[j])))
        throw UnstableForm("stability requires D > |B| for every pair");
    }
    if (!std::isfinite(shift)) throw DomainError("energy shift must be finite");
  }
  std::size_t pairs() const { return d.size(); }
};

// Dense-in-sparse assembly of the pair Hamiltonian on `space` (product-cap,
// exactly 2 modes per pair).
inline SparseMatrix pair_hamiltonian_matrix(const QuadraticHamiltonian& h,
                                            const FockSpace& space) {
  h.validate();
  if (space.kind() != BasisKind::ProductCap)
    throw DomainError("pair Hamiltonians act on product-cap spaces");
  if (space.modes() != static_cast<int>(2 * h.pairs()))
    throw DomainError("space must provide exactly two modes per pair");
  const auto dim = static_cast<Eigen::Index>(space.dimension());
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const auto& occ = space.occupation(i);
    double diag = h.shift;
    for (std::size_t j = 0; j < h.pairs(); ++j) {
      const int na = occ[2 * j];
      const int nb = occ[2 * j + 1];
      diag += h.d[j] * double(na + nb);
      // Pair creation a*_{2j} a*_{2j+1}; its transpose provides the pair
      // annihilation term.
      if (na + 1 <= space.cap() && nb + 1 <= space.cap() && h.b[j] != 0.0) {
        std::vector<int> raised = occ;
        ++raised[2 * j];
        ++raised[2 * j + 1];
        const auto k = space.index_of(raised);
        const double amp = h.b[j] * std::sqrt(double(na + 1)) * std::sqrt(double(nb + 1));
        triplets.emplace_back(static_cast<int>(k), static_cast<int>(i), amp);
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(k), amp);
      }
    }
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), diag);
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

// ---------------------------------------------------------------------------
// Closed-form Bogoliubov diagonalization
// ---------------------------------------------------------------------------

struct BogoliubovDiag {
  std::vector<double> tau;  // hyperbolic angle per pair, tanh(2 tau) = -B/D
  std::vector<double> eps;  // quasi-particle energy sqrt(D^2 - B^2) per pair
  // Ground-state energy relative to the shift: sum over pairs of (eps - D),
  // i.e. sum over the two modes of each pair of (eps - D)/2.
  double ground_shift = 0.0;
};

inline BogoliubovDiag symplectic_diagonalize(const QuadraticHamiltonian& h) {
  h.validate();
  BogoliubovDiag out;
  out.tau.reserve(h.pairs());
  out.eps.reserve(h.pairs());
  std::vector<double> drops(h.pairs());
  for (std::size_t j = 0; j < h.pairs(); ++j) {
    out.tau.push_back(0.5 * std::atanh(-h.b[j] / h.d[j]));
    // (D-B)(D+B) keeps eps exact when B relates to D through a difference,
    // e.g. D = p^2 + 8 pi a, B = 8 pi a -> eps = sqrt(p^4 + 16 pi a p^2).
    out.eps.push_back(std::sqrt((h.d[j] - h.b[j]) * (h.d[j] + h.b[j])));
    drops[j] = out.eps[j] - h.d[j];
  }
  out.ground_shift = pairwise_sum(drops);
  return out;
}

// Smallest per-pair occupation cap that keeps the dropped squeezed-state
// weight below `tolerance`: the pair-quanta distribution is geometric with
// ratio tanh^2(tau), so the tail mass above n is tanh(tau)^{2n}.
inline int recommended_pair_cap(double tau, double tolerance = 1e-8) {
  if (!(tolerance > 0.0) || tolerance >= 1.0)
    throw DomainError("tail tolerance must lie in (0, 1)");
  const double t = std::abs(std::tanh(tau));
  if (t == 0.0) return 2;
  const double n = std::ceil(std::log(tolerance) / (2.0 * std::log(t)));
  if (!(n < 250.0)) return 250;
  return std::max(2, static_cast<int>(n));
}

// ---------------------------------------------------------------------------
// Exact eigenstates
// ---------------------------------------------------------------------------

struct GroundStateResult {
  double energy = 0.0;
  Eigen::VectorXd state;              // normalized, sign-fixed eigenvector
  std::vector<double> occupations;    // <n_mode> per mode
  double boundary_weight = 0.0;       // probability of any mode at its cap
};

namespace detail {

inline Eigen::VectorXd lowest_vector(const SparseMatrix& matrix, double& value) {
  if (matrix.rows() < 2000) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver{
        Eigen::MatrixXd(matrix)};
    if (solver.info() != Eigen::Success)
      throw EigensolveFailure("dense eigensolver did not converge");
    value = solver.eigenvalues()[0];
    Eigen::VectorXd v = solver.eigenvectors().col(0);
    lanczos::detail::fix_sign(v);
    return v;
  }
  auto pairs = lanczos::lowest_eigenpairs(matrix, 1);
  value = pairs[0].value;
  return std::move(pairs[0].vector);
}

// Weight of the truncation boundary: total probability carried by basis
// states with some occupation at the cap.
inline double boundary_weight(const FockSpace& space, const Eigen::VectorXd& v) {
  double weight = 0.0;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const auto& occ = space.occupation(i);
    if (std::any_of(occ.begin(), occ.end(),
                    [&](int n) { return n == space.cap(); }))
      weight += v[static_cast<Eigen::Index>(i)] * v[static_cast<Eigen::Index>(i)];
  }
  return weight;
}

inline std::vector<double> mode_occupations(const FockSpace& space,
                                            const Eigen::VectorXd& v) {
  std::vector<double> occupations(static_cast<std::size_t>(space.modes()), 0.0);
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const double w = v[static_cast<Eigen::Index>(i)] * v[static_cast<Eigen::Index>(i)];
    const auto& occ = space.occupation(i);
    for (int mode = 0; mode < space.modes(); ++mode)
      occupations[static_cast<std::size_t>(mode)] += w * occ[static_cast<std::size_t>(mode)];
  }
  return occupations;
}

}  // namespace detail

// Lowest eigenpair of the pair Hamiltonian on `space`, with per-mode
// occupations of the eigenvector. Dense diagonalization below dimension
// 2000, restarted Lanczos above. A truncation boundary carrying more than
// 1e-8 of the state is an error: the cap was chosen too small (see
// recommended_pair_cap).
inline GroundStateResult exact_ground_state(const QuadraticHamiltonian& h,
                                            const FockSpace& space) {
  const SparseMatrix matrix = pair_hamiltonian_matrix(h, space);
  GroundStateResult result;
  result.state = detail::lowest_vector(matrix, result.energy);
  result.boundary_weight = detail::boundary_weight(space, result.state);
  if (result.boundary_weight > 1e-8) {
    std::ostringstream msg;
    msg << "truncation boundary carries " << result.boundary_weight
        << " of the ground state; raise the occupation cap";
    throw TruncationWarning(msg.str());
  }
  result.occupations = detail::mode_occupations(space, result.state);
  return result;
}

// The k lowest eigenvalues (ascending, degenerate copies repeated). The
// ground state must clear the same truncation check as exact_ground_state.
inline std::vector<double> excited_levels(const QuadraticHamiltonian& h,
                                          const FockSpace& space, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > space.dimension())
    throw DomainError("level count must lie in [1, dimension]");
  const SparseMatrix matrix = pair_hamiltonian_matrix(h, space);
  std::vector<double> levels;
  Eigen::VectorXd ground;
  if (matrix.rows() < 2000) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver{
        Eigen::MatrixXd(matrix)};
    if (solver.info() != Eigen::Success)
      throw EigensolveFailure("dense eigensolver did not converge");
    levels.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + k);
    ground = solver.eigenvectors().col(0);
  } else {
    const auto pairs = lanczos::lowest_eigenpairs(matrix, k);
    levels.reserve(pairs.size());
    for (const auto& pair : pairs) levels.push_back(pair.value);
    ground = pairs[0].vector;
  }
  const double weight = detail::boundary_weight(space, ground);
  if (weight > 1e-8) {
    std::ostringstream msg;
    msg << "truncation boundary carries " << weight
        << " of the ground state; raise the occupation cap";
    throw TruncationWarning(msg.str());
  }
  return levels;
}

// ---------------------------------------------------------------------------
// Reduced one-particle density matrix
// ---------------------------------------------------------------------------

// M(p, q) = <state, a*_p a_q state> over the modes of `space`; real
// symmetric for the real states produced here.
inline Eigen::MatrixXd one_particle_density_matrix(const Eigen::VectorXd& state,
                                                   const FockSpace& space) {
  if (state.size() != static_cast<Eigen::Index>(space.dimension()))
    throw GeometryError("state length does not match the basis");
  if (std::abs(state.squaredNorm() - 1.0) > 1e-10)
    throw NormalizationError("density matrix needs a normalized state");
  const int m = space.modes();
  Eigen::MatrixXd density(m, m);
  for (int p = 0; p < m; ++p) {
    for (int q = p; q < m; ++q) {
      const double value = state.dot(transfer_operator(space, p, q) * state);
      density(p, q) = value;
      density(q, p) = value;
    }
  }
  return density;
}

// Condensate fraction of a density matrix: top eigenvalue over the trace.
inline double condensate_fraction(const Eigen::MatrixXd& density) {
  if (density.rows() != density.cols() || density.rows() < 1)
    throw DomainError("density matrix must be square");
  const double trace = density.trace();
  if (!(trace > 0.0)) throw DomainError("density matrix must carry particles");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(density);
  return solver.eigenvalues()[density.rows() - 1] / trace;
}

// ---------------------------------------------------------------------------
// Excitation map (fixed-N sector <-> bounded excitation space)
// ---------------------------------------------------------------------------

struct ExcitationMapReport {
  std::size_t sector_dimension = 0;
  double transfer_deviation = 0.0;        // U a*_p a_q U^T vs a*_p a_q
  double condensate_number_deviation = 0.0;  // U a*_0 a_0 U^T vs N - N_+
  double raising_deviation = 0.0;         // U a*_p a_0 U^T vs a*_p sqrt(N - N_+)
  double composed_deviation = 0.0;        // b*_p b_p vs a*_p (N - N_+) a_p / N
};

namespace detail {

inline double max_abs_entry(const SparseMatrix& diff, int& row, int& col) {
  double best = 0.0;
  row = col = 0;
  for (int outer = 0; outer < diff.outerSize(); ++outer)
    for (SparseMatrix::InnerIterator it(diff, outer); it; ++it)
      if (std::abs(it.value()) > best) {
        best = std::abs(it.value());
        row = static_cast<int>(it.row());
        col = static_cast<int>(it.col());
      }
  return best;
}

inline double check_identity(const SparseMatrix& lhs, const SparseMatrix& rhs,
                             const char* label) {
  int row = 0, col = 0;
  const double dev = max_abs_entry(SparseMatrix(lhs - rhs), row, col);
  if (dev > 1e-12) {
    std::ostringstream msg;
    msg << label << " violated by " << dev << " at entry (" << row << ", " << col
        << ")";
    throw IdentityViolation(msg.str());
  }
  return dev;
}

}  // namespace detail

// Verifies, as exact matrix identities on the N-particle sector over modes
// {0 (condensate), 1..excited_modes}, that the sector-to-excitation-space
// unitary U (the basis bijection (n_0, n_+) <-> n_+) transforms:
//   a*_p a_q -> a*_p a_q   (p, q excited),
//   a*_0 a_0 -> N - N_+,
//   a*_p a_0 -> a*_p sqrt(N - N_+),
// and that the composed excitation operators satisfy
//   b*_p b_p = a*_p (N - N_+) a_p / N.
// Any deviation beyond 1e-12 raises IdentityViolation naming the entry.
inline ExcitationMapReport excitation_map_check(long n_total, int excited_modes,
                                                std::uint64_t budget = FockSpace::kDefaultBudget) {
  if (n_total < 1 || n_total > 6)
    throw DomainError("excitation map check supports 1 <= N <= 6");
  if (excited_modes < 1 || excited_modes > 7)
    throw DomainError("excitation map check supports 1 to 7 excited modes");

  const FockSpace sector = FockSpace::total_exact(excited_modes + 1, n_total, budget);
  const FockSpace bounded = FockSpace::total_bounded(excited_modes, n_total, budget);
  if (sector.dimension() != bounded.dimension())
    throw IdentityViolation("sector and excitation space dimensions differ");
  const auto dim = static_cast<Eigen::Index>(sector.dimension());

  // U: drop the condensate occupation. A bijection because n_0 is fixed by
  // the sector constraint.
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<bool> hit(sector.dimension(), false);
  for (std::size_t i = 0; i < sector.dimension(); ++i) {
    const auto& occ = sector.occupation(i);
    const std::vector<int> rest(occ.begin() + 1, occ.end());
    const auto j = bounded.index_of(rest);
    if (j < 0 || hit[static_cast<std::size_t>(j)])
      throw IdentityViolation("sector-to-excitation basis map is not a bijection");
    hit[static_cast<std::size_t>(j)] = true;
    triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), 1.0);
  }
  SparseMatrix u(dim, dim);
  u.setFromTriplets(triplets.begin(), triplets.end());
  const SparseMatrix ut = u.transpose();

  // N_+ and the diagonal sqrt(N - N_+) on the excitation space.
  std::vector<Eigen::Triplet<double>> n_plus_triplets, root_triplets;
  for (std::size_t i = 0; i < bounded.dimension(); ++i) {
    const auto& occ = bounded.occupation(i);
    long total = 0;
    for (int n : occ) total += n;
    n_plus_triplets.emplace_back(static_cast<int>(i), static_cast<int>(i),
                                 double(total));
    root_triplets.emplace_back(static_cast<int>(i), static_cast<int>(i),
                               std::sqrt(double(n_total - total)));
  }
  SparseMatrix n_plus(dim, dim), root(dim, dim);
  n_plus.setFromTriplets(n_plus_triplets.begin(), n_plus_triplets.end());
  root.setFromTriplets(root_triplets.begin(), root_triplets.end());

  SparseMatrix identity(dim, dim);
  identity.setIdentity();
  detail::check_identity(SparseMatrix(u * ut), identity, "U U^T = 1");
  detail::check_identity(SparseMatrix(ut * u), identity, "U^T U = 1");

  ExcitationMapReport report;
  report.sector_dimension = sector.dimension();
  // Excited indices are 1.. on the sector, 0.. on the excitation space.
  for (int p = 1; p <= excited_modes; ++p) {
    for (int q = 1; q <= excited_modes; ++q) {
      const SparseMatrix lhs =
          SparseMatrix(u * transfer_operator(sector, p, q) * ut);
      const SparseMatrix rhs = transfer_operator(bounded, p - 1, q - 1);
      report.transfer_deviation = std::max(
          report.transfer_deviation,
          detail::check_identity(lhs, rhs, "U a*_p a_q U^T = a*_p a_q"));
    }
    const SparseMatrix raising_lhs =
        SparseMatrix(u * transfer_operator(sector, p, 0) * ut);
    // a*_p on the excitation space: transfer from a ghost is not available,
    // so assemble the raising matrix directly.
    std::vector<Eigen::Triplet<double>> raise_triplets;
    for (std::size_t i = 0; i < bounded.dimension(); ++i) {
      std::vector<int> raised = bounded.occupation(i);
      ++raised[static_cast<std::size_t>(p - 1)];
      const auto j = bounded.index_of(raised);
      if (j < 0) continue;
      raise_triplets.emplace_back(static_cast<int>(j), static_cast<int>(i),
                                  std::sqrt(double(raised[static_cast<std::size_t>(p - 1)])));
    }
    SparseMatrix raise(dim, dim);
    raise.setFromTriplets(raise_triplets.begin(), raise_triplets.end());
    const SparseMatrix raising_rhs = SparseMatrix(raise * root);
    report.raising_deviation = std::max(
        report.raising_deviation,
        detail::check_identity(raising_lhs, raising_rhs,
                               "U a*_p a_0 U^T = a*_p sqrt(N - N_+)"));

    // b*_p b_p assembled from the raising route vs the composed form.
    const SparseMatrix b_dag = SparseMatrix(raising_rhs / std::sqrt(double(n_total)));
    const SparseMatrix composed_lhs = SparseMatrix(b_dag * SparseMatrix(b_dag.transpose()));
    const SparseMatrix lower = SparseMatrix(raise.transpose());
    const SparseMatrix composed_rhs = SparseMatrix(
        raise * SparseMatrix((identity * double(n_total) - n_plus) * lower) /
        double(n_total));
    report.composed_deviation = std::max(
        report.composed_deviation,
        detail::check_identity(composed_lhs, composed_rhs,
                               "b*_p b_p = a*_p (N - N_+) a_p / N"));
  }
  const SparseMatrix condensate_lhs =
      SparseMatrix(u * transfer_operator(sector, 0, 0) * ut);
  const SparseMatrix condensate_rhs =
      SparseMatrix(identity * double(n_total) - n_plus);
  report.condensate_number_deviation = detail::check_identity(
      condensate_lhs, condensate_rhs, "U a*_0 a_0 U^T = N - N_+");
  return report;
}

}  // namespace bosegas::fock
