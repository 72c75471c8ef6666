#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/rng.hpp"

// Restarted Lanczos for the lowest eigenpairs of a real symmetric sparse
// matrix. Full reorthogonalization keeps the Krylov basis clean at desk
// scale, deflation against converged eigenvectors digs out degenerate
// copies, and the seeded start vector makes every run reproducible.
namespace bosegas::lanczos {

struct Options {
  double residual_tolerance = 1e-10;  // on ||A x - theta x|| / max(1, |theta|)
  int max_restarts = 200;
  int krylov_dimension = 80;
  std::uint64_t seed = 0x10a7c205u;
};

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

namespace detail {

// Removes the components of w along the columns of basis (first `count`)
// and along the deflation set; two passes of classical Gram-Schmidt.
inline void orthogonalize(Eigen::VectorXd& w, const Eigen::MatrixXd& basis, int count,
                          const std::vector<EigenPair>& deflation) {
  for (int pass = 0; pass < 2; ++pass) {
    if (count > 0) {
      const auto v = basis.leftCols(count);
      w.noalias() -= v * (v.transpose() * w);
    }
    for (const auto& pair : deflation) w -= pair.vector.dot(w) * pair.vector;
  }
}

// Deterministic sign convention: the entry of largest magnitude is positive.
inline void fix_sign(Eigen::VectorXd& v) {
  int arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v[arg] < 0.0) v = -v;
}

}  // namespace detail

// The k lowest eigenpairs of `matrix`, in ascending order of eigenvalue.
inline std::vector<EigenPair> lowest_eigenpairs(const Eigen::SparseMatrix<double>& matrix,
                                                int k, const Options& options = {}) {
  const auto dim = static_cast<int>(matrix.rows());
  if (matrix.rows() != matrix.cols())
    throw DomainError("eigensolver needs a square matrix");
  if (k < 1 || k > dim)
    throw DomainError("eigenpair count must lie in [1, dimension]");
  if (!(options.residual_tolerance > 0.0) || options.krylov_dimension < 2 ||
      options.max_restarts < 1)
    throw DomainError("invalid eigensolver options");

  std::vector<EigenPair> found;
  found.reserve(static_cast<std::size_t>(k));
  Rng rng(options.seed);

  for (int target = 0; target < k; ++target) {
    const int room = dim - target;  // dimension of the deflated complement
    const int m_cap = std::min(options.krylov_dimension, room);

    // Seeded start vector in the deflated complement.
    Eigen::VectorXd start(dim);
    for (int i = 0; i < dim; ++i) start[i] = rng.normal();
    detail::orthogonalize(start, Eigen::MatrixXd(), 0, found);
    double nrm = start.norm();
    for (int attempt = 0; nrm < 1e-12 && attempt < 8; ++attempt) {
      for (int i = 0; i < dim; ++i) start[i] = rng.normal();
      detail::orthogonalize(start, Eigen::MatrixXd(), 0, found);
      nrm = start.norm();
    }
    if (nrm < 1e-12) throw EigensolveFailure("could not seed a deflated start vector");
    start /= nrm;

    bool accepted = false;
    Eigen::MatrixXd basis(dim, m_cap);
    Eigen::VectorXd alpha(m_cap), beta(m_cap);
    for (int restart = 0; restart < options.max_restarts && !accepted; ++restart) {
      // Lanczos sweep with full reorthogonalization.
      int m = 0;
      basis.col(0) = start;
      for (int i = 0; i < m_cap; ++i) {
        Eigen::VectorXd w = matrix * basis.col(i);
        alpha[i] = basis.col(i).dot(w);
        detail::orthogonalize(w, basis, i + 1, found);
        m = i + 1;
        if (m == m_cap) break;
        beta[i] = w.norm();
        if (beta[i] < 1e-13) break;  // invariant subspace reached
        // Stop the sweep once the smallest Ritz pair has converged: running
        // past convergence grows a duplicate copy of the Ritz value, and the
        // section eigensolver may then return a mixture of the converged and
        // the half-formed copy instead of the clean vector.
        if (m >= 2) {
          Eigen::MatrixXd section = Eigen::MatrixXd::Zero(m, m);
          for (int j = 0; j < m; ++j) {
            section(j, j) = alpha[j];
            if (j + 1 < m) section(j, j + 1) = section(j + 1, j) = beta[j];
          }
          const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> probe(section);
          const double bound = beta[i] * std::abs(probe.eigenvectors()(m - 1, 0));
          if (bound <= 0.05 * options.residual_tolerance *
                           std::max(1.0, std::abs(probe.eigenvalues()[0])))
            break;
        }
        basis.col(i + 1) = w / beta[i];
      }

      // Smallest Ritz pair of the tridiagonal section.
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        tri(i, i) = alpha[i];
        if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tri);
      const double theta = small.eigenvalues()[0];
      Eigen::VectorXd x = basis.leftCols(m) * small.eigenvectors().col(0);
      detail::orthogonalize(x, Eigen::MatrixXd(), 0, found);
      const double xn = x.norm();
      if (xn < 1e-12) throw EigensolveFailure("Ritz vector collapsed under deflation");
      x /= xn;

      // Residual of the deflated operator: earlier pairs are themselves only
      // accurate to the tolerance, so their directions are excluded from the
      // convergence measure (the raw residual has a floor set by them).
      Eigen::VectorXd r = matrix * x - theta * x;
      for (const auto& pair : found) r -= pair.vector.dot(r) * pair.vector;
      const double residual = r.norm();
      if (residual <= options.residual_tolerance * std::max(1.0, std::abs(theta))) {
        detail::fix_sign(x);
        found.push_back({theta, std::move(x)});
        accepted = true;
      } else {
        start = x;  // restart from the best Ritz vector
      }
    }
    if (!accepted)
      throw EigensolveFailure("Lanczos did not reach the residual tolerance");
  }

  std::sort(found.begin(), found.end(),
            [](const EigenPair& l, const EigenPair& r) { return l.value < r.value; });
  return found;
}

}  // namespace bosegas::lanczos
