#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace ultrastrong {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct EigenOptions {
  /// Converged when ||H x - E x|| <= tol * ||H||_inf.
  double tol = 1e-11;
  int krylov_dim = 160;
  int max_restarts = 400;
};

struct EigenPair {
  double energy;
  Eigen::VectorXd state;  // unit norm
  double residual;        // ||H x - E x||
  double scale;           // ||H||_inf
  double gap;             // second Ritz value minus first, in the last Krylov space
  int matvecs;
};

/// Lowest eigenpair of a real symmetric matrix by explicitly restarted Lanczos
/// with full reorthogonalization. Without `start` the Krylov space is seeded
/// with the fixed vector v_i = 1 / sqrt(i + 1), normalized. The search only
/// sees the invariant subspace reachable from the start vector, which callers
/// use to stay inside a symmetry sector. Throws ConvergenceError.
EigenPair lowest_eigenpair(const SparseMatrix& H, const EigenOptions& options = {},
                           const Eigen::VectorXd* start = nullptr);

Eigen::VectorXd default_start_vector(Eigen::Index dimension);

/// max_i sum_j |H_ij|
double infinity_norm(const SparseMatrix& H);

}  // namespace ultrastrong
