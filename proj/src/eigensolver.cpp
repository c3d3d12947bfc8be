#include "ultrastrong/eigensolver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ultrastrong/quadrature.hpp"  // ConvergenceError

namespace ultrastrong {

double infinity_norm(const SparseMatrix& H) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < H.outerSize(); ++i) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(H, i); it; ++it) row += std::abs(it.value());
    best = std::max(best, row);
  }
  return best;
}

Eigen::VectorXd default_start_vector(Eigen::Index dimension) {
  Eigen::VectorXd v(dimension);
  for (Eigen::Index i = 0; i < dimension; ++i) v[i] = 1.0 / std::sqrt(static_cast<double>(i + 1));
  return v.normalized();
}

EigenPair lowest_eigenpair(const SparseMatrix& H, const EigenOptions& options,
                           const Eigen::VectorXd* start) {
  const Eigen::Index n = H.rows();
  if (n == 0 || H.cols() != n) throw std::invalid_argument("lowest_eigenpair: matrix must be square and non-empty");
  if (options.krylov_dim < 2) throw std::invalid_argument("lowest_eigenpair: krylov_dim must be >= 2");

  const double scale = std::max(infinity_norm(H), std::numeric_limits<double>::min());
  Eigen::VectorXd x = start ? *start : default_start_vector(n);
  if (x.size() != n) throw std::invalid_argument("lowest_eigenpair: start vector has wrong size");
  const double x_norm = x.norm();
  if (!(x_norm > 0.0)) throw std::invalid_argument("lowest_eigenpair: start vector is zero");
  x /= x_norm;

  const Eigen::Index m_max = std::min<Eigen::Index>(options.krylov_dim, n);
  Eigen::MatrixXd V(n, m_max);
  std::vector<double> alpha;
  std::vector<double> beta;
  alpha.reserve(m_max);
  beta.reserve(m_max);

  EigenPair out{0.0, {}, 0.0, scale, 0.0, 0};
  double residual = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    alpha.clear();
    beta.clear();
    V.col(0) = x;
    Eigen::Index k = 0;  // Krylov dimension built so far
    bool invariant = false;
    Eigen::VectorXd w(n);
    for (Eigen::Index j = 0; j < m_max; ++j) {
      w.noalias() = H * V.col(j);
      ++out.matvecs;
      alpha.push_back(V.col(j).dot(w));
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd coeffs = V.leftCols(j + 1).transpose() * w;
        w.noalias() -= V.leftCols(j + 1) * coeffs;
      }
      k = j + 1;
      const double b = w.norm();
      if (b <= 1e-13 * scale) {
        invariant = true;
        break;
      }
      if (j + 1 < m_max) {
        beta.push_back(b);
        V.col(j + 1) = w / b;
      }
    }

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(T);
    const double theta = tri.eigenvalues()[0];
    x = V.leftCols(k) * tri.eigenvectors().col(0);
    x.normalize();

    Eigen::VectorXd r = H * x;
    ++out.matvecs;
    r -= theta * x;
    residual = r.norm();
    out.energy = theta;
    out.gap = k > 1 ? tri.eigenvalues()[1] - theta : std::numeric_limits<double>::infinity();
    if (residual <= options.tol * scale || (invariant && residual <= 1e-8 * scale)) {
      out.state = std::move(x);
      out.residual = residual;
      return out;
    }
  }
  throw ConvergenceError("lowest_eigenpair: Lanczos did not converge", residual / scale);
}

}  // namespace ultrastrong
