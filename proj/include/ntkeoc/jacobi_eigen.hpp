#pragma once

#include <Eigen/Core>
#include <vector>

namespace ntkeoc {

struct EigenOptions {
  double symmetry_tol = 1e-10;  ///< max allowed |M - M^T| entry, relative to max |entry|
  double off_tol = 1e-12;       ///< stop when off-diagonal Frobenius mass < off_tol * ||M||_F
  int max_sweeps = 64;
};

/// Eigenvalues of a symmetric matrix, descending. Cyclic Jacobi with a fixed
/// row-cyclic rotation order: bit-for-bit reproducible across runs and worker
/// counts. Throws std::invalid_argument for non-symmetric input and
/// std::runtime_error if the sweep cap is hit.
std::vector<double> eigen_symmetric(const Eigen::MatrixXd& M, const EigenOptions& opts = {});

/// Eigenvalues of the quadratic form of M restricted to the orthogonal
/// complement of the all-ones vector (an (n-1)-point spectrum, descending).
std::vector<double> eigen_symmetric_ones_complement(const Eigen::MatrixXd& M,
                                                    const EigenOptions& opts = {});

}  // namespace ntkeoc
