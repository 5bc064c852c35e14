#include "ntkeoc/jacobi_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace ntkeoc {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& A) {
  double s = 0.0;
  const Eigen::Index n = A.rows();
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = p + 1; q < n; ++q) s += 2.0 * A(p, q) * A(p, q);
  }
  return std::sqrt(s);
}

}  // namespace

std::vector<double> eigen_symmetric(const Eigen::MatrixXd& M, const EigenOptions& opts) {
  const Eigen::Index n = M.rows();
  if (n == 0 || M.cols() != n) {
    throw std::invalid_argument("eigen_symmetric: square non-empty matrix required");
  }
  const double scale = M.cwiseAbs().maxCoeff();
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > opts.symmetry_tol * std::max(scale, 1.0)) {
    throw std::invalid_argument("eigen_symmetric: input is not symmetric");
  }
  if (n == 1) return {M(0, 0)};

  Eigen::MatrixXd A = 0.5 * (M + M.transpose().eval());
  const double frob = std::max(A.norm(), std::numeric_limits<double>::min());
  const double target = opts.off_tol * frob;

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    if (off_diagonal_norm(A) <= target) {
      const Eigen::VectorXd d = A.diagonal();
      std::vector<double> eigs(d.data(), d.data() + n);
      std::sort(eigs.begin(), eigs.end(), std::greater<double>());
      return eigs;
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        // classic Jacobi rotation annihilating A(p,q)
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = A(p, p);
        const double aqq = A(q, q);
        A(p, p) = app - t * apq;
        A(q, q) = aqq + t * apq;
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = A(r, p);
          const double arq = A(r, q);
          A(r, p) = arp - s * (arq + tau * arp);
          A(p, r) = A(r, p);
          A(r, q) = arq + s * (arp - tau * arq);
          A(q, r) = A(r, q);
        }
      }
    }
  }
  if (off_diagonal_norm(A) <= target) {
    const Eigen::VectorXd d = A.diagonal();
    std::vector<double> eigs(d.data(), d.data() + n);
    std::sort(eigs.begin(), eigs.end(), std::greater<double>());
    return eigs;
  }
  throw std::runtime_error("eigen_symmetric: Jacobi sweeps did not converge");
}

std::vector<double> eigen_symmetric_ones_complement(const Eigen::MatrixXd& M,
                                                    const EigenOptions& opts) {
  const Eigen::Index n = M.rows();
  if (n < 2 || M.cols() != n) {
    throw std::invalid_argument("eigen_symmetric_ones_complement: n >= 2 square matrix required");
  }
  // Householder H mapping ones/sqrt(n) to e_1; columns 2..n of H form an
  // orthonormal basis of the complement, so the restricted form is the
  // trailing (n-1)x(n-1) block of H M H.
  Eigen::VectorXd v = -Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  v(0) += 1.0;
  const double vtv = v.squaredNorm();
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n) - (2.0 / vtv) * (v * v.transpose());
  Eigen::MatrixXd B = H * M * H;
  return eigen_symmetric(B.bottomRightCorner(n - 1, n - 1), opts);
}

}  // namespace ntkeoc
