#pragma once

#include <vector>

#include <Eigen/Core>

#include "ntkeoc/activation.hpp"
#include "ntkeoc/dataset.hpp"

namespace ntkeoc {

// Exact infinite-width NTK of a depth-l critically initialized network,
// assembled pairwise from the scalar recursion. The kernel over the whole
// dataset is block ⊠ I_{m_l}: an n x n block whose eigenvalues each appear
// with multiplicity m_l. The multiplicity is carried symbolically; the
// nm_l x nm_l matrix is never materialized.

struct KernelMatrix {
  Eigen::MatrixXd block;  ///< (1/n) D_tau U D_tau, symmetric
  int multiplicity = 1;   ///< m_l
  int depth = 1;          ///< l
};

/// Inverse cosine distance matrix at layer k: entries (z_k)^(-1/2) off the
/// diagonal, zero on it.
struct DistanceMatrix {
  Eigen::MatrixXd entries;
  int layer = 1;
};

/// Kernel value for one input pair: ||x1|| ||x2|| u_l with u_l from the
/// depth-l recursion seeded at cosine rho1. Requires l >= 1, positive norms,
/// and params at the critical scale (make_activation output); any other
/// sigma is rejected because the closed form does not hold there.
double ntk_entry(const ActivationParams& params, double x1_norm, double x2_norm,
                 double rho1, int l);

/// Kernel value by the literal double sum over layers of products of
/// derivative maps. O(l^2); exists to cross-check the O(l) recursion.
double ntk_entry_double_sum(const ActivationParams& params, double x1_norm,
                            double x2_norm, double rho1, int l);

/// Full kernel block: entry (i1, i2) = (1/n) ntk_entry(x_i1, x_i2). Upper
/// triangle computed once and mirrored, so symmetry is exact.
KernelMatrix ntk_matrix(const ActivationParams& params, const Dataset& d, int l,
                        int m_l);

/// Kernel blocks at every depth in `depths` (ascending, each >= 1) from a
/// single propagation pass per pair; much cheaper than calling ntk_matrix
/// per depth when sweeping.
std::vector<KernelMatrix> ntk_matrices_over_depths(const ActivationParams& params,
                                                   const Dataset& d,
                                                   const std::vector<int>& depths,
                                                   int m_l);

/// The layer-l sum matrix U itself (diagonal exactly l), without the
/// norm weighting or 1/n; the object the approximation bounds speak about.
Eigen::MatrixXd u_matrix(const ActivationParams& params, const Dataset& d, int l);

/// Inverse cosine distance matrix at layer k >= 1. Throws std::runtime_error
/// naming the pair when a cosine has reached 1 within floating point before
/// layer k (the entry would be infinite).
DistanceMatrix invdist_matrix(const ActivationParams& params, const Dataset& d, int k);

/// The closed-form upper bound on U: off-diagonal (3π/16) delta^(-1) w_l - 1/8,
/// diagonal exactly l. Requires delta > 0.
Eigen::MatrixXd approx_matrix(const ActivationParams& params, const Dataset& d, int l);

}  // namespace ntkeoc
