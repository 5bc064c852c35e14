#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "ntkeoc/activation.hpp"
#include "ntkeoc/dataset.hpp"

namespace ntkeoc {

// Finite-width MLP at critical initialization and its empirical NTK
// (Jacobian Gram matrix), for demonstrating convergence to the closed-form
// limit as the hidden widths grow. The first layer is variance-preserving
// (h_1 = W_1 x, entries N(0,1)), hidden layers apply sigma/sqrt(fan-in)
// scaling (h_k = (sigma/sqrt(m_{k-1})) W_k phi(h_{k-1})); no biases. Weights
// are stored unscaled; the scaling lives in the forward pass.

struct MlpNetwork {
  std::vector<int> widths;              ///< (m_0, m_1, ..., m_l)
  std::vector<Eigen::MatrixXd> weights; ///< weights[k-1] is W_k, m_k x m_{k-1}
  ActivationParams act;
  std::uint64_t seed = 0;

  int depth() const { return static_cast<int>(widths.size()) - 1; }
};

/// Seeded network; weight entry (r, c) of layer k is a pure function of
/// (seed, k, r, c), so identical seeds give identical networks regardless of
/// construction order.
MlpNetwork init_network(const std::vector<int>& widths, const ActivationParams& params,
                        std::uint64_t seed);

/// Pre-activations h_k and activations phi(h_k) for every layer; the network
/// output is preact.back().
struct ForwardCache {
  Eigen::VectorXd input;
  std::vector<Eigen::VectorXd> preact;  ///< h_1 .. h_l
  std::vector<Eigen::VectorXd> act;     ///< phi(h_1) .. phi(h_{l-1})
};
ForwardCache forward(const MlpNetwork& net, const Eigen::VectorXd& x);

/// Empirical NTK block: sum over all weight entries of the outer product of
/// output gradients, accumulated layerwise (inner products of cached
/// activations times backward Jacobian Grams); the full Jacobian is never
/// materialized. phi'(0) = a, consistent with the scalar maps.
Eigen::MatrixXd empirical_ntk(const MlpNetwork& net, const Eigen::VectorXd& x1,
                              const Eigen::VectorXd& x2);

/// All-pairs empirical kernel with the (1/n) dataset normalization, stacked
/// into an (n m_l) x (n m_l) matrix of m_l x m_l blocks.
struct EmpiricalKernel {
  Eigen::MatrixXd stacked;
  int n = 0;
  int m_l = 1;
};
EmpiricalKernel empirical_kernel(const MlpNetwork& net, const Dataset& d);

/// One row of the width-convergence experiment.
struct ConvergenceRow {
  int width = 0;
  double mean_rel_error = 0.0;  ///< over trials and unordered input pairs
  double std_error = 0.0;       ///< of the trial means
  double slope_so_far = 0.0;    ///< log-log LS slope through this row (0 for the first)
};

/// For each hidden width m: networks (dim, m, ..., m, 1) of the given depth,
/// scalar empirical kernel per input pair vs the closed form, averaged over
/// `trials` seeded trials. Widths must be strictly increasing; trials >= 3.
std::vector<ConvergenceRow> convergence_sweep(const ActivationParams& params,
                                              const Dataset& d,
                                              const std::vector<int>& widths, int depth,
                                              int trials, std::uint64_t base_seed);

}  // namespace ntkeoc
