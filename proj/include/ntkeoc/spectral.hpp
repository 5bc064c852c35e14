#pragma once

#include <vector>

#include <Eigen/Core>

#include "ntkeoc/activation.hpp"
#include "ntkeoc/dataset.hpp"
#include "ntkeoc/kernel.hpp"

namespace ntkeoc {

// Spectral analysis of the limiting kernel: the generator interval behind
// the distance-matrix family, the implicit generator W solving the top
// eigenvalue equation, the depth correction xi, eigenvalue brackets of the
// reference rank-one model, and the full per-depth report.

/// k-fold iterate of invdist_map; k = 0 returns w.
double invdist_iterate(double delta, double w, int k);

/// Maps w in (1, argmin) to the unique w' > argmin with the same
/// invdist_map value (bisection, 1e-12 tolerance); w at or beyond the
/// argmin is returned unchanged. For delta <= 1/2 the map is increasing on
/// all of (1, inf) and every w is returned unchanged.
double reflect_to_increasing(double delta, double w);

/// Off-diagonal generators of the layer-1 distance matrix, reflected onto
/// the increasing branch, plus the derived scalars bounding the family's
/// spectrum on the complement of the all-ones direction.
struct GeneratorBounds {
  Eigen::MatrixXd adjusted;       ///< reflected layer-1 matrix, zero diagonal
  double lo = 0.0;                ///< min off-diagonal adjusted entry
  double hi = 0.0;                ///< max off-diagonal adjusted entry
  double subspace_floor = 0.0;    ///< max over clamp levels of -lambda_min restricted to ones-complement
  double subspace_spread = 0.0;   ///< max over clamp levels of restricted spectral spread
};
GeneratorBounds generator_bounds(const ActivationParams& params, const Dataset& d);

/// The generator W with lambda_1(layer-l distance matrix) =
/// (n-1) * invdist_iterate(W, l-1), found by bisection inside
/// [bounds.lo, bounds.hi] (tolerance 1e-10). At l = 1 the map is the
/// identity and W = lambda_1 / (n-1) of the raw layer-1 matrix. Throws
/// std::runtime_error when the eigenvalue escapes the bracket by more than
/// 1e-9 relative (a violated hypothesis should be reported, not patched).
double solve_generator(const ActivationParams& params, const Dataset& d, int l);

/// Depth correction xi = (3/8)(delta^-1 (pi/2) W + log(delta^-1 (3pi/4) W + l - 1) - 1).
double log_depth_correction(const ActivationParams& params, double W, int l);

/// Large-depth condition number limit 1 + n/3.
double kappa_limit(int n);

/// Eigenvalue brackets of the reference matrix (l/n)((1-c) D_tau^2 + c tau tau^T):
/// Perron-Frobenius for the top eigenvalue, interlacing for the bulk. The
/// brackets collapse to exact values when all norms are equal. Requires
/// c in (0, 1).
struct ReferenceEigenvalues {
  double top_lo = 0.0;
  double top_hi = 0.0;
  double bulk_lo = 0.0;
  double bulk_hi = 0.0;
};
ReferenceEigenvalues reference_eigenvalues(double c, const Eigen::VectorXd& tau,
                                           int l, int n);

/// Everything the depth-l spectral theory produces for one dataset: block
/// eigenvalues and condition number, the implicit generator and its derived
/// quantities, the exact inequalities of the distance-matrix family
/// (asserted), and the leading-order predictions (residuals reported, never
/// asserted; the theory's error terms carry unknown constants).
struct SpectralReport {
  int n = 0;
  int depth = 0;
  int multiplicity = 1;
  std::vector<double> eigenvalues;  ///< of the n x n block, descending
  double kappa = 0.0;

  double gen_lo = 0.0;              ///< GeneratorBounds.lo
  double gen_hi = 0.0;              ///< GeneratorBounds.hi
  double subspace_floor = 0.0;
  double subspace_spread = 0.0;
  double W = 0.0;                   ///< implicit generator at depth l
  double xi = 0.0;
  double c = 0.0;                   ///< mixing coefficient of the reference model
  bool out_of_regime = false;       ///< c outside (0,1); predictions unreliable

  // exact inequalities on the layer-l distance matrix (layer-1 uses the
  // reflected matrix, where the family's monotonicity starts)
  double dist_lambda1 = 0.0;
  double dist_lambda2 = 0.0;
  double perron_lo = 0.0;
  double perron_hi = 0.0;
  double lambda2_bound = 0.0;
  bool perron_ok = false;
  bool lambda2_ok = false;

  ReferenceEigenvalues reference;   ///< zeros when out_of_regime

  double pred_top = 0.0;            ///< tau_max^2 ((1+3/n) l/4 + (1-1/n) xi)
  double pred_bulk = 0.0;           ///< tau_max^2 (3l/4 - xi)/n
  double pred_kappa = 0.0;          ///< 1 + n/3 + (16/9) n xi/(l - (4/3) xi)
  double res_top = 0.0;             ///< lambda_1 - pred_top
  double res_bulk = 0.0;            ///< lambda_2 - pred_bulk
  double res_kappa = 0.0;           ///< kappa - pred_kappa
};
SpectralReport spectrum_report(const ActivationParams& params, const Dataset& d,
                               int l, int m_l);

/// Eigenvalue list of block ⊠ I_m: each block eigenvalue repeated m times,
/// order preserved.
std::vector<double> expand_eigenvalues(const std::vector<double>& block_eigs, int m);

/// lambda_1 / lambda_min of a descending eigenvalue list; throws
/// std::domain_error if the smallest eigenvalue is not strictly positive.
double condition_number(const std::vector<double>& eigs);

}  // namespace ntkeoc
