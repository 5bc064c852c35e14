#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace ntkeoc {

/// A finite set of input points, one per row. The spectral results require
/// no pair of points to be parallel; that is a property of a dataset, not a
/// construction-time invariant, so degeneracy is queryable rather than
/// enforced here (consumers that need it check nondegenerate()).
struct Dataset {
  Eigen::MatrixXd points;             ///< n x dim, row i is x_i
  Eigen::VectorXd norms;              ///< ||x_i||, all strictly positive
  double parallel_tolerance = 1e-9;   ///< pair degenerate when |cos| >= 1 - tol

  int n() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }

  /// Pairs (i, j), i < j, with |cos(x_i, x_j)| >= 1 - parallel_tolerance.
  std::vector<std::pair<int, int>> degenerate_pairs() const;
  bool nondegenerate() const { return degenerate_pairs().empty(); }
};

/// Wraps a point matrix, validating shape (n >= 2, dim >= 1), finiteness,
/// and strictly positive norms. Throws std::invalid_argument otherwise.
Dataset make_dataset(const Eigen::MatrixXd& points, double parallel_tolerance = 1e-9);

/// n points drawn uniformly from the unit sphere in R^dim, seeded and
/// reproducible. A draw with a degenerate pair (or a numerically zero
/// Gaussian vector) is discarded and redrawn from the next substream;
/// throws std::runtime_error after 100 attempts.
Dataset sample_sphere_dataset(int n, int dim, std::uint64_t seed);

/// Appends the constant coordinate beta > 0 to every point. Distinct
/// parallel points become non-parallel; identical points stay degenerate,
/// which throws std::invalid_argument listing the offending pairs.
Dataset append_bias(const Dataset& d, double beta);

/// Unit-diagonal matrix of pairwise cosines <x_i, x_j>/(||x_i|| ||x_j||),
/// symmetric by construction, entries clamped to [-1, 1].
Eigen::MatrixXd gram_cosines(const Dataset& d);

}  // namespace ntkeoc
