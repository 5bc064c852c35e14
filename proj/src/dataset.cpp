#include "ntkeoc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ntkeoc/rng.hpp"

namespace ntkeoc {

std::vector<std::pair<int, int>> Dataset::degenerate_pairs() const {
  std::vector<std::pair<int, int>> bad;
  const int m = n();
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double cos_ij = points.row(i).dot(points.row(j)) / (norms(i) * norms(j));
      if (std::abs(cos_ij) >= 1.0 - parallel_tolerance) bad.emplace_back(i, j);
    }
  }
  return bad;
}

Dataset make_dataset(const Eigen::MatrixXd& points, double parallel_tolerance) {
  if (points.rows() < 2) throw std::invalid_argument("dataset needs at least 2 points");
  if (points.cols() < 1) throw std::invalid_argument("dataset points need dimension >= 1");
  if (!points.allFinite()) throw std::invalid_argument("dataset contains a non-finite entry");
  if (!(parallel_tolerance > 0.0) || parallel_tolerance >= 1.0) {
    throw std::invalid_argument("parallel tolerance must lie in (0, 1)");
  }
  Dataset d;
  d.points = points;
  d.parallel_tolerance = parallel_tolerance;
  d.norms = points.rowwise().norm();
  for (int i = 0; i < d.n(); ++i) {
    if (!(d.norms(i) > 0.0)) {
      std::ostringstream msg;
      msg << "point " << i << " has zero norm";
      throw std::invalid_argument(msg.str());
    }
  }
  return d;
}

Dataset sample_sphere_dataset(int n, int dim, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_sphere_dataset needs n >= 2");
  if (dim < 2) throw std::invalid_argument("sample_sphere_dataset needs dim >= 2");
  constexpr int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::uint64_t key = rng_key(seed, static_cast<std::uint64_t>(attempt));
    Eigen::MatrixXd pts(n, dim);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = 0; j < dim; ++j) {
        pts(i, j) = rng_gaussian(key, static_cast<std::uint64_t>(i) * dim + j);
      }
      const double norm = pts.row(i).norm();
      if (norm < 1e-12) {
        ok = false;
        break;
      }
      pts.row(i) /= norm;
    }
    if (!ok) continue;
    Dataset d = make_dataset(pts);
    d.norms.setOnes();  // exact by construction, not up to rounding
    if (d.nondegenerate()) return d;
  }
  throw std::runtime_error("sample_sphere_dataset: no nondegenerate draw in 100 attempts");
}

Dataset append_bias(const Dataset& d, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("append_bias requires finite beta > 0");
  }
  Eigen::MatrixXd pts(d.n(), d.dim() + 1);
  pts.leftCols(d.dim()) = d.points;
  pts.col(d.dim()).setConstant(beta);
  Dataset out = make_dataset(pts, d.parallel_tolerance);
  const auto bad = out.degenerate_pairs();
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "append_bias: still-degenerate pairs remain:";
    for (const auto& [i, j] : bad) msg << " (" << i << "," << j << ")";
    throw std::invalid_argument(msg.str());
  }
  return out;
}

Eigen::MatrixXd gram_cosines(const Dataset& d) {
  const int n = d.n();
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      double c = d.points.row(i).dot(d.points.row(j)) / (d.norms(i) * d.norms(j));
      c = std::clamp(c, -1.0, 1.0);
      g(i, j) = c;
      g(j, i) = c;
    }
  }
  return g;
}

}  // namespace ntkeoc
