#include "ntkeoc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ntkeoc/jacobi_eigen.hpp"
#include "ntkeoc/scalar_maps.hpp"

namespace ntkeoc {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_delta_positive(double delta, const char* who) {
  if (!(delta > 0.0)) {
    std::ostringstream msg;
    msg << who << " requires delta > 0 (the maps are the identity at delta = 0)";
    throw std::invalid_argument(msg.str());
  }
}

void require_nondegenerate(const Dataset& d, const char* who) {
  const auto bad = d.degenerate_pairs();
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << who << ": dataset has parallel pairs:";
    for (const auto& [i, j] : bad) msg << " (" << i << "," << j << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

double invdist_iterate(double delta, double w, int k) {
  if (k < 0) throw std::invalid_argument("invdist_iterate requires k >= 0");
  for (int i = 0; i < k; ++i) w = invdist_map(delta, w);
  return w;
}

double reflect_to_increasing(double delta, double w) {
  require_delta_positive(delta, "reflect_to_increasing");
  if (!(w > 1.0)) throw std::domain_error("reflect_to_increasing requires w > 1");
  if (delta <= 0.5) return w;
  const double w_star = invdist_argmin(delta);
  if (w >= w_star) return w;
  const double target = invdist_map(delta, w);
  // invdist_map increases strictly from its minimum at w_star; expand the
  // bracket right until it covers the target, then bisect
  double lo = w_star;
  double hi = w_star + 1.0;
  while (invdist_map(delta, hi) < target) {
    lo = hi;
    hi = 2.0 * hi;
    if (hi > 1e12) throw std::runtime_error("reflect_to_increasing: bracket expansion failed");
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (invdist_map(delta, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

GeneratorBounds generator_bounds(const ActivationParams& params, const Dataset& d) {
  require_delta_positive(params.delta, "generator_bounds");
  require_nondegenerate(d, "generator_bounds");
  const int n = d.n();
  const DistanceMatrix w1 = invdist_matrix(params, d, 1);

  GeneratorBounds gb;
  gb.adjusted = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double adj = reflect_to_increasing(params.delta, w1.entries(i, j));
      gb.adjusted(i, j) = adj;
      gb.adjusted(j, i) = adj;
      values.push_back(adj);
    }
  }
  gb.lo = *std::min_element(values.begin(), values.end());
  gb.hi = *std::max_element(values.begin(), values.end());

  // clamp levels below an entry never change the clamped matrix, so only the
  // distinct entry values matter
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  gb.subspace_floor = -std::numeric_limits<double>::infinity();
  gb.subspace_spread = -std::numeric_limits<double>::infinity();
  Eigen::MatrixXd clamped(n, n);
  for (double level : values) {
    clamped.setZero();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double v = std::max(gb.adjusted(i, j), level);
        clamped(i, j) = v;
        clamped(j, i) = v;
      }
    }
    const std::vector<double> eigs = eigen_symmetric_ones_complement(clamped);
    const double lam_max = eigs.front();
    const double lam_min = eigs.back();
    gb.subspace_floor = std::max(gb.subspace_floor, -lam_min);
    gb.subspace_spread = std::max(gb.subspace_spread, lam_max - lam_min);
  }
  return gb;
}

double solve_generator(const ActivationParams& params, const Dataset& d, int l) {
  require_delta_positive(params.delta, "solve_generator");
  require_nondegenerate(d, "solve_generator");
  if (l < 1) throw std::invalid_argument("solve_generator requires l >= 1");
  const int n = d.n();
  const DistanceMatrix wl = invdist_matrix(params, d, l);
  const double lam1 = eigen_symmetric(wl.entries).front();
  if (l == 1) return lam1 / (n - 1);

  const GeneratorBounds gb = generator_bounds(params, d);
  const int iter = l - 1;
  double f_lo = (n - 1) * invdist_iterate(params.delta, gb.lo, iter);
  double f_hi = (n - 1) * invdist_iterate(params.delta, gb.hi, iter);
  const double slack = 1e-9 * std::max(1.0, f_hi);
  if (lam1 < f_lo - slack || lam1 > f_hi + slack) {
    std::ostringstream msg;
    msg << "solve_generator: top eigenvalue " << lam1 << " escapes the bracket ["
        << f_lo << ", " << f_hi << "]";
    throw std::runtime_error(msg.str());
  }
  if (lam1 <= f_lo) return gb.lo;
  if (lam1 >= f_hi) return gb.hi;
  double lo = gb.lo, hi = gb.hi;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if ((n - 1) * invdist_iterate(params.delta, mid, iter) < lam1) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double log_depth_correction(const ActivationParams& params, double W, int l) {
  require_delta_positive(params.delta, "log_depth_correction");
  if (!(W > 1.0)) throw std::invalid_argument("log_depth_correction requires W > 1");
  if (l < 1) throw std::invalid_argument("log_depth_correction requires l >= 1");
  const double inv = 1.0 / params.delta;
  return (3.0 / 8.0) *
         (inv * (kPi / 2.0) * W + std::log(inv * (3.0 * kPi / 4.0) * W + l - 1.0) - 1.0);
}

double kappa_limit(int n) {
  if (n < 2) throw std::invalid_argument("kappa_limit requires n >= 2");
  return 1.0 + n / 3.0;
}

ReferenceEigenvalues reference_eigenvalues(double c, const Eigen::VectorXd& tau,
                                           int l, int n) {
  if (n < 2) throw std::invalid_argument("reference_eigenvalues requires n >= 2");
  if (tau.size() != n) throw std::invalid_argument("tau length must equal n");
  if (!(c > 0.0) || !(c < 1.0)) {
    throw std::domain_error("reference_eigenvalues requires c in (0, 1)");
  }
  const double t_min = tau.minCoeff();
  const double t_max = tau.maxCoeff();
  const double ln = static_cast<double>(l) / n;
  ReferenceEigenvalues ref;
  ref.top_lo = ln * (1.0 + (n - 1) * c) * t_min * t_min;
  ref.top_hi = ln * (1.0 + (n - 1) * c) * t_max * t_max;
  ref.bulk_lo = ln * (1.0 - c) * t_min * t_min;
  ref.bulk_hi = ln * (1.0 - c) * t_max * t_max;
  return ref;
}

SpectralReport spectrum_report(const ActivationParams& params, const Dataset& d,
                               int l, int m_l) {
  require_delta_positive(params.delta, "spectrum_report");
  require_nondegenerate(d, "spectrum_report");
  if (l < 1 || m_l < 1) throw std::invalid_argument("spectrum_report requires l, m_l >= 1");
  const int n = d.n();

  SpectralReport rep;
  rep.n = n;
  rep.depth = l;
  rep.multiplicity = m_l;

  const KernelMatrix K = ntk_matrix(params, d, l, m_l);
  rep.eigenvalues = eigen_symmetric(K.block);
  // a rank-deficient block (possible at depth 1 when n > dim) has no finite
  // condition number; report it as such instead of refusing the whole report
  rep.kappa = rep.eigenvalues.back() > 0.0
                  ? rep.eigenvalues.front() / rep.eigenvalues.back()
                  : std::numeric_limits<double>::infinity();

  const GeneratorBounds gb = generator_bounds(params, d);
  rep.gen_lo = gb.lo;
  rep.gen_hi = gb.hi;
  rep.subspace_floor = gb.subspace_floor;
  rep.subspace_spread = gb.subspace_spread;
  rep.W = solve_generator(params, d, l);
  rep.xi = log_depth_correction(params, rep.W, l);
  rep.c = ((3.0 * kPi / 16.0) / params.delta * invdist_iterate(params.delta, rep.W, l - 1) -
           0.125) /
          l;
  rep.out_of_regime = !(rep.c > 0.0 && rep.c < 1.0);

  // exact inequalities at layer l; layer 1 uses the reflected matrix, the
  // member of the family the monotone-iterate argument starts from
  const int iter = l - 1;
  Eigen::MatrixXd dist_l =
      (l == 1) ? gb.adjusted : invdist_matrix(params, d, l).entries;
  const std::vector<double> dist_eigs = eigen_symmetric(dist_l);
  rep.dist_lambda1 = dist_eigs[0];
  rep.dist_lambda2 = dist_eigs[1];
  rep.perron_lo = (n - 1) * invdist_iterate(params.delta, gb.lo, iter);
  rep.perron_hi = (n - 1) * invdist_iterate(params.delta, gb.hi, iter);
  rep.lambda2_bound = -invdist_iterate(params.delta, gb.hi, iter) + gb.subspace_spread;
  const double slack = 1e-9 * std::max(1.0, rep.perron_hi);
  rep.perron_ok =
      rep.dist_lambda1 >= rep.perron_lo - slack && rep.dist_lambda1 <= rep.perron_hi + slack;
  rep.lambda2_ok = rep.dist_lambda2 <= rep.lambda2_bound + slack;

  if (!rep.out_of_regime) {
    rep.reference = reference_eigenvalues(rep.c, d.norms, l, n);
  }

  const double t_max = d.norms.maxCoeff();
  rep.pred_top = t_max * t_max * ((1.0 + 3.0 / n) * 0.25 * l + (1.0 - 1.0 / n) * rep.xi);
  rep.pred_bulk = t_max * t_max * (0.75 * l - rep.xi) / n;
  rep.pred_kappa = 1.0 + n / 3.0 + (16.0 / 9.0) * n * rep.xi / (l - (4.0 / 3.0) * rep.xi);
  rep.res_top = rep.eigenvalues[0] - rep.pred_top;
  rep.res_bulk = rep.eigenvalues[1] - rep.pred_bulk;
  rep.res_kappa = rep.kappa - rep.pred_kappa;
  return rep;
}

std::vector<double> expand_eigenvalues(const std::vector<double>& block_eigs, int m) {
  if (m < 1) throw std::invalid_argument("expand_eigenvalues requires m >= 1");
  std::vector<double> out;
  out.reserve(block_eigs.size() * static_cast<std::size_t>(m));
  for (double v : block_eigs) {
    for (int r = 0; r < m; ++r) out.push_back(v);
  }
  return out;
}

double condition_number(const std::vector<double>& eigs) {
  if (eigs.empty()) throw std::invalid_argument("condition_number of an empty spectrum");
  const double lam_min = eigs.back();
  if (!(lam_min > 0.0)) {
    throw std::domain_error("condition number undefined: smallest eigenvalue <= 0");
  }
  return eigs.front() / lam_min;
}

}  // namespace ntkeoc
