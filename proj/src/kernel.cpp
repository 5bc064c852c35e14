#include "ntkeoc/kernel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "ntkeoc/parallel.hpp"
#include "ntkeoc/scalar_maps.hpp"

namespace ntkeoc {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_critical(const ActivationParams& p) {
  const double ss = p.a * p.a + p.b * p.b;
  if (std::abs(p.sigma * p.sigma * ss - 1.0) > 1e-12) {
    throw std::invalid_argument(
        "kernel closed form requires the critical weight scale sigma = (a^2+b^2)^(-1/2)");
  }
}

std::vector<std::pair<int, int>> upper_pairs(int n, bool with_diagonal) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = with_diagonal ? i : i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

}  // namespace

double ntk_entry(const ActivationParams& params, double x1_norm, double x2_norm,
                 double rho1, int l) {
  require_critical(params);
  if (l < 1) throw std::invalid_argument("ntk_entry requires depth l >= 1");
  if (!(x1_norm > 0.0) || !(x2_norm > 0.0)) {
    throw std::invalid_argument("ntk_entry requires positive norms");
  }
  const MapTrace trace = propagate(params.delta, rho1, l);
  return x1_norm * x2_norm * trace.kernel_sum[l - 1];
}

double ntk_entry_double_sum(const ActivationParams& params, double x1_norm,
                            double x2_norm, double rho1, int l) {
  require_critical(params);
  if (l < 1) throw std::invalid_argument("ntk_entry requires depth l >= 1");
  const MapTrace trace = propagate(params.delta, rho1, l);
  double total = 0.0;
  for (int k = 1; k <= l; ++k) {
    double term = trace.cosine[k - 1];
    for (int kp = k; kp <= l - 1; ++kp) {
      term *= cosine_map_deriv(params.delta, trace.cosine[kp - 1]);
    }
    total += term;
  }
  return x1_norm * x2_norm * total;
}

KernelMatrix ntk_matrix(const ActivationParams& params, const Dataset& d, int l,
                        int m_l) {
  if (m_l < 1) throw std::invalid_argument("ntk_matrix requires m_l >= 1");
  std::vector<KernelMatrix> out =
      ntk_matrices_over_depths(params, d, std::vector<int>{l}, m_l);
  return std::move(out.front());
}

std::vector<KernelMatrix> ntk_matrices_over_depths(const ActivationParams& params,
                                                   const Dataset& d,
                                                   const std::vector<int>& depths,
                                                   int m_l) {
  require_critical(params);
  if (m_l < 1) throw std::invalid_argument("ntk_matrices_over_depths requires m_l >= 1");
  if (depths.empty()) throw std::invalid_argument("depth list is empty");
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] < 1) throw std::invalid_argument("depths must be >= 1");
    if (i > 0 && depths[i] <= depths[i - 1]) {
      throw std::invalid_argument("depths must be strictly ascending");
    }
  }
  const int n = d.n();
  const int l_max = depths.back();
  const Eigen::MatrixXd cosines = gram_cosines(d);

  std::vector<KernelMatrix> out(depths.size());
  for (std::size_t t = 0; t < depths.size(); ++t) {
    out[t].block.resize(n, n);
    out[t].multiplicity = m_l;
    out[t].depth = depths[t];
  }

  const auto pairs = upper_pairs(n, true);
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const double scale = d.norms(i) * d.norms(j) / n;
    const MapTrace trace = propagate(params.delta, cosines(i, j), l_max);
    for (std::size_t t = 0; t < depths.size(); ++t) {
      const double v = scale * trace.kernel_sum[depths[t] - 1];
      out[t].block(i, j) = v;
      out[t].block(j, i) = v;
    }
  });
  return out;
}

Eigen::MatrixXd u_matrix(const ActivationParams& params, const Dataset& d, int l) {
  require_critical(params);
  if (l < 1) throw std::invalid_argument("u_matrix requires depth l >= 1");
  const int n = d.n();
  const Eigen::MatrixXd cosines = gram_cosines(d);
  Eigen::MatrixXd u(n, n);
  u.diagonal().setConstant(static_cast<double>(l));
  const auto pairs = upper_pairs(n, false);
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const MapTrace trace = propagate(params.delta, cosines(i, j), l);
    u(i, j) = trace.kernel_sum[l - 1];
    u(j, i) = u(i, j);
  });
  return u;
}

DistanceMatrix invdist_matrix(const ActivationParams& params, const Dataset& d, int k) {
  require_critical(params);
  if (k < 1) throw std::invalid_argument("invdist_matrix requires layer k >= 1");
  const int n = d.n();
  const Eigen::MatrixXd cosines = gram_cosines(d);
  DistanceMatrix w;
  w.entries = Eigen::MatrixXd::Zero(n, n);
  w.layer = k;
  const auto pairs = upper_pairs(n, false);
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const MapTrace trace = propagate(params.delta, cosines(i, j), k);
    w.entries(i, j) = trace.invdist[k - 1];
    w.entries(j, i) = w.entries(i, j);
  });
  for (const auto& [i, j] : pairs) {
    if (!std::isfinite(w.entries(i, j))) {
      std::ostringstream msg;
      msg << "invdist_matrix: cosine of pair (" << i << "," << j
          << ") reached 1 before layer " << k << "; entry overflows";
      throw std::runtime_error(msg.str());
    }
  }
  return w;
}

Eigen::MatrixXd approx_matrix(const ActivationParams& params, const Dataset& d, int l) {
  if (!(params.delta > 0.0)) {
    throw std::invalid_argument("approx_matrix requires delta > 0");
  }
  const DistanceMatrix w = invdist_matrix(params, d, l);
  const int n = d.n();
  const double lead = (3.0 * kPi / 16.0) / params.delta;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = static_cast<double>(l);
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = lead * w.entries(i, j) - 0.125;
      a(j, i) = a(i, j);
    }
  }
  return a;
}

}  // namespace ntkeoc
