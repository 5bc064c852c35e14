#include "ntkeoc/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "ntkeoc/kernel.hpp"
#include "ntkeoc/parallel.hpp"
#include "ntkeoc/rng.hpp"

namespace ntkeoc {

namespace {

void require_critical(const ActivationParams& p) {
  const double ss = p.a * p.a + p.b * p.b;
  if (std::abs(p.sigma * p.sigma * ss - 1.0) > 1e-12) {
    throw std::invalid_argument(
        "network initialization requires the critical weight scale");
  }
}

Eigen::VectorXd apply_phi(const ActivationParams& p, const Eigen::VectorXd& h) {
  return h.unaryExpr([&p](double s) { return phi(p, s); });
}

Eigen::VectorXd apply_phi_prime(const ActivationParams& p, const Eigen::VectorXd& h) {
  return h.unaryExpr([&p](double s) { return phi_prime(p, s); });
}

}  // namespace

MlpNetwork init_network(const std::vector<int>& widths, const ActivationParams& params,
                        std::uint64_t seed) {
  require_critical(params);
  if (widths.size() < 2) throw std::invalid_argument("network needs at least one layer");
  for (int w : widths) {
    if (w < 1) throw std::invalid_argument("all widths must be >= 1");
  }
  MlpNetwork net;
  net.widths = widths;
  net.act = params;
  net.seed = seed;
  const int l = net.depth();
  net.weights.reserve(l);
  for (int k = 1; k <= l; ++k) {
    const int rows = widths[k];
    const int cols = widths[k - 1];
    const std::uint64_t key = rng_key(seed, static_cast<std::uint64_t>(k));
    Eigen::MatrixXd W(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        W(r, c) = rng_gaussian(key, static_cast<std::uint64_t>(r) * cols + c);
      }
    }
    net.weights.push_back(std::move(W));
  }
  return net;
}

ForwardCache forward(const MlpNetwork& net, const Eigen::VectorXd& x) {
  if (x.size() != net.widths.front()) {
    throw std::invalid_argument("forward: input dimension mismatch");
  }
  const int l = net.depth();
  ForwardCache cache;
  cache.input = x;
  cache.preact.reserve(l);
  cache.act.reserve(l - 1);
  Eigen::VectorXd h = net.weights[0] * x;
  cache.preact.push_back(h);
  for (int k = 2; k <= l; ++k) {
    const Eigen::VectorXd a = apply_phi(net.act, cache.preact.back());
    cache.act.push_back(a);
    const double scale = net.act.sigma / std::sqrt(static_cast<double>(net.widths[k - 1]));
    h = scale * (net.weights[k - 1] * a);
    cache.preact.push_back(h);
  }
  return cache;
}

Eigen::MatrixXd empirical_ntk(const MlpNetwork& net, const Eigen::VectorXd& x1,
                              const Eigen::VectorXd& x2) {
  const ForwardCache c1 = forward(net, x1);
  const ForwardCache c2 = forward(net, x2);
  const int l = net.depth();
  const int m_l = net.widths.back();
  const double sigma2 = net.act.sigma * net.act.sigma;

  // G = d h_l / d h_k for the current k, streamed from k = l down to 1;
  // layer k's weights contribute (sigma^2/m_{k-1}) <a_{k-1}, a_{k-1}'> G G'^T
  Eigen::MatrixXd G1 = Eigen::MatrixXd::Identity(m_l, m_l);
  Eigen::MatrixXd G2 = Eigen::MatrixXd::Identity(m_l, m_l);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m_l, m_l);
  for (int k = l; k >= 2; --k) {
    const int fan_in = net.widths[k - 1];
    const double inner = c1.act[k - 2].dot(c2.act[k - 2]);
    K += (sigma2 / fan_in) * inner * (G1 * G2.transpose());
    const double scale = net.act.sigma / std::sqrt(static_cast<double>(fan_in));
    const Eigen::VectorXd d1 = apply_phi_prime(net.act, c1.preact[k - 2]);
    const Eigen::VectorXd d2 = apply_phi_prime(net.act, c2.preact[k - 2]);
    G1 = scale * (G1 * net.weights[k - 1]) * d1.asDiagonal();
    G2 = scale * (G2 * net.weights[k - 1]) * d2.asDiagonal();
  }
  K += x1.dot(x2) * (G1 * G2.transpose());
  return K;
}

EmpiricalKernel empirical_kernel(const MlpNetwork& net, const Dataset& d) {
  if (d.dim() != net.widths.front()) {
    throw std::invalid_argument("empirical_kernel: dataset dimension mismatch");
  }
  const int n = d.n();
  const int m_l = net.widths.back();
  EmpiricalKernel out;
  out.n = n;
  out.m_l = m_l;
  out.stacked.resize(n * m_l, n * m_l);

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) pairs.emplace_back(i, j);
  }
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const Eigen::MatrixXd block =
        empirical_ntk(net, d.points.row(i).transpose(), d.points.row(j).transpose()) / n;
    out.stacked.block(i * m_l, j * m_l, m_l, m_l) = block;
    if (i != j) out.stacked.block(j * m_l, i * m_l, m_l, m_l) = block.transpose();
  });
  return out;
}

std::vector<ConvergenceRow> convergence_sweep(const ActivationParams& params,
                                              const Dataset& d,
                                              const std::vector<int>& widths, int depth,
                                              int trials, std::uint64_t base_seed) {
  require_critical(params);
  if (trials < 3) throw std::invalid_argument("convergence_sweep requires trials >= 3");
  if (depth < 1) throw std::invalid_argument("convergence_sweep requires depth >= 1");
  if (widths.empty()) throw std::invalid_argument("convergence_sweep: empty width list");
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (widths[i] < 1) throw std::invalid_argument("widths must be >= 1");
    if (i > 0 && widths[i] <= widths[i - 1]) {
      throw std::invalid_argument("widths must be strictly increasing");
    }
  }

  const int n = d.n();
  const Eigen::MatrixXd cosines = gram_cosines(d);
  Eigen::MatrixXd reference(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      reference(i, j) = ntk_entry(params, d.norms(i), d.norms(j), cosines(i, j), depth);
      reference(j, i) = reference(i, j);
    }
  }

  std::vector<ConvergenceRow> rows(widths.size());
  for (std::size_t wi = 0; wi < widths.size(); ++wi) {
    std::vector<int> net_widths(depth + 1, widths[wi]);
    net_widths.front() = d.dim();
    net_widths.back() = 1;

    std::vector<double> trial_means(trials);
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
      const std::uint64_t net_seed =
          rng_key(base_seed, static_cast<std::uint64_t>(wi) * trials + t);
      const MlpNetwork net = init_network(net_widths, params, net_seed);
      double sum = 0.0;
      int count = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          const double k_emp = empirical_ntk(net, d.points.row(i).transpose(),
                                             d.points.row(j).transpose())(0, 0);
          const double diff = std::abs(k_emp - reference(i, j));
          if (diff != 0.0) sum += diff / std::abs(reference(i, j));
          ++count;
        }
      }
      trial_means[t] = sum / count;
    });

    double mean = 0.0;
    for (double v : trial_means) mean += v;
    mean /= trials;
    double var = 0.0;
    for (double v : trial_means) var += (v - mean) * (v - mean);
    var /= (trials - 1);

    rows[wi].width = widths[wi];
    rows[wi].mean_rel_error = mean;
    rows[wi].std_error = std::sqrt(var / trials);

    // log-log LS slope over the rows so far; meaningful from the third row on
    rows[wi].slope_so_far = 0.0;
    if (wi >= 2) {
      bool positive = true;
      for (std::size_t r = 0; r <= wi; ++r) {
        if (!(rows[r].mean_rel_error > 0.0)) positive = false;
      }
      if (positive) {
        const double m = static_cast<double>(wi + 1);
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t r = 0; r <= wi; ++r) {
          const double lx = std::log(static_cast<double>(rows[r].width));
          const double ly = std::log(rows[r].mean_rel_error);
          sx += lx;
          sy += ly;
          sxx += lx * lx;
          sxy += lx * ly;
        }
        rows[wi].slope_so_far = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      }
    }
  }
  return rows;
}

}  // namespace ntkeoc
