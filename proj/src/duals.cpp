#include "ntkeoc/duals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <Eigen/Core>

#include "ntkeoc/jacobi_eigen.hpp"
#include "ntkeoc/rng.hpp"

namespace ntkeoc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxOrder = 256;

void require_order(int order) {
  if (order < 1 || order > kMaxOrder) {
    throw std::invalid_argument("quadrature order must lie in [1, 256]");
  }
}

double clamp_rho(double rho) {
  if (rho >= -1.0 && rho <= 1.0) return rho;
  if (rho >= -1.0 - 1e-12 && rho < -1.0) return -1.0;
  if (rho <= 1.0 + 1e-12 && rho > 1.0) return 1.0;
  throw std::domain_error("correlation outside [-1, 1] by more than 1e-12");
}

QuadratureRule build_gauss_hermite(int n) {
  // nodes: eigenvalues of the Jacobi matrix (zero diagonal, off-diagonal
  // sqrt(k/2)); weights: w_i = exp(-x_i^2) / sum_k htilde_k(x_i)^2 with
  // htilde_k the orthonormal Hermite functions, which keeps every
  // intermediate within double range for n <= 256.
  QuadratureRule rule;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {std::sqrt(kPi)};
    return rule;
  }
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = std::sqrt(k / 2.0);
    J(k - 1, k) = beta;
    J(k, k - 1) = beta;
  }
  std::vector<double> eigs = eigen_symmetric(J);
  std::sort(eigs.begin(), eigs.end());
  // enforce the exact +- symmetry of the spectrum
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (eigs[n - 1 - i] - eigs[i]);
    eigs[n - 1 - i] = x;
    eigs[i] = -x;
  }
  if (n % 2 == 1) eigs[n / 2] = 0.0;

  rule.nodes = eigs;
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = eigs[i];
    double hprev = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    double h = std::sqrt(2.0) * x * hprev;
    double norm2 = hprev * hprev + h * h;
    for (int k = 1; k < n - 1; ++k) {
      const double hnext =
          (x * h - std::sqrt(k / 2.0) * hprev) / std::sqrt((k + 1) / 2.0);
      hprev = h;
      h = hnext;
      norm2 += h * h;
    }
    rule.weights[i] = std::exp(-x * x) / norm2;
  }
  // symmetrize weights as well
  for (int i = 0; i < n / 2; ++i) {
    const double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

QuadratureRule build_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // polish once more to settle dp at the final x
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const QuadratureRule& cached_rule(int order, bool hermite) {
  static std::map<int, QuadratureRule> hermite_cache;
  static std::map<int, QuadratureRule> legendre_cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& cache = hermite ? hermite_cache : legendre_cache;
  auto it = cache.find(order);
  if (it == cache.end()) {
    it = cache.emplace(order, hermite ? build_gauss_hermite(order)
                                      : build_gauss_legendre(order)).first;
  }
  return it->second;
}

}  // namespace

const QuadratureRule& gauss_hermite_rule(int order) {
  require_order(order);
  return cached_rule(order, true);
}

const QuadratureRule& gauss_legendre_rule(int order) {
  require_order(order);
  return cached_rule(order, false);
}

DualEstimate dual_quadrature(const std::function<double(double)>& f, double rho, int order) {
  require_order(order);
  rho = clamp_rho(rho);
  const QuadratureRule& rule = gauss_hermite_rule(order);
  const double root = std::sqrt(std::max(0.0, (1.0 - rho) * (1.0 + rho)));
  const double sqrt2 = std::sqrt(2.0);
  // E[g(G)] = pi^{-1/2} sum_i w_i g(sqrt(2) x_i); Cholesky couples the axes
  double acc = 0.0;
  for (int i = 0; i < order; ++i) {
    const double u1 = sqrt2 * rule.nodes[i];
    const double f1 = f(u1);
    double inner = 0.0;
    for (int j = 0; j < order; ++j) {
      const double u2 = sqrt2 * (rho * rule.nodes[i] + root * rule.nodes[j]);
      inner += rule.weights[j] * f(u2);
    }
    acc += rule.weights[i] * f1 * inner;
  }
  DualEstimate est;
  est.value = acc / kPi;
  est.order = order;
  est.method = DualMethod::quadrature;
  return est;
}

double PiecewiseLinearFn::operator()(double s) const {
  const double sgn = (s > 0.0) ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
  return constant + slope * s + abs_coeff * std::abs(s) + sign_coeff * sgn;
}

PiecewiseLinearFn abs_fn() { return {0.0, 0.0, 1.0, 0.0}; }
PiecewiseLinearFn sign_fn() { return {0.0, 0.0, 0.0, 1.0}; }
PiecewiseLinearFn activation_fn(const ActivationParams& p) { return {0.0, p.a, p.b, 0.0}; }
PiecewiseLinearFn activation_deriv_fn(const ActivationParams& p) { return {p.a, 0.0, 0.0, p.b}; }

DualEstimate dual_quadrature(const PiecewiseLinearFn& f, double rho, int order) {
  require_order(order);
  rho = clamp_rho(rho);
  // (U1, U2) = (R cos T, R cos(T - alpha)) with alpha = acos(rho), R and T
  // independent. Split f into the degree-0 part p(s) = constant + sign*sgn(s)
  // and the degree-1 part q(s) = slope*s + abs*|s|; the radial moments
  // E[R^d 1_{R>0}] are exact and the angular integrand is smooth between the
  // four kink angles {pi/2, 3pi/2, alpha +- pi/2 (mod 2pi)}.
  const double alpha = std::acos(rho);
  const double m1 = std::sqrt(kPi / 2.0);

  double cuts[4] = {0.5 * kPi, 1.5 * kPi, alpha + 0.5 * kPi, alpha + 1.5 * kPi};
  for (double& c : cuts) c = std::fmod(c, 2.0 * kPi);
  std::sort(std::begin(cuts), std::end(cuts));

  std::vector<double> edges;
  for (double c : cuts) {
    if (edges.empty() || c - edges.back() > 1e-14) edges.push_back(c);
  }
  edges.push_back(edges.front() + 2.0 * kPi);

  const QuadratureRule& gl = gauss_legendre_rule(order);
  double total = 0.0;
  for (std::size_t arc = 0; arc + 1 < edges.size(); ++arc) {
    const double lo = edges[arc];
    const double hi = edges[arc + 1];
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    if (half < 1e-15) continue;
    double arc_sum = 0.0;
    for (int i = 0; i < order; ++i) {
      const double t = mid + half * gl.nodes[i];
      const double s1 = std::cos(t);
      const double s2 = std::cos(t - alpha);
      const double sg1 = (s1 > 0.0) ? 1.0 : (s1 < 0.0 ? -1.0 : 0.0);
      const double sg2 = (s2 > 0.0) ? 1.0 : (s2 < 0.0 ? -1.0 : 0.0);
      const double p1 = f.constant + f.sign_coeff * sg1;
      const double p2 = f.constant + f.sign_coeff * sg2;
      const double q1 = f.slope * s1 + f.abs_coeff * std::abs(s1);
      const double q2 = f.slope * s2 + f.abs_coeff * std::abs(s2);
      arc_sum += gl.weights[i] * (p1 * p2 + m1 * (p1 * q2 + q1 * p2) + 2.0 * q1 * q2);
    }
    total += half * arc_sum;
  }
  DualEstimate est;
  est.value = total / (2.0 * kPi);
  est.order = order;
  est.method = DualMethod::quadrature;
  return est;
}

DualEstimate dual_monte_carlo(const std::function<double(double)>& f, double rho,
                              std::int64_t samples, std::uint64_t seed) {
  if (samples < 2) {
    throw std::invalid_argument("dual_monte_carlo requires at least 2 samples");
  }
  rho = clamp_rho(rho);
  const double root = std::sqrt(std::max(0.0, (1.0 - rho) * (1.0 + rho)));
  const std::uint64_t key = rng_key(seed, 0);
  // fixed-size chunks keep the accumulation order independent of any future
  // partitioning of the sample range
  constexpr std::int64_t kChunk = 1 << 16;
  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t base = 0; base < samples; base += kChunk) {
    const std::int64_t end = std::min(samples, base + kChunk);
    double s = 0.0, s2 = 0.0;
    for (std::int64_t i = base; i < end; ++i) {
      double g0, g1;
      rng_gaussian_pair(key, static_cast<std::uint64_t>(i), g0, g1);
      const double v = f(g0) * f(rho * g0 + root * g1);
      s += v;
      s2 += v * v;
    }
    sum += s;
    sum_sq += s2;
  }
  const double nd = static_cast<double>(samples);
  const double mean = sum / nd;
  const double var = std::max(0.0, (sum_sq - nd * mean * mean) / (nd - 1.0));
  DualEstimate est;
  est.value = mean;
  est.samples = samples;
  est.std_error = std::sqrt(var / nd);
  est.method = DualMethod::monte_carlo;
  return est;
}

double dual_abs(double rho) {
  rho = clamp_rho(rho);
  return (2.0 / kPi) * (rho * std::asin(rho) + std::sqrt((1.0 - rho) * (1.0 + rho)));
}

double dual_sign(double rho) {
  rho = clamp_rho(rho);
  return (2.0 / kPi) * std::asin(rho);
}

double dual_activation(const ActivationParams& p, double rho) {
  rho = clamp_rho(rho);
  return p.a * p.a * rho + p.b * p.b * dual_abs(rho);
}

double dual_activation_deriv(const ActivationParams& p, double rho) {
  rho = clamp_rho(rho);
  return p.a * p.a + p.b * p.b * dual_sign(rho);
}

}  // namespace ntkeoc
