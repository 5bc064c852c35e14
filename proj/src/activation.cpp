#include "ntkeoc/activation.hpp"

#include <cmath>
#include <stdexcept>

namespace ntkeoc {

ActivationParams make_activation(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("make_activation: a and b must be finite");
  }
  const double ss = a * a + b * b;
  if (ss == 0.0) {
    throw std::invalid_argument("make_activation: a = b = 0 is degenerate");
  }
  ActivationParams p;
  p.a = a;
  p.b = b;
  p.delta = b * b / ss;
  p.sigma = 1.0 / std::sqrt(ss);
  p.lipschitz = std::abs(a) + std::abs(b);
  return p;
}

double phi(const ActivationParams& p, double s) {
  return p.a * s + p.b * std::abs(s);
}

double phi_prime(const ActivationParams& p, double s) {
  if (s > 0.0) return p.a + p.b;
  if (s < 0.0) return p.a - p.b;
  return p.a;
}

}  // namespace ntkeoc
