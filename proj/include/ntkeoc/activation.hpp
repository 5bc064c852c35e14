#pragma once

namespace ntkeoc {

/// Parameters of the activation s -> a*s + b*|s| together with the derived
/// quantities the rest of the library keys on. The weight scale sigma is
/// pinned to the critical value 1/sqrt(a^2 + b^2), so a random layer
/// preserves squared norms in expectation.
struct ActivationParams {
  double a = 1.0;
  double b = 0.0;
  double delta = 0.0;      ///< smoothness gap b^2/(a^2+b^2), in [0, 1]
  double sigma = 1.0;      ///< critical weight scale 1/sqrt(a^2+b^2)
  double lipschitz = 1.0;  ///< |a| + |b|
};

/// Validates (a, b) and fills in the derived fields. Throws
/// std::invalid_argument for non-finite inputs or a = b = 0.
ActivationParams make_activation(double a, double b);

/// a*s + b*|s|; positively homogeneous of degree 1.
double phi(const ActivationParams& p, double s);

/// a + b*sgn(s). At s = 0 returns a, the midpoint of the subgradient.
double phi_prime(const ActivationParams& p, double s);

}  // namespace ntkeoc
