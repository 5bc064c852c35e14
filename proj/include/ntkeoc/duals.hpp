#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ntkeoc/activation.hpp"

namespace ntkeoc {

// Dual of a scalar function f: the expectation E[f(U1) f(U2)] over a
// bivariate standard Gaussian pair with correlation rho. Closed forms,
// quadrature, and Monte Carlo estimators, kept deliberately independent of
// each other so they can cross-check.

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for weight exp(-x^2) (Golub-Welsch on the Jacobi
/// matrix; Christoffel weights through the scaled orthonormal recurrence).
/// Orders 1..256; larger orders throw (weight underflow territory).
const QuadratureRule& gauss_hermite_rule(int order);

/// Gauss-Legendre rule on [-1, 1] (Newton on the three-term recurrence).
/// Orders 1..256.
const QuadratureRule& gauss_legendre_rule(int order);

enum class DualMethod { quadrature, monte_carlo };

struct DualEstimate {
  double value = 0.0;
  int order = 0;              ///< nodes per axis (tensor) or per arc (kink-aware)
  std::int64_t samples = 0;   ///< Monte Carlo draws (0 for quadrature)
  double std_error = 0.0;     ///< Monte Carlo standard error (0 for quadrature)
  DualMethod method = DualMethod::quadrature;
};

/// Tensor Gauss-Hermite over the Cholesky transform of the correlated pair.
/// Spectrally accurate for smooth f. For kinked integrands (|.|, sgn, the
/// activation family) the slanted kink line cuts the tensor grid and accuracy
/// degrades to ~1e-2..1e-3 at order 64, degrading further as |rho| -> 1; use
/// the piecewise-linear overload for those.
DualEstimate dual_quadrature(const std::function<double(double)>& f, double rho, int order);

/// f(s) = constant + slope*s + abs_coeff*|s| + sign_coeff*sgn(s). Covers the
/// activation family and its derivative along with |.| and sgn themselves.
struct PiecewiseLinearFn {
  double constant = 0.0;
  double slope = 0.0;
  double abs_coeff = 0.0;
  double sign_coeff = 0.0;
  double operator()(double s) const;
};
PiecewiseLinearFn abs_fn();
PiecewiseLinearFn sign_fn();
PiecewiseLinearFn activation_fn(const ActivationParams& p);
PiecewiseLinearFn activation_deriv_fn(const ActivationParams& p);

/// Kink-aware quadrature for the piecewise-linear family: in polar
/// coordinates the Gaussian radial moments are exact (degree 0 -> 1,
/// degree 1 -> sqrt(pi/2), degree 2 -> 2) and the angular factor is
/// piecewise-trigonometric, integrated with `order`-node Gauss-Legendre on
/// each smooth arc between kink angles. Machine precision over all of
/// [-1, 1], endpoints included.
DualEstimate dual_quadrature(const PiecewiseLinearFn& f, double rho, int order);

/// Seeded counter-based Monte Carlo; the estimate is a pure function of
/// (seed, samples), independent of any work partitioning.
DualEstimate dual_monte_carlo(const std::function<double(double)>& f, double rho,
                              std::int64_t samples, std::uint64_t seed);

/// Closed forms.
double dual_abs(double rho);   ///< (2/pi)(rho*asin(rho) + sqrt(1-rho^2))
double dual_sign(double rho);  ///< (2/pi)*asin(rho)
double dual_activation(const ActivationParams& p, double rho);        ///< a^2 rho + b^2 dual_abs
double dual_activation_deriv(const ActivationParams& p, double rho);  ///< a^2 + b^2 dual_sign

}  // namespace ntkeoc
