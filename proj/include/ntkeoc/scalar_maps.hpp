#pragma once

#include <cstdint>
#include <vector>

namespace ntkeoc {

// Scalar maps of infinite-width signal propagation at critical
// initialization, parameterized by the activation smoothness gap
// delta = b^2/(a^2+b^2) in [0,1]:
//
//   cosine_map(rho)  = rho + delta*(2/pi)*(sqrt(1-rho^2) - rho*acos(rho))
//   sqdist_map(z)    = (1 - cosine_map(1-2z))/2, the same dynamics in the
//                      squared-half-chord coordinate z = (1-rho)/2
//   invdist_map(w)   = sqdist_map(w^-2)^(-1/2), the dynamics of w = z^(-1/2)
//
// delta = 0 collapses all three to the identity. sqdist_map admits the power
// series z - delta * sum_{odd r>=3} series_coeff(r) * z^(r/2); the
// coefficients are positive and sum to 1.

double cosine_map(double delta, double rho);
double cosine_map_deriv(double delta, double rho);

double sqdist_map(double delta, double z);
double sqdist_map_deriv(double delta, double z);
/// Second derivative -delta*(2/pi)/sqrt(z(1-z)); throws within 1e-12 of the
/// endpoint singularities.
double sqdist_map_second(double delta, double z);

/// Power-series coefficient of z^(r/2) in sqdist_map (odd r >= 3), computed
/// in the log domain so large r neither overflows nor underflows.
double series_coeff(int r);
/// Coefficients {b_3, b_5, ..., b_rmax} via the exact ratio recurrence
/// b_{r+2} = b_r*(r-2)^2/((r-1)(r+2)); tighter than the log-domain route.
std::vector<double> series_coeffs(int r_max);
struct PartialSum {
  double sum = 0.0;
  double tail_bound = 0.0;  ///< estimate of the omitted mass (last term * r / 3)
};
/// Partial sum of the series coefficients up to r_max (capped at 2e5+1).
PartialSum series_partial_sum(int r_max);

double invdist_map(double delta, double w);
double invdist_map_deriv(double delta, double w);
/// Point where invdist_map turns from decreasing to increasing; equals 1
/// whenever delta <= 1/2. Requires delta > 0.
double invdist_argmin(double delta);
/// Remainder eps(w) in the expansion
///   invdist_map(w) = w + C + (3/2)C^2/w + delta*eps(w)/w^2,
///   C = delta*4/(3*pi).
/// Positive and strictly decreasing on (1, inf); the subtraction cancels
/// ~16 digits at large w, so everything is evaluated in double-double.
double invdist_remainder(double delta, double w);

/// Closed-form estimate of the k-fold iterate of invdist_map started at w
/// (natural logarithm); the true iterate stays within an O(1) band of it.
double propagation_estimate(double delta, double w, std::int64_t k);

/// Depth-indexed traces of the propagation recursions. Index i holds depth
/// k = i+1. invdist entries are +infinity where sqdist is exactly 0.
struct MapTrace {
  std::vector<double> cosine;      ///< rho_k
  std::vector<double> sqdist;      ///< z_k, z_{k+1} = sqdist_map(z_k)
  std::vector<double> invdist;     ///< w_k = z_k^(-1/2)
  std::vector<double> kernel_sum;  ///< u_k: u_1 = rho_1, u_{k+1} = cosine_map_deriv(rho_k)*u_k + rho_{k+1}
  bool boundary_start = false;     ///< rho_1 was exactly +-1
  int depth() const { return static_cast<int>(cosine.size()); }
};
MapTrace propagate(double delta, double rho1, int depth);

/// Coefficient c in the kernel_sum sandwich
///   A_k - c*k*z_k <= u_k <= A_k,  A_k = (3*pi/16)/delta * w_k - 1/8,
/// valid for every depth k. Maximum of the base-case and induction-step
/// requirements at z_1, inflated by a 1e-9 relative guard (any larger c
/// only weakens the lower bound). Requires delta > 0 and |rho1| < 1.
double sandwich_coeff(double delta, double rho1);

}  // namespace ntkeoc
