#include "ntkeoc/scalar_maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>

#include "ntkeoc/dd.hpp"

namespace ntkeoc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDomainTol = 1e-12;    // silent clamp this far outside the domain
constexpr double kSeriesSwitch = 1e-4;  // sqdist series branch below this z
constexpr int kSeriesBranchMax = 61;    // highest series index in that branch
constexpr int kSeriesCap = 200001;      // hard cap for coefficient tables

void require_delta(double delta) {
  if (!(delta >= 0.0) || !(delta <= 1.0)) {
    throw std::domain_error("smoothness gap delta must lie in [0, 1]");
  }
}

void require_positive_delta(double delta) {
  require_delta(delta);
  if (delta == 0.0) {
    throw std::domain_error("operation is undefined for delta = 0 (affine activation)");
  }
}

double clamp_range(double x, double lo, double hi, const char* what) {
  if (x >= lo && x <= hi) return x;
  if (x >= lo - kDomainTol && x < lo) return lo;
  if (x <= hi + kDomainTol && x > hi) return hi;
  throw std::domain_error(std::string(what) + " outside its domain by more than 1e-12");
}

// acos(rho) with full accuracy at both ends: acos(rho) = 2*asin(sqrt((1-rho)/2))
// avoids the precision loss of acos near +1.
double stable_acos(double rho) {
  if (rho > 0.0) return 2.0 * std::asin(std::sqrt(0.5 * (1.0 - rho)));
  return std::acos(rho);
}

// shared coefficient table, grown on demand under a lock
std::vector<double>& coeff_table() {
  static std::vector<double> table;  // table[i] = coefficient for r = 3 + 2i
  return table;
}
std::mutex& coeff_mutex() {
  static std::mutex mu;
  return mu;
}

// Extends the table through r_max and returns a copy of the prefix.
std::vector<double> coeffs_upto(int r_max) {
  if (r_max < 3) return {};
  if (r_max > kSeriesCap) {
    throw std::invalid_argument("series coefficients capped at r = 200001");
  }
  std::lock_guard<std::mutex> lock(coeff_mutex());
  auto& table = coeff_table();
  if (table.empty()) table.push_back(8.0 / (3.0 * kPi));
  int r = 3 + 2 * (static_cast<int>(table.size()) - 1);
  while (r + 2 <= r_max) {
    const double ratio = (static_cast<double>(r) - 2.0) * (static_cast<double>(r) - 2.0) /
                         ((static_cast<double>(r) - 1.0) * (static_cast<double>(r) + 2.0));
    table.push_back(table.back() * ratio);
    r += 2;
  }
  const std::size_t count = static_cast<std::size_t>((r_max - 3) / 2 + 1);
  return std::vector<double>(table.begin(), table.begin() + count);
}

double sqdist_series(double delta, double z, int r_max) {
  // z - delta * z^{3/2} * sum_i b_{3+2i} z^i, Horner in z
  const auto b = coeffs_upto(r_max);
  double acc = 0.0;
  for (std::size_t i = b.size(); i-- > 0;) acc = acc * z + b[i];
  return z - delta * std::pow(z, 1.5) * acc;
}

double sqdist_deriv_series(double delta, double z, int r_max) {
  // 1 - delta * z^{1/2} * sum_i (r/2) b_r z^i with r = 3+2i
  const auto b = coeffs_upto(r_max);
  double acc = 0.0;
  for (std::size_t i = b.size(); i-- > 0;) {
    acc = acc * z + (static_cast<double>(3 + 2 * i) / 2.0) * b[i];
  }
  return 1.0 - delta * std::sqrt(z) * acc;
}

}  // namespace

double cosine_map(double delta, double rho) {
  require_delta(delta);
  rho = clamp_range(rho, -1.0, 1.0, "cosine_map input");
  if (delta == 0.0 || rho == 1.0) return rho;
  const double root = std::sqrt((1.0 - rho) * (1.0 + rho));
  return rho + delta * (2.0 / kPi) * (root - rho * stable_acos(rho));
}

double cosine_map_deriv(double delta, double rho) {
  require_delta(delta);
  rho = clamp_range(rho, -1.0, 1.0, "cosine_map_deriv input");
  if (delta == 0.0) return 1.0;
  return 1.0 - delta * (2.0 / kPi) * stable_acos(rho);
}

double sqdist_map(double delta, double z) {
  require_delta(delta);
  z = clamp_range(z, 0.0, 1.0, "sqdist_map input");
  if (delta == 0.0 || z == 0.0) return z;
  if (z < kSeriesSwitch) return sqdist_series(delta, z, kSeriesBranchMax);
  const double root = 2.0 * std::sqrt(z * (1.0 - z));
  const double arc = (1.0 - 2.0 * z) * 2.0 * std::asin(std::sqrt(z));
  return z - (delta / kPi) * (root - arc);
}

double sqdist_map_deriv(double delta, double z) {
  require_delta(delta);
  z = clamp_range(z, 0.0, 1.0, "sqdist_map_deriv input");
  if (delta == 0.0) return 1.0;
  if (z > 0.0 && z < kSeriesSwitch) return sqdist_deriv_series(delta, z, kSeriesBranchMax);
  return 1.0 - delta * (4.0 / kPi) * std::asin(std::sqrt(z));
}

double sqdist_map_second(double delta, double z) {
  require_delta(delta);
  z = clamp_range(z, 0.0, 1.0, "sqdist_map_second input");
  if (z < 1e-12 || z > 1.0 - 1e-12) {
    throw std::domain_error("sqdist_map_second is singular at the endpoints");
  }
  return -delta * (2.0 / kPi) / std::sqrt(z * (1.0 - z));
}

double series_coeff(int r) {
  if (r < 3 || r % 2 == 0) {
    throw std::invalid_argument("series_coeff: odd index r >= 3 required");
  }
  // b_r = (2/pi) * ((r/(r-2))^2 - 1) * ((r-2)!!)^2 / r!  with the odd double
  // factorial (2m+1)!! = (2m+1)!/(2^m m!), m = (r-3)/2, all in the log domain.
  const double m = (r - 3) / 2.0;
  const double log_df = std::lgamma(static_cast<double>(r) - 1.0) - m * std::log(2.0) -
                        std::lgamma(m + 1.0);
  const double front = (static_cast<double>(r) / (r - 2.0)) * (static_cast<double>(r) / (r - 2.0)) - 1.0;
  const double log_val = std::log(2.0 / kPi) + std::log(front) + 2.0 * log_df -
                         std::lgamma(static_cast<double>(r) + 1.0);
  return std::exp(log_val);
}

std::vector<double> series_coeffs(int r_max) { return coeffs_upto(r_max); }

PartialSum series_partial_sum(int r_max) {
  const auto b = coeffs_upto(std::min(r_max, kSeriesCap));
  PartialSum out;
  for (double v : b) out.sum += v;
  if (!b.empty()) {
    const double r_last = 3.0 + 2.0 * (static_cast<double>(b.size()) - 1.0);
    out.tail_bound = b.back() * r_last / 3.0;  // integral bound on sum of K r^{-5/2} over odd r
  }
  return out;
}

double invdist_map(double delta, double w) {
  require_delta(delta);
  if (!(w > 1.0)) {
    throw std::domain_error("invdist_map requires w > 1");
  }
  if (delta == 0.0) return w;
  const double zz = sqdist_map(delta, 1.0 / (w * w));
  if (!(zz > 0.0)) {
    throw std::domain_error("invdist_map diverged: squared distance collapsed to 0");
  }
  return 1.0 / std::sqrt(zz);
}

double invdist_map_deriv(double delta, double w) {
  require_delta(delta);
  if (!(w > 1.0)) {
    throw std::domain_error("invdist_map_deriv requires w > 1");
  }
  if (delta == 0.0) return 1.0;
  const double z = 1.0 / (w * w);
  const double zz = sqdist_map(delta, z);
  if (!(zz > 0.0)) {
    throw std::domain_error("invdist_map_deriv diverged: squared distance collapsed to 0");
  }
  return sqdist_map_deriv(delta, z) / (w * w * w * std::pow(zz, 1.5));
}

double invdist_argmin(double delta) {
  require_positive_delta(delta);
  if (delta <= 0.5) return 1.0;
  const double angle = std::min(kPi / (2.0 * delta), kPi);
  return 1.0 / std::sqrt(0.5 * (1.0 - std::cos(angle)));
}

double invdist_remainder(double delta, double w) {
  require_positive_delta(delta);
  if (!(w > 1.0)) {
    throw std::domain_error("invdist_remainder requires w > 1");
  }
  // invdist_map(w) = w / sqrt(1 - g), g = delta * sum b_r w^{-(r-2)}; the
  // remainder subtracts the first expansion terms, so compute in double-double.
  const DD pi = dd_pi();
  const DD dlt(delta);
  const DD x = dd_div(DD(1.0), DD(w));
  const DD x2 = dd_mul(x, x);

  DD coeff = dd_div(DD(8.0), dd_mul(DD(3.0), pi));  // b_3
  DD xpow = x;                                       // x^{r-2}
  DD sum(0.0);
  bool converged = false;
  for (int r = 3; r <= 4000001; r += 2) {
    const DD term = dd_mul(coeff, xpow);
    sum = dd_add(sum, term);
    if (std::abs(term.hi) < 1e-35 * (std::abs(sum.hi) + 1e-300)) {
      converged = true;
      break;
    }
    const double rd = static_cast<double>(r);
    coeff = dd_mul(coeff, dd_div(DD((rd - 2.0) * (rd - 2.0)), DD((rd - 1.0) * (rd + 2.0))));
    xpow = dd_mul(xpow, x2);
  }
  if (!converged) {
    throw std::runtime_error("invdist_remainder: series did not converge (w too close to 1)");
  }
  const DD g = dd_mul(dlt, sum);
  const DD one_minus_g = dd_sub(DD(1.0), g);
  if (one_minus_g.hi <= 0.0) {
    throw std::domain_error("invdist_remainder diverged: squared distance collapsed to 0");
  }
  const DD omega = dd_div(DD(w), dd_sqrt(one_minus_g));
  const DD c1 = dd_mul(dlt, dd_div(DD(4.0), dd_mul(DD(3.0), pi)));  // delta*4/(3 pi)
  const DD c2 = dd_div(dd_mul(DD(1.5), dd_mul(c1, c1)), DD(w));
  DD eps = dd_sub(dd_sub(dd_sub(omega, DD(w)), c1), c2);
  eps = dd_div(dd_mul(eps, DD(w * w)), dlt);
  return eps.value();
}

double propagation_estimate(double delta, double w, std::int64_t k) {
  require_positive_delta(delta);
  if (!(w > 1.0)) {
    throw std::domain_error("propagation_estimate requires w > 1");
  }
  if (k < 1) {
    throw std::invalid_argument("propagation_estimate requires k >= 1");
  }
  const double kd = static_cast<double>(k);
  return w + delta * (4.0 / (3.0 * kPi)) * (kd - 1.0) +
         delta * (2.0 / kPi) * std::log((3.0 * kPi / (4.0 * delta)) * w + kd - 1.0);
}

MapTrace propagate(double delta, double rho1, int depth) {
  require_delta(delta);
  if (depth < 1) {
    throw std::invalid_argument("propagate requires depth >= 1");
  }
  rho1 = clamp_range(rho1, -1.0, 1.0, "propagate start");
  MapTrace t;
  t.cosine.reserve(depth);
  t.sqdist.reserve(depth);
  t.invdist.reserve(depth);
  t.kernel_sum.reserve(depth);
  t.boundary_start = (rho1 == 1.0 || rho1 == -1.0);

  double rho = rho1;
  double z = 0.5 * (1.0 - rho1);
  double u = rho1;
  for (int k = 1; k <= depth; ++k) {
    t.cosine.push_back(rho);
    t.sqdist.push_back(z);
    t.invdist.push_back(z > 0.0 ? 1.0 / std::sqrt(z)
                                : std::numeric_limits<double>::infinity());
    t.kernel_sum.push_back(u);
    if (k < depth) {
      const double slope = sqdist_map_deriv(delta, z);
      z = sqdist_map(delta, z);
      rho = 1.0 - 2.0 * z;
      u = slope * u + rho;
    }
  }
  return t;
}

double sandwich_coeff(double delta, double rho1) {
  require_positive_delta(delta);
  if (!(rho1 > -1.0) || !(rho1 < 1.0)) {
    throw std::domain_error("sandwich_coeff requires rho1 strictly inside (-1, 1)");
  }
  const double z1 = 0.5 * (1.0 - rho1);
  const double b3 = 8.0 / (3.0 * kPi);
  const double zeta1 = sqdist_map(delta, z1);

  // base case: u_1 = 1 - 2 z1 must sit above A_1 - c z1
  const double c_base =
      2.0 + (3.0 * kPi / 16.0) / delta * std::pow(z1, -1.5) - (9.0 / 8.0) / z1;

  // induction step: c >= 2 + (1/2)/b3 * eps(z1^{-1/2}) z1/zeta(z1)
  //                        + (1/4)/b3 * S(z1)/zeta(z1),
  // S = sum_{odd r>=5} r b_r z1^{(r-3)/2}
  const double x = std::sqrt(z1);
  double S = 0.0;
  {
    double coeff = b3;
    double xpow = 1.0;  // x^{r-3} starting at r = 3
    bool converged = false;
    for (int r = 3; r <= kSeriesCap; r += 2) {
      if (r >= 5) {
        const double term = static_cast<double>(r) * coeff * xpow;
        S += term;
        if (term < 1e-18 * (S + 1e-300)) {
          converged = true;
          break;
        }
      }
      const double rd = static_cast<double>(r);
      coeff *= (rd - 2.0) * (rd - 2.0) / ((rd - 1.0) * (rd + 2.0));
      xpow *= z1;  // advance x^{r-3} by x^2 = z1
    }
    if (!converged) {
      throw std::runtime_error("sandwich_coeff: series did not converge (rho1 too close to -1)");
    }
  }
  const double eps = invdist_remainder(delta, 1.0 / x);
  const double c_step = 2.0 + 0.5 / b3 * eps * z1 / zeta1 + 0.25 / b3 * S / zeta1;
  return std::max(c_base, c_step) * (1.0 + 1e-9);
}

}  // namespace ntkeoc
