#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "ntkeoc/activation.hpp"
#include "ntkeoc/scalar_maps.hpp"

using namespace ntkeoc;

namespace {

constexpr double kPi = 3.14159265358979323846;

// reference values computed independently at 40-digit precision
constexpr double kOmegaOneSqrt2 = 2.346034268242520221;
constexpr double kArgminTwoThirds = 1.0823922002923939688;
constexpr double kRemainderOne10 = 0.25513234639545083351;
constexpr double kRemainderOne100 = 0.2355395003750626726;
constexpr double kRemainderHalf1e4 = 0.090225845783074174471;
constexpr double kRemainderLimitOne = 0.23356152220642832174;
constexpr double kRemainderLimitHalf = 0.090221369169986147589;
constexpr double kEstimateOne2At1e4 = 4251.5711236874973388;

double fd_deriv(double (*f)(double, double), double delta, double x, double h) {
  return (f(delta, x + h) - f(delta, x - h)) / (2 * h);
}

}  // namespace

TEST_CASE("activation parameters") {
  const ActivationParams id = make_activation(1.0, 0.0);
  CHECK(id.delta == 0.0);
  CHECK(id.sigma == 1.0);
  CHECK(id.lipschitz == 1.0);
  CHECK(phi(id, -3.0) == -3.0);
  CHECK(phi_prime(id, -3.0) == 1.0);

  const ActivationParams relu = make_activation(0.5, 0.5);
  CHECK(relu.delta == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(relu.sigma == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(phi(relu, 2.0) == doctest::Approx(2.0));
  CHECK(phi(relu, -2.0) == 0.0);
  CHECK(phi_prime(relu, -2.0) == 0.0);
  CHECK(phi_prime(relu, 0.0) == 0.5);  // the derivative at the kink is a

  const ActivationParams abs = make_activation(0.0, 1.0);
  CHECK(abs.delta == 1.0);
  CHECK(phi(abs, -2.0) == 2.0);
  CHECK(phi_prime(abs, -2.0) == -1.0);

  CHECK(make_activation(1.0, 2.0).lipschitz == 3.0);
  CHECK_THROWS_AS(make_activation(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("cosine map values and monotonicity") {
  CHECK(cosine_map(0.7, 1.0) == 1.0);
  CHECK(cosine_map(1.0, -1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosine_map(0.25, -1.0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(cosine_map(0.5, 0.0) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
  for (int i = -9; i <= 9; ++i) {
    const double rho = i / 10.0;
    CHECK(cosine_map(0.0, rho) == rho);
    // the map pushes every cosine toward 1 and never past it
    const double next = cosine_map(0.6, rho);
    CHECK(next >= rho);
    CHECK(next <= 1.0);
  }
}

TEST_CASE("cosine map derivative") {
  CHECK(cosine_map_deriv(0.8, 1.0) == 1.0);
  CHECK(cosine_map_deriv(0.8, -1.0) == doctest::Approx(1.0 - 1.6).epsilon(1e-15));
  for (int i = -8; i <= 8; ++i) {
    const double rho = i / 10.0;
    const double fd = fd_deriv(&cosine_map, 0.37, rho, 1e-6);
    CHECK(cosine_map_deriv(0.37, rho) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("sqdist map agrees with the cosine map under z = (1-rho)/2") {
  CHECK(sqdist_map(1.0, 0.5) == doctest::Approx(0.5 - 1.0 / kPi).epsilon(1e-15));
  CHECK(sqdist_map(0.3, 0.0) == 0.0);
  CHECK(sqdist_map(0.3, 1.0) == doctest::Approx(0.7).epsilon(1e-15));
  for (int i = 0; i <= 200; ++i) {
    const double z = i / 200.0;
    const double via_cosine = (1.0 - cosine_map(0.45, 1.0 - 2.0 * z)) / 2.0;
    CHECK(sqdist_map(0.45, z) == doctest::Approx(via_cosine).epsilon(1e-12));
    CHECK(sqdist_map_deriv(0.45, z) ==
          doctest::Approx(cosine_map_deriv(0.45, 1.0 - 2.0 * z)).epsilon(1e-14));
  }
}

TEST_CASE("sqdist derivatives against finite differences") {
  for (int i = 1; i <= 9; ++i) {
    const double z = i / 10.0;
    const double fd1 = fd_deriv(&sqdist_map, 0.9, z, 1e-6);
    CHECK(sqdist_map_deriv(0.9, z) == doctest::Approx(fd1).epsilon(1e-7));
    const double fd2 = fd_deriv(&sqdist_map_deriv, 0.9, z, 1e-6);
    CHECK(sqdist_map_second(0.9, z) == doctest::Approx(fd2).epsilon(1e-6));
  }
  CHECK(sqdist_map_second(1.0, 0.5) == doctest::Approx(-4.0 / kPi).epsilon(1e-15));
  CHECK_THROWS_AS(sqdist_map_second(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(sqdist_map_second(1.0, 1.0), std::domain_error);
}

TEST_CASE("series coefficients") {
  CHECK(series_coeff(3) == doctest::Approx(8.0 / (3.0 * kPi)).epsilon(1e-15));
  CHECK_THROWS_AS(series_coeff(2), std::invalid_argument);
  CHECK_THROWS_AS(series_coeff(4), std::invalid_argument);

  // log-domain closed form vs the exact ratio recurrence
  const std::vector<double> coeffs = series_coeffs(999);
  double b = coeffs[0];
  for (std::size_t i = 0; i + 1 < coeffs.size(); ++i) {
    const int r = 3 + 2 * static_cast<int>(i);
    CHECK(coeffs[i] == doctest::Approx(series_coeff(r)).epsilon(1e-12));
    b *= static_cast<double>((r - 2) * (r - 2)) / ((r - 1) * (r + 2));
    CHECK(coeffs[i + 1] == doctest::Approx(b).epsilon(1e-13));
    CHECK(coeffs[i + 1] > 0.0);
    CHECK(coeffs[i + 1] < coeffs[i]);
  }
}

TEST_CASE("series partial sums approach 1") {
  const PartialSum s3 = series_partial_sum(3);
  CHECK(s3.sum == doctest::Approx(8.0 / (3.0 * kPi)).epsilon(1e-15));
  const PartialSum s1e3 = series_partial_sum(1001);
  const PartialSum s1e5 = series_partial_sum(100001);
  CHECK(s1e3.sum < s1e5.sum);
  CHECK(s1e5.sum < 1.0);
  CHECK(s1e5.sum > 0.999);
  // the tail estimate accounts for the remaining mass (total is exactly 1)
  CHECK(s1e5.sum + s1e5.tail_bound == doctest::Approx(1.0).epsilon(1e-9));
  // truncating the series from below: sqdist_map minus the partial expansion
  for (int i = 1; i <= 30; ++i) {
    const double z = 0.01 * i;
    const std::vector<double> coeffs = series_coeffs(63);
    double expansion = z;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      const int r = 3 + 2 * static_cast<int>(j);
      expansion -= 0.85 * coeffs[j] * std::pow(z, r / 2.0);
    }
    CHECK(sqdist_map(0.85, z) == doctest::Approx(expansion).epsilon(1e-10));
  }
}

TEST_CASE("inverse distance map") {
  CHECK(invdist_map(1.0, std::sqrt(2.0)) ==
        doctest::Approx(kOmegaOneSqrt2).epsilon(1e-15));
  for (int i = 1; i <= 20; ++i) {
    const double w = 1.0 + 0.5 * i;
    CHECK(invdist_map(0.6, w) ==
          doctest::Approx(1.0 / std::sqrt(sqdist_map(0.6, 1.0 / (w * w)))).epsilon(1e-14));
    const double fd = fd_deriv(&invdist_map, 0.6, w, 1e-6);
    CHECK(invdist_map_deriv(0.6, w) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("inverse distance argmin") {
  CHECK(invdist_argmin(0.5) == 1.0);
  CHECK(invdist_argmin(0.25) == 1.0);
  CHECK(invdist_argmin(2.0 / 3.0) ==
        doctest::Approx(kArgminTwoThirds).epsilon(1e-15));
  CHECK_THROWS_AS(invdist_argmin(0.0), std::domain_error);

  // a genuine interior minimum for delta > 1/2
  const double w_star = invdist_argmin(0.75);
  const double at_min = invdist_map(0.75, w_star);
  CHECK(invdist_map(0.75, w_star * (1 - 1e-4)) > at_min);
  CHECK(invdist_map(0.75, w_star * (1 + 1e-4)) > at_min);
}

TEST_CASE("expansion and contraction of the inverse distance map") {
  for (double delta : {0.125, 0.5, 0.875, 1.0}) {
    const double w_star = delta > 0.5 ? invdist_argmin(delta) : 1.0;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int i = 1; i <= 400; ++i) {
      const double w = w_star + 0.25 * i;
      const double v = invdist_map(delta, w);
      CHECK(v >= w);  // expansion beyond the argmin
      if (i > 1) CHECK(v - prev <= 0.25 + 1e-12);  // slope at most 1
      prev = v;
    }
  }
}

TEST_CASE("remainder of the large-w expansion") {
  CHECK(invdist_remainder(1.0, 10.0) ==
        doctest::Approx(kRemainderOne10).epsilon(1e-14));
  CHECK(invdist_remainder(1.0, 100.0) ==
        doctest::Approx(kRemainderOne100).epsilon(1e-14));
  CHECK(invdist_remainder(0.5, 1e4) ==
        doctest::Approx(kRemainderHalf1e4).epsilon(1e-14));

  // decreasing in w, with the analytic w -> infinity limits
  CHECK(kRemainderOne10 > kRemainderOne100);
  CHECK(kRemainderOne100 > kRemainderLimitOne);
  CHECK(invdist_remainder(1.0, 1e6) ==
        doctest::Approx(kRemainderLimitOne).epsilon(1e-5));
  CHECK(invdist_remainder(0.5, 1e6) ==
        doctest::Approx(kRemainderLimitHalf).epsilon(1e-5));

  // the expansion it is defined by: omega(w) = w + C + 1.5 C^2/w + delta eps/w^2
  for (double delta : {0.25, 0.75, 1.0}) {
    const double C = delta * 4.0 / (3.0 * kPi);
    for (double w : {2.0, 5.0, 10.0, 100.0}) {
      const double rebuilt = w + C + 1.5 * C * C / w +
                             delta * invdist_remainder(delta, w) / (w * w);
      CHECK(invdist_map(delta, w) == doctest::Approx(rebuilt).epsilon(1e-13));
    }
  }
}

TEST_CASE("propagation estimate") {
  CHECK(propagation_estimate(1.0, 2.0, 10000) ==
        doctest::Approx(kEstimateOne2At1e4).epsilon(1e-15));
  CHECK(propagation_estimate(1.0, 2.0, 1) ==
        doctest::Approx(2.0 + (2.0 / kPi) * std::log(3.0 * kPi / 2.0)).epsilon(1e-15));

  // the true iterate stays within an O(1) band of the estimate
  for (double delta : {0.25, 1.0}) {
    double w = 1.5;
    double worst = 0.0;
    for (int k = 1; k <= 2000; ++k) {
      worst = std::max(worst, std::abs(w - propagation_estimate(delta, 1.5, k)));
      w = invdist_map(delta, w);
    }
    CHECK(worst < 1.0);
  }
}

TEST_CASE("propagate fills consistent traces") {
  const MapTrace t = propagate(0.5, 0.0, 6);
  REQUIRE(t.depth() == 6);
  CHECK_FALSE(t.boundary_start);
  CHECK(t.cosine[0] == 0.0);
  CHECK(t.sqdist[0] == 0.5);
  CHECK(t.invdist[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(t.kernel_sum[0] == 0.0);
  CHECK(t.kernel_sum[1] == doctest::Approx(1.0 / kPi).epsilon(1e-15));
  for (int k = 1; k < 6; ++k) {
    CHECK(t.cosine[k] == doctest::Approx(cosine_map(0.5, t.cosine[k - 1])).epsilon(1e-12));
    CHECK(t.cosine[k] >= t.cosine[k - 1]);
    CHECK(t.sqdist[k] <= t.sqdist[k - 1]);
    CHECK(t.invdist[k] == doctest::Approx(1.0 / std::sqrt(t.sqdist[k])).epsilon(1e-15));
    CHECK(t.cosine[k] == doctest::Approx(1.0 - 2.0 * t.sqdist[k]).epsilon(1e-15));
  }
}

TEST_CASE("propagate on the diagonal is exact") {
  const MapTrace t = propagate(1.0, 1.0, 50);
  CHECK(t.boundary_start);
  for (int k = 0; k < 50; ++k) {
    CHECK(t.cosine[k] == 1.0);
    CHECK(t.sqdist[k] == 0.0);
    CHECK(std::isinf(t.invdist[k]));
    CHECK(t.kernel_sum[k] == static_cast<double>(k + 1));  // u_k = k, no rounding
  }
}

TEST_CASE("propagate from the antipode") {
  const MapTrace t0 = propagate(0.0, -1.0, 10);
  CHECK(t0.boundary_start);
  CHECK(t0.cosine[9] == -1.0);  // identity dynamics stay put
  const MapTrace t1 = propagate(1.0, -1.0, 4);
  CHECK(t1.cosine[1] == doctest::Approx(1.0).epsilon(1e-15));  // |.| folds it to aligned
}

TEST_CASE("kernel sum sandwich on a quick grid") {
  for (double delta : {0.5, 1.0}) {
    for (double rho1 : {-0.9, -0.3, 0.4, 0.9}) {
      const double c = sandwich_coeff(delta, rho1);
      CHECK(c > 0.0);
      const MapTrace t = propagate(delta, rho1, 128);
      for (int k = 1; k <= 128; ++k) {
        const double upper =
            (3.0 * kPi / 16.0) / delta * t.invdist[k - 1] - 0.125;
        CHECK(t.kernel_sum[k - 1] <= upper);
        CHECK(t.kernel_sum[k - 1] >= upper - c * k * t.sqdist[k - 1]);
      }
    }
  }
  CHECK_THROWS_AS(sandwich_coeff(0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(sandwich_coeff(0.5, 1.0), std::domain_error);
}
