#include <cmath>
#include <functional>
#include <stdexcept>

#include <doctest.h>

#include "ntkeoc/activation.hpp"
#include "ntkeoc/duals.hpp"
#include "ntkeoc/scalar_maps.hpp"

using namespace ntkeoc;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("closed-form duals at special correlations") {
  CHECK(dual_sign(0.0) == 0.0);
  CHECK(dual_sign(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dual_sign(-1.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(dual_sign(0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  CHECK(dual_abs(0.0) == doctest::Approx(2.0 / kPi).epsilon(1e-15));
  CHECK(dual_abs(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dual_abs(-1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dual_abs(0.5) ==
        doctest::Approx(1.0 / 6.0 + std::sqrt(3.0) / kPi).epsilon(1e-15));
}

TEST_CASE("derivative of the abs dual is the sign dual") {
  for (int i = -9; i <= 9; ++i) {
    const double rho = i / 10.0;
    const double h = 1e-5;
    const double fd = (dual_abs(rho + h) - dual_abs(rho - h)) / (2 * h);
    CHECK(fd == doctest::Approx(dual_sign(rho)).epsilon(1e-6));
  }
}

TEST_CASE("activation duals at special points") {
  const ActivationParams p = make_activation(0.5, 0.5);
  CHECK(dual_activation(p, 0.0) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-15));
  // unit second moment under the critical variance, for any (a, b)
  for (const ActivationParams& q : {p, make_activation(1.0, 2.0), make_activation(0.0, 1.0)}) {
    const double s2 = q.sigma * q.sigma;
    CHECK(s2 * dual_activation(q, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s2 * dual_activation_deriv(q, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("normalized duals reproduce the propagation maps") {
  // sigma^2 E[phi(U1)phi(U2)] is exactly the cosine map, and the derivative
  // version is its slope; this ties the Gaussian-integral layer to the
  // scalar recursions
  const ActivationParams ps[] = {make_activation(1.0, 2.0), make_activation(0.5, 0.5),
                                 make_activation(0.0, 1.0), make_activation(3.0, -1.0)};
  for (const ActivationParams& p : ps) {
    const double s2 = p.sigma * p.sigma;
    for (int i = -20; i <= 20; ++i) {
      const double rho = i / 20.0;
      CHECK(s2 * dual_activation(p, rho) ==
            doctest::Approx(cosine_map(p.delta, rho)).epsilon(1e-14));
      CHECK(s2 * dual_activation_deriv(p, rho) ==
            doctest::Approx(cosine_map_deriv(p.delta, rho)).epsilon(1e-14));
    }
  }
}

TEST_CASE("gauss-hermite rules") {
  for (int order : {1, 2, 3, 8, 33, 64}) {
    const QuadratureRule& rule = gauss_hermite_rule(order);
    REQUIRE(static_cast<int>(rule.nodes.size()) == order);
    double w_sum = 0.0, x2_sum = 0.0;
    for (int i = 0; i < order; ++i) {
      w_sum += rule.weights[i];
      x2_sum += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
      // symmetric nodes come in exact +- pairs
      CHECK(rule.nodes[i] == -rule.nodes[order - 1 - i]);
    }
    CHECK(w_sum == doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
    if (order >= 2) CHECK(x2_sum == doctest::Approx(std::sqrt(kPi) / 2.0).epsilon(1e-13));
  }
  CHECK_THROWS_AS(gauss_hermite_rule(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_hermite_rule(257), std::invalid_argument);
}

TEST_CASE("gauss-legendre rules") {
  for (int order : {1, 2, 5, 16, 64}) {
    const QuadratureRule& rule = gauss_legendre_rule(order);
    double w_sum = 0.0, x2_sum = 0.0;
    for (int i = 0; i < order; ++i) {
      w_sum += rule.weights[i];
      x2_sum += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    }
    CHECK(w_sum == doctest::Approx(2.0).epsilon(1e-14));
    if (order >= 2) CHECK(x2_sum == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  }
}

TEST_CASE("tensor quadrature is exact for polynomials") {
  const auto linear = [](double s) { return s; };
  const auto square = [](double s) { return s * s; };
  const auto cubic = [](double s) { return s * s * s; };
  for (int i = -4; i <= 4; ++i) {
    const double rho = i / 4.0;
    CHECK(dual_quadrature(std::function<double(double)>(linear), rho, 16).value ==
          doctest::Approx(rho).epsilon(1e-14));
    CHECK(dual_quadrature(std::function<double(double)>(square), rho, 16).value ==
          doctest::Approx(1.0 + 2.0 * rho * rho).epsilon(1e-14));
    CHECK(dual_quadrature(std::function<double(double)>(cubic), rho, 16).value ==
          doctest::Approx(6.0 * rho * rho * rho + 9.0 * rho).epsilon(1e-13));
  }
}

TEST_CASE("tensor quadrature loses accuracy on the kink") {
  // the generic rule cannot resolve |.| well; the piecewise-aware overload
  // exists precisely because of this gap
  const auto abs_generic = [](double s) { return std::abs(s); };
  const double err = std::abs(
      dual_quadrature(std::function<double(double)>(abs_generic), 0.5, 64).value -
      dual_abs(0.5));
  CHECK(err > 1e-7);
  const double err_aware = std::abs(dual_quadrature(abs_fn(), 0.5, 64).value - dual_abs(0.5));
  CHECK(err_aware < 1e-12);
  CHECK(err_aware < err);
}

TEST_CASE("kink-aware quadrature matches every closed form") {
  const ActivationParams p = make_activation(1.0, 2.0);
  for (int i = -100; i <= 100; ++i) {
    const double rho = i / 100.0;
    CHECK(dual_quadrature(abs_fn(), rho, 64).value ==
          doctest::Approx(dual_abs(rho)).epsilon(1e-12));
    CHECK(dual_quadrature(sign_fn(), rho, 64).value ==
          doctest::Approx(dual_sign(rho)).epsilon(1e-12));
    CHECK(dual_quadrature(activation_fn(p), rho, 64).value ==
          doctest::Approx(dual_activation(p, rho)).epsilon(1e-12));
    CHECK(dual_quadrature(activation_deriv_fn(p), rho, 64).value ==
          doctest::Approx(dual_activation_deriv(p, rho)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(dual_quadrature(abs_fn(), 1.5, 64), std::domain_error);
}

TEST_CASE("piecewise-linear evaluations") {
  const ActivationParams p = make_activation(0.5, 2.0);
  const PiecewiseLinearFn f = activation_fn(p);
  CHECK(f(3.0) == doctest::Approx(phi(p, 3.0)).epsilon(1e-15));
  CHECK(f(-3.0) == doctest::Approx(phi(p, -3.0)).epsilon(1e-15));
  const PiecewiseLinearFn g = activation_deriv_fn(p);
  CHECK(g(2.0) == 2.5);
  CHECK(g(-2.0) == -1.5);
  CHECK(sign_fn()(-0.1) == -1.0);
  CHECK(abs_fn()(-0.1) == doctest::Approx(0.1));
}

TEST_CASE("monte carlo dual estimates") {
  const auto f = [](double s) { return std::abs(s); };
  const DualEstimate e =
      dual_monte_carlo(std::function<double(double)>(f), 0.3, 200000, 7);
  CHECK(e.samples == 200000);
  CHECK(e.std_error > 0.0);
  CHECK(e.std_error < 1e-2);
  CHECK(std::abs(e.value - dual_abs(0.3)) < 5.0 * e.std_error);

  const auto sgn = [](double s) { return s < 0.0 ? -1.0 : 1.0; };
  const DualEstimate zero =
      dual_monte_carlo(std::function<double(double)>(sgn), 0.0, 1000000, 11);
  CHECK(std::abs(zero.value) < 3.0 * zero.std_error);
  const DualEstimate one =
      dual_monte_carlo(std::function<double(double)>(f), 1.0, 50000, 13);
  CHECK(std::abs(one.value - 1.0) < 3.0 * one.std_error);

  // same seed, same estimate; a different seed moves it
  const DualEstimate e2 =
      dual_monte_carlo(std::function<double(double)>(f), 0.3, 200000, 7);
  CHECK(e.value == e2.value);
  const DualEstimate e3 =
      dual_monte_carlo(std::function<double(double)>(f), 0.3, 200000, 8);
  CHECK(e.value != e3.value);
  CHECK_THROWS_AS(dual_monte_carlo(std::function<double(double)>(f), 0.3, 1, 7),
                  std::invalid_argument);
}
