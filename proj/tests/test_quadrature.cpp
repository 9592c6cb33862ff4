#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "stirgamma/quadrature.hpp"

using namespace stirgamma;

TEST_CASE("exponential and gamma integrals") {
  const double z = log_integrate_positive_axis([](double a) { return -a; });
  REQUIRE_THAT(z, Catch::Matchers::WithinAbs(0.0, 1e-11));
  // integral of a^{4} e^{-a} = Gamma(5) = 24
  const double g = log_integrate_positive_axis(
      [](double a) { return 4.0 * std::log(a) - a; });
  REQUIRE_THAT(std::exp(g), Catch::Matchers::WithinRel(24.0, 1e-10));
}

TEST_CASE("integrable endpoint singularity") {
  // integral of a^{-0.6} e^{-a} = Gamma(0.4)
  const double g = log_integrate_positive_axis(
      [](double a) { return -0.6 * std::log(a) - a; });
  REQUIRE_THAT(std::exp(g), Catch::Matchers::WithinRel(std::tgamma(0.4), 1e-9));
}

TEST_CASE("extreme magnitudes handled by the shift") {
  // e^{-1000} * Gamma(3): log result = log(2) - 1000
  const double g = log_integrate_positive_axis(
      [](double a) { return 2.0 * std::log(a) - a - 1000.0; });
  REQUIRE_THAT(g, Catch::Matchers::WithinAbs(std::log(2.0) - 1000.0, 1e-10));
}

TEST_CASE("range integration") {
  // integral_1^2 of 1/a = log 2
  const double g = log_integrate_range(
      [](double a) { return -std::log(a); }, 1.0, 2.0);
  REQUIRE_THAT(std::exp(g), Catch::Matchers::WithinRel(std::log(2.0), 1e-10));
  // upper tail of the unit exponential
  const double t = log_integrate_range(
      [](double a) { return -a; }, 3.0, std::numeric_limits<double>::infinity());
  REQUIRE_THAT(t, Catch::Matchers::WithinAbs(-3.0, 1e-10));
  REQUIRE_THROWS_AS(log_integrate_range([](double) { return 0.0; }, -1.0, 2.0),
                    std::domain_error);
}

TEST_CASE("budget exhaustion raises") {
  QuadratureOptions opts;
  opts.rel_tol = 1e-15;
  opts.max_evaluations = 200;
  REQUIRE_THROWS_AS(log_integrate_positive_axis(
                        [](double a) { return -0.9 * std::log(a) - a; }, opts),
                    QuadratureError);
}

TEST_CASE("zero integrand") {
  const double z = log_integrate_positive_axis([](double) { return kNegInf; });
  REQUIRE(z == kNegInf);
}
