#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "stirgamma/closed_form.hpp"
#include "stirgamma/quadrature.hpp"
#include "stirgamma/stirling_gamma.hpp"

using namespace stirgamma;

namespace {

double log_v_quadrature(double a, double b, long m, long n, long k) {
  return log_integrate_positive_axis([&](double alpha) {
    return (a + k - 1.0) * std::log(alpha) -
           b * log_ascending_factorial(alpha, m) -
           log_ascending_factorial(alpha, n);
  });
}

}  // namespace

TEST_CASE("norm const closed form: hand anchors") {
  // S_{2,1,3}: the j=1 term vanishes and the j=2 term is log 2
  REQUIRE_THAT(std::exp(log_norm_const_closed_form(2, 1, 3)),
               Catch::Matchers::WithinRel(std::log(2.0), 1e-12));
  REQUIRE_THAT(std::exp(log_norm_const_closed_form(3, 2, 3)),
               Catch::Matchers::WithinRel(1.5 - 2.0 * std::log(2.0), 1e-12));
  REQUIRE_THAT(std::exp(log_norm_const_closed_form(4, 2, 3)),
               Catch::Matchers::WithinRel(3.0 * std::log(2.0) - 2.0, 1e-12));
}

TEST_CASE("norm const closed form agrees with quadrature on a sweep") {
  for (long a = 2; a <= 5; ++a)
    for (long b = 1; b <= 3; ++b)
      for (long m : {3L, 5L, 9L, 14L, 20L}) {
        if (!(b < a && a < b * m)) continue;
        const double cf = log_norm_const_closed_form(a, b, m);
        const double q = log_norm_const_quadrature(
            StirlingGammaParams(static_cast<double>(a), static_cast<double>(b), m));
        REQUIRE_THAT(std::exp(cf - q), Catch::Matchers::WithinAbs(1.0, 1e-8));
      }
}

TEST_CASE("V coefficients: n = m, n > m and n < m branches") {
  for (long a : {2L, 3L})
    for (long b : {1L, 2L})
      for (long m : {5L, 10L}) {
        if (!(b < a && a < b * m)) continue;
        for (long n : {m, m + 3, m - 2}) {
          for (long k = 1; k <= n; ++k) {
            const double cf = log_v_closed_form(a, b, m, n, k);
            const double q = log_v_quadrature(static_cast<double>(a),
                                              static_cast<double>(b), m, n, k);
            REQUIRE_THAT(std::exp(cf - q), Catch::Matchers::WithinAbs(1.0, 1e-8));
          }
        }
      }
}

TEST_CASE("V(1,1) equals the normalizing constant") {
  REQUIRE(log_v_closed_form(3, 1, 8, 1, 1) == log_norm_const_closed_form(3, 1, 8));
}

TEST_CASE("parameter validation") {
  REQUIRE_THROWS_AS(log_norm_const_closed_form(3, 3, 5), ParameterError);  // a/b = 1
  REQUIRE_THROWS_AS(log_norm_const_closed_form(6, 2, 3), ParameterError);  // a/b = m
  REQUIRE_THROWS_AS(log_v_closed_form(2, 1, 5, 4, 5), std::domain_error);  // k > n
  ClosedFormOptions opts;
  opts.max_reference_size = 10;
  REQUIRE_THROWS_AS(log_norm_const_closed_form(2, 1, 11, opts), std::length_error);
  REQUIRE_THROWS_AS(
      log_norm_const_closed_form(StirlingGammaParams(2.5, 1.0, 5)), ParameterError);
}

TEST_CASE("instability refusal on a tight digit budget") {
  ClosedFormOptions opts;
  opts.max_log10_cancellation = 2.0;
  REQUIRE_THROWS_AS(log_norm_const_closed_form(2, 1, 20, opts), InstabilityError);
}
