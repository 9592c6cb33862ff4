#pragma once

// Closed-form evaluation of the integrals
//   V_{a,b,m}(n,k) = int_0^inf alpha^{a+k-1} / ((alpha)_m^b (alpha)_n) dalpha
// for integer a, b via exact partial fractions: after cancelling the alpha
// powers the integrand is alpha^{A} / prod_{i=1}^{I} (alpha+i)^{p_i}, whose
// expansion coefficients come from Faa di Bruno's formula with complete Bell
// polynomials of generalized harmonic numbers.  The normalizing constant
// S_{a,b,m} is the n = k = 1 case.
//
// The alternating sums cancel catastrophically as m grows, so the whole
// evaluation runs in 100-digit floats with compensated summation and refuses
// (InstabilityError) once the cancellation would eat through the configured
// digit budget.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "stirgamma/special_functions.hpp"
#include "stirgamma/stirling_gamma.hpp"

namespace stirgamma {

class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ClosedFormOptions {
  long max_reference_size = 60;        // cap on max(m, n)
  double max_log10_cancellation = 88;  // working digits minus accuracy target
};

namespace detail {

using BigFloat = boost::multiprecision::cpp_bin_float_100;

// Multiplicity of the root alpha = -i, i >= 1.
inline int root_multiplicity(long i, long b, long m, long n) {
  return static_cast<int>(b) * (i <= m - 1 ? 1 : 0) + (i <= n - 1 ? 1 : 0);
}

}  // namespace detail

/// log V_{a,b,m}(n,k) from the exact partial-fraction expansion.
inline double log_v_closed_form(long a, long b, long m, long n, long k,
                                ClosedFormOptions opts = {}) {
  using detail::BigFloat;
  if (a < 1 || b < 1) throw ParameterError("closed form: requires integer a, b >= 1");
  if (m < 2) throw ParameterError("closed form: requires m >= 2");
  if (!(b < a && a < b * m))
    throw ParameterError("closed form: requires 1 < a/b < m");
  if (k < 1 || k > n) throw std::domain_error("closed form: requires 1 <= k <= n");
  if (std::max(m, n) > opts.max_reference_size)
    throw std::length_error("closed form: max(m, n) exceeds configured cap (" +
                            std::to_string(opts.max_reference_size) + ")");

  const long abar = a + k - b - 2;  // numerator exponent after cancelling alpha^{b+1}
  const long last = std::max(m, n) - 1;

  std::vector<int> mult(static_cast<std::size_t>(last) + 1, 0);
  for (long i = 1; i <= last; ++i)
    mult[static_cast<std::size_t>(i)] = detail::root_multiplicity(i, b, m, n);

  BigFloat total = 0, comp = 0, max_term = 0;
  auto add = [&](const BigFloat& v) {  // Neumaier
    const BigFloat t = total + v;
    if (abs(total) >= abs(v))
      comp += (total - t) + v;
    else
      comp += (v - t) + total;
    total = t;
  };

  long prefix_mult = 0;  // sum of multiplicities of roots left of i
  for (long i = 1; i <= last; ++i) {
    const int pi = mult[static_cast<std::size_t>(i)];
    // rho_i(-i) = (-i)^{abar} / prod_{r != i} (r - i)^{p_r}
    BigFloat log_rho = abar * log(BigFloat(i));
    for (long r = 1; r <= last; ++r)
      if (r != i)
        log_rho -= mult[static_cast<std::size_t>(r)] * log(BigFloat(std::abs(r - i)));
    const int rho_sign = ((abar + prefix_mult) % 2 == 0) ? 1 : -1;
    const BigFloat rho = rho_sign * exp(log_rho);
    prefix_mult += pi;

    // log-derivatives of rho_i at -i feed Faa di Bruno:
    // L^{(q)}(-i) = (q-1)! [ -abar/i^q + sum_{r<i} p_r/(i-r)^q
    //                        + (-1)^q sum_{r>i} p_r/(r-i)^q ]
    std::vector<BigFloat> log_derivs(static_cast<std::size_t>(pi > 0 ? pi - 1 : 0));
    BigFloat qfact = 1;  // (q-1)!
    for (int q = 1; q <= pi - 1; ++q) {
      if (q > 1) qfact *= (q - 1);
      BigFloat below = 0, above = 0;
      for (long r = 1; r < i; ++r)
        below += mult[static_cast<std::size_t>(r)] / pow(BigFloat(i - r), q);
      for (long r = i + 1; r <= last; ++r)
        above += mult[static_cast<std::size_t>(r)] / pow(BigFloat(r - i), q);
      const BigFloat sign_q = (q % 2 == 0) ? 1 : -1;
      log_derivs[static_cast<std::size_t>(q - 1)] =
          qfact * (-BigFloat(abar) / pow(BigFloat(i), q) + below + sign_q * above);
    }
    const std::vector<BigFloat> bell = detail::bell_polynomial_values<BigFloat>(
        std::span<const BigFloat>(log_derivs), pi - 1);

    // C_{i,s} = rho_i(-i) B_{p_i - s}(L', L'', ...) / (p_i - s)!  and
    // int_0^inf (alpha+i)^{-s} contributes phi_s(i)
    BigFloat dfact = 1;  // (p_i - s)! running from s = p_i downward
    for (int s = pi; s >= 1; --s) {
      const int d = pi - s;
      if (d >= 2) dfact *= d;
      const BigFloat coef = rho * bell[static_cast<std::size_t>(d)] / dfact;
      const BigFloat phi =
          (s == 1) ? -log(BigFloat(i)) : BigFloat(1) / ((s - 1) * pow(BigFloat(i), s - 1));
      const BigFloat term = coef * phi;
      max_term = std::max(max_term, BigFloat(abs(term)));
      add(term);
    }
  }

  const BigFloat value = total + comp;
  if (!(value > 0))
    throw InstabilityError("closed form: alternating sum collapsed to a non-positive value");
  const double lost = static_cast<double>(log10(max_term / value));
  if (lost > opts.max_log10_cancellation)
    throw InstabilityError("closed form: cancellation of " + std::to_string(lost) +
                           " digits exceeds the configured budget");
  return static_cast<double>(log(value));
}

/// log S_{a,b,m} from Theorem-style alternating sums (V with n = k = 1).
inline double log_norm_const_closed_form(long a, long b, long m,
                                         ClosedFormOptions opts = {}) {
  return log_v_closed_form(a, b, m, 1, 1, opts);
}

inline double log_norm_const_closed_form(const StirlingGammaParams& p,
                                         ClosedFormOptions opts = {}) {
  const long a = std::lround(p.a), b = std::lround(p.b);
  if (p.a != static_cast<double>(a) || p.b != static_cast<double>(b))
    throw ParameterError("closed form: requires integer a and b");
  return log_norm_const_closed_form(a, b, p.m, opts);
}

/// log V_{a,b,m}(n,k) for integer a, b: the closed-form counterpart of the
/// quadrature-based v_coefficient.
inline double v_coefficient_closed_form(const StirlingGammaParams& p, long n, long k,
                                        ClosedFormOptions opts = {}) {
  const long a = std::lround(p.a), b = std::lround(p.b);
  if (p.a != static_cast<double>(a) || p.b != static_cast<double>(b))
    throw ParameterError("closed form: requires integer a and b");
  return log_v_closed_form(a, b, p.m, n, k, opts);
}

}  // namespace stirgamma
