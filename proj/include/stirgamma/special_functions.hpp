#pragma once

// Log-space special-function kernels shared by every other header:
// log-gamma, ascending factorials, digamma/trigamma, generalized harmonic
// numbers, complete Bell polynomials and signless Stirling numbers of the
// first kind.  Everything works on the log scale so that quantities like
// (alpha)_n or |s(n,k)| never have to be representable themselves.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stirgamma {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// A nonnegative quantity stored as its natural log; -inf encodes zero.
struct LogValue {
  double log_magnitude = kNegInf;

  static LogValue from_log(double lg) { return LogValue{lg}; }
  static LogValue from_value(double v) {
    if (v < 0.0) throw std::domain_error("LogValue: negative magnitude");
    return LogValue{std::log(v)};
  }
  double value() const { return std::exp(log_magnitude); }
  bool is_zero() const { return log_magnitude == kNegInf; }

  friend LogValue operator*(LogValue x, LogValue y) {
    return LogValue{x.log_magnitude + y.log_magnitude};
  }
  friend LogValue operator/(LogValue x, LogValue y) {
    return LogValue{x.log_magnitude - y.log_magnitude};
  }
};

/// log(e^a + e^b) without overflow.
inline double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

inline LogValue operator+(LogValue x, LogValue y) {
  return LogValue{log_sum_exp(x.log_magnitude, y.log_magnitude)};
}

/// log Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 terms).
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
  if (x == 1.0 || x == 2.0) return 0.0;
  static const double kCoef[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,       -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // reflection keeps the series argument away from zero
    return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double a = kCoef[0];
  for (int i = 1; i < 9; ++i) a += kCoef[i] / (z + i);
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(a);
}

/// log (x)_n = log Gamma(x + n) - log Gamma(x); zero for n = 0.
inline double log_ascending_factorial(double x, long n) {
  if (!(x > 0.0)) throw std::domain_error("log_ascending_factorial: requires x > 0");
  if (n < 0) throw std::domain_error("log_ascending_factorial: requires n >= 0");
  if (n == 0) return 0.0;
  return log_gamma(x + static_cast<double>(n)) - log_gamma(x);
}

/// psi(x) = Gamma'(x)/Gamma(x) via upward recurrence + asymptotic series.
inline double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: requires x > 0");
  double acc = 0.0;
  while (x < 8.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Bernoulli series through x^{-12}
  const double series =
      inv2 * (1.0 / 12.0 +
              inv2 * (-1.0 / 120.0 +
                      inv2 * (1.0 / 252.0 +
                              inv2 * (-1.0 / 240.0 +
                                      inv2 * (1.0 / 132.0 +
                                              inv2 * (-691.0 / 32760.0))))));
  return acc + std::log(x) - 0.5 * inv - series;
}

/// psi'(x), same scheme as digamma.
inline double trigamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("trigamma: requires x > 0");
  double acc = 0.0;
  while (x < 8.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 +
             inv * (0.5 +
                    inv * (1.0 / 6.0 +
                           inv2 * (-1.0 / 30.0 +
                                   inv2 * (1.0 / 42.0 +
                                           inv2 * (-1.0 / 30.0 +
                                                   inv2 * (5.0 / 66.0)))))));
  return acc + series;
}

namespace detail {

/// H_{j,s} = sum_{i=1..j} i^{-s}; templated so the closed-form path can run
/// it in extended precision.
template <class Real>
Real harmonic_number(long j, int s) {
  Real acc = 0;
  for (long i = 1; i <= j; ++i) acc += Real(1) / pow(Real(i), s);
  return acc;
}

/// Complete exponential Bell polynomials B_0..B_smax from arguments
/// x_1..x_smax via B_{d+1} = sum_q C(d,q) B_{d-q} x_{q+1}.
template <class Real>
std::vector<Real> bell_polynomial_values(std::span<const Real> x, int smax) {
  std::vector<Real> bell(static_cast<std::size_t>(smax) + 1);
  bell[0] = 1;
  std::vector<Real> binom{Real(1)};  // row d of Pascal's triangle
  for (int d = 0; d < smax; ++d) {
    Real acc = 0;
    for (int q = 0; q <= d; ++q) acc += binom[q] * bell[d - q] * x[q];
    bell[d + 1] = acc;
    binom.push_back(Real(1));
    for (int q = d; q >= 1; --q) binom[q] += binom[q - 1];
  }
  return bell;
}

}  // namespace detail

/// Generalized harmonic number H_{j,s}; 0 for j = 0.
inline double generalized_harmonic(long j, int s) {
  if (j < 0 || s < 1) throw std::domain_error("generalized_harmonic: requires j >= 0, s >= 1");
  return detail::harmonic_number<double>(j, s);
}

/// Complete exponential Bell polynomial B_s(x_1,...,x_s); B_0 = 1.
inline double bell_complete(std::span<const double> x) {
  const int s = static_cast<int>(x.size());
  return detail::bell_polynomial_values<double>(x, s).back();
}

/// Memoized log |s(n,k)| table.  Rows up to `storage_limit` are cached;
/// larger rows (still below the cap) are recomputed streamingly so the
/// table never holds O(cap^2) doubles.
class StirlingNumberTable {
 public:
  static double log_value(long n, long k) {
    if (n < 1 || k < 1 || k > n)
      throw std::domain_error("stirling: requires 1 <= k <= n");
    return log_row(n)[static_cast<std::size_t>(k - 1)];
  }

  /// Full row (k = 1..n) of log |s(n,k)|.
  static std::vector<double> log_row(long n) {
    if (n < 1) throw std::domain_error("stirling: requires n >= 1");
    if (n > cap())
      throw std::length_error("stirling: n exceeds configured cap (" +
                              std::to_string(cap()) + ")");
    State& st = state();
    std::lock_guard lock(st.mutex);
    const long stored_target = std::min<long>(n, kStorageLimit);
    while (static_cast<long>(st.rows.size()) < stored_target)
      st.rows.push_back(next_row(st.rows.back(), static_cast<long>(st.rows.size())));
    if (n <= kStorageLimit) return st.rows[static_cast<std::size_t>(n - 1)];
    std::vector<double> row = st.rows.back();
    for (long nn = kStorageLimit; nn < n; ++nn) row = next_row(row, nn);
    return row;
  }

  static long cap() { return state().cap; }
  static void set_cap(long cap) {
    if (cap < 1) throw std::domain_error("stirling: cap must be positive");
    state().cap = cap;
  }

 private:
  static constexpr long kStorageLimit = 2048;

  struct State {
    std::mutex mutex;
    long cap = 2048;
    std::vector<std::vector<double>> rows{{0.0}};  // rows[i] is row for n = i+1
  };
  static State& state() {
    static State st;
    return st;
  }

  // |s(n+1,k)| = n |s(n,k)| + |s(n,k-1)| in log space
  static std::vector<double> next_row(const std::vector<double>& row, long n) {
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    const double logn = std::log(static_cast<double>(n));
    out[0] = logn + row[0];
    for (long k = 2; k <= n; ++k)
      out[static_cast<std::size_t>(k - 1)] =
          log_sum_exp(logn + row[static_cast<std::size_t>(k - 1)],
                      row[static_cast<std::size_t>(k - 2)]);
    out[static_cast<std::size_t>(n)] = row[static_cast<std::size_t>(n - 1)];
    return out;
  }
};

/// log |s(n,k)| for 1 <= k <= n (n below the configured cap).
inline double log_signless_stirling_first(long n, long k) {
  return StirlingNumberTable::log_value(n, k);
}

}  // namespace stirgamma
