#pragma once

// Globally adaptive Gauss-Kronrod 15(7) quadrature for log-scale integrands
// on (0, inf).  The axis is mapped to (0,1) through alpha = t/(1-t) and the
// integrand is exponentiated against a running max shift, so densities whose
// magnitudes underflow or overflow double precision integrate fine.

#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "stirgamma/special_functions.hpp"

namespace stirgamma {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  std::size_t max_evaluations = 100000;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Gauss-Kronrod 15 point rule; Gauss-7 nodes are the odd-indexed entries.
inline constexpr double kGkNode[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kGkWeight[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGaussWeight[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct QuadCell {
  double lo, hi;
  double integral;  // shifted scale
  double error;
};

class ShiftOverflow {};  // integrand exceeded the current shift budget

/// One GK15 pass over [lo, hi] of exp(log_g(t) - shift).
template <class G>
QuadCell gk15_cell(G&& log_g, double lo, double hi, double shift,
                   double& running_max, std::size_t& evals) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 8; ++i) {
    const int reps = (i == 7) ? 1 : 2;
    for (int r = 0; r < reps; ++r) {
      const double t = (r == 0) ? mid - half * kGkNode[i] : mid + half * kGkNode[i];
      const double lg = log_g(t);
      ++evals;
      if (lg > running_max) running_max = lg;
      if (lg - shift > 600.0) throw ShiftOverflow{};
      const double v = std::exp(lg - shift);
      resk += kGkWeight[i] * v;
      if (i % 2 == 1) resg += kGaussWeight[i / 2] * v;
    }
  }
  resk *= half;
  resg *= half;
  return QuadCell{lo, hi, resk, std::abs(resk - resg)};
}

/// Adaptive integration of exp(log_g(t)) over (t_lo, t_hi); returns the log
/// of the integral.  Endpoints are never evaluated.
template <class G>
double log_integrate_unit(G&& log_g, double t_lo, double t_hi,
                          const QuadratureOptions& opts) {
  // locate the scale of the integrand
  double shift = kNegInf;
  {
    const int n_scan = 129;
    for (int i = 0; i < n_scan; ++i) {
      const double t = t_lo + (t_hi - t_lo) * (i + 0.5) / n_scan;
      shift = std::max(shift, log_g(t));
    }
  }
  if (shift == kNegInf) return kNegInf;

  for (int attempt = 0; attempt < 5; ++attempt) {
    double running_max = shift;
    std::size_t evals = 0;
    try {
      auto cmp = [](const QuadCell& a, const QuadCell& b) { return a.error < b.error; };
      std::priority_queue<QuadCell, std::vector<QuadCell>, decltype(cmp)> heap(cmp);
      double total = 0.0, err = 0.0;
      const int n_init = 32;
      for (int i = 0; i < n_init; ++i) {
        const double lo = t_lo + (t_hi - t_lo) * i / n_init;
        const double hi = t_lo + (t_hi - t_lo) * (i + 1) / n_init;
        QuadCell c = gk15_cell(log_g, lo, hi, shift, running_max, evals);
        total += c.integral;
        err += c.error;
        heap.push(c);
      }
      std::vector<QuadCell> settled;  // cells too narrow to split further
      while (err > opts.rel_tol * std::abs(total) && !heap.empty()) {
        if (evals > opts.max_evaluations)
          throw QuadratureError("quadrature: evaluation budget exhausted before tolerance");
        QuadCell worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (mid <= worst.lo || mid >= worst.hi) {
          settled.push_back(worst);
          err -= worst.error;  // cannot improve below double spacing
          continue;
        }
        total -= worst.integral;
        err -= worst.error;
        QuadCell left = gk15_cell(log_g, worst.lo, mid, shift, running_max, evals);
        QuadCell right = gk15_cell(log_g, mid, worst.hi, shift, running_max, evals);
        total += left.integral + right.integral;
        err += left.error + right.error;
        heap.push(left);
        heap.push(right);
      }
      // compensated recollection of the cell contributions
      double sum = 0.0, comp = 0.0;
      auto add = [&](double v) {
        const double t = sum + v;
        comp += (std::abs(sum) >= std::abs(v)) ? (sum - t) + v : (v - t) + sum;
        sum = t;
      };
      while (!heap.empty()) {
        add(heap.top().integral);
        heap.pop();
      }
      for (const QuadCell& c : settled) add(c.integral);
      const double value = sum + comp;
      if (!(value > 0.0)) return kNegInf;
      return shift + std::log(value);
    } catch (const ShiftOverflow&) {
      shift = running_max;  // re-center and retry
    }
  }
  throw QuadratureError("quadrature: integrand scale kept escaping the shift");
}

}  // namespace detail

/// log of integral_0^inf exp(log_f(alpha)) d alpha.
template <class F>
double log_integrate_positive_axis(F&& log_f, QuadratureOptions opts = {}) {
  auto g = [&](double t) {
    return log_f(t / (1.0 - t)) - 2.0 * std::log1p(-t);
  };
  return detail::log_integrate_unit(g, 0.0, 1.0, opts);
}

/// log of integral_lo^hi exp(log_f(alpha)) d alpha with 0 <= lo < hi <= inf.
template <class F>
double log_integrate_range(F&& log_f, double lo, double hi,
                           QuadratureOptions opts = {}) {
  if (!(lo >= 0.0) || !(hi > lo))
    throw std::domain_error("log_integrate_range: requires 0 <= lo < hi");
  const double t_lo = lo / (1.0 + lo);
  const double t_hi = std::isinf(hi) ? 1.0 : hi / (1.0 + hi);
  auto g = [&](double t) {
    return log_f(t / (1.0 - t)) - 2.0 * std::log1p(-t);
  };
  return detail::log_integrate_unit(g, t_lo, t_hi, opts);
}

}  // namespace stirgamma
