#pragma once

// The Stirling-gamma distribution Sg(a,b,m): density proportional to
// alpha^{a-1} / {(alpha)_m}^b on (0, inf), with 1 < a/b < m.  Provides the
// log density, the normalizing constant by adaptive quadrature, moments,
// the large-m gamma approximation and two exact rejection samplers (ratio
// of uniforms for a - b >= 1, generalized-beta-prime proposal otherwise).

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "stirgamma/quadrature.hpp"
#include "stirgamma/special_functions.hpp"

namespace stirgamma {

using Rng = std::mt19937_64;

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SamplerBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StirlingGammaParams {
  double a;
  double b;
  long m;

  StirlingGammaParams(double a_, double b_, long m_) : a(a_), b(b_), m(m_) {
    if (!(a > 0.0)) throw ParameterError("Sg(a,b,m): requires a > 0");
    if (!(b > 0.0)) throw ParameterError("Sg(a,b,m): requires b > 0");
    if (m < 2) throw ParameterError("Sg(a,b,m): requires m >= 2");
    if (!(a / b > 1.0))
      throw ParameterError("Sg(a,b,m): requires a/b > 1 (got a/b = " +
                           std::to_string(a / b) + ")");
    if (!(a / b < static_cast<double>(m)))
      throw ParameterError("Sg(a,b,m): requires a/b < m (got a/b = " +
                           std::to_string(a / b) + ", m = " + std::to_string(m) + ")");
  }
};

inline StirlingGammaParams validate(double a, double b, long m) {
  return StirlingGammaParams(a, b, m);
}

struct GammaParams {
  double shape;
  double rate;
};

/// log S(alpha) = (a-1) log alpha - b log (alpha)_m, the unnormalized log density.
inline double log_unnormalized_density(const StirlingGammaParams& p, double alpha) {
  if (!(alpha > 0.0))
    throw std::domain_error("log_unnormalized_density: requires alpha > 0");
  return (p.a - 1.0) * std::log(alpha) - p.b * log_ascending_factorial(alpha, p.m);
}

/// log of the normalizing constant S_{a,b,m} by adaptive quadrature.
inline double log_norm_const_quadrature(const StirlingGammaParams& p,
                                        QuadratureOptions opts = {}) {
  return log_integrate_positive_axis(
      [&](double alpha) { return log_unnormalized_density(p, alpha); }, opts);
}

inline double log_pdf(const StirlingGammaParams& p, double alpha,
                      QuadratureOptions opts = {}) {
  return log_unnormalized_density(p, alpha) - log_norm_const_quadrature(p, opts);
}

/// Gamma(a-b, b log m), the distribution Sg(a,b,m) approaches for large m.
inline GammaParams gamma_limit_params(const StirlingGammaParams& p) {
  if (!(p.a > p.b)) throw ParameterError("gamma_limit_params: requires a > b");
  return GammaParams{p.a - p.b, p.b * std::log(static_cast<double>(p.m))};
}

struct MomentValue {
  double value;       // +inf when the moment diverges
  bool finite;
  bool at_boundary;   // s == m b - a exactly, declared divergent
};

/// E(alpha^s) = S_{a+s,b,m} / S_{a,b,m} for 0 < s < m b - a, +inf beyond.
inline MomentValue moment(const StirlingGammaParams& p, double s,
                          QuadratureOptions opts = {}) {
  if (!(s > 0.0)) throw std::domain_error("moment: requires s > 0");
  const double slack = static_cast<double>(p.m) * p.b - p.a;
  if (s > slack) return {std::numeric_limits<double>::infinity(), false, false};
  if (s == slack) return {std::numeric_limits<double>::infinity(), false, true};
  const double log_num = log_integrate_positive_axis(
      [&](double alpha) {
        return (p.a + s - 1.0) * std::log(alpha) -
               p.b * log_ascending_factorial(alpha, p.m);
      },
      opts);
  return {std::exp(log_num - log_norm_const_quadrature(p, opts)), true, false};
}

/// r x/(1-x) with x ~ Beta(a0, b0): the generalized beta prime BeP(a0,b0,r).
inline double beta_prime_sample(double a0, double b0, double r, Rng& rng) {
  if (!(a0 > 0.0 && b0 > 0.0 && r > 0.0))
    throw std::domain_error("beta_prime_sample: requires a0, b0, r > 0");
  std::gamma_distribution<double> g1(a0, 1.0), g2(b0, 1.0);
  double y1 = g1(rng), y2 = g2(rng);
  while (y1 == 0.0 || y2 == 0.0) {  // x in the open interval
    y1 = g1(rng);
    y2 = g2(rng);
  }
  return r * y1 / y2;
}

struct RatioOfUniformsBounds {
  double log_m_u;       // log sup S(alpha)
  double log_m_v;       // log sup alpha^2 S(alpha)
  double argmax_u;      // 0 when the supremum sits at alpha -> 0 (a - b = 1)
  double argmax_v;
};

namespace detail {

// argmax of c log(alpha) - b log (alpha+1)_{m-1} by bisection on the sign
// change of the derivative; the map alpha * d/dalpha is strictly decreasing.
inline double maximize_power_kernel(double c, double b, long m) {
  auto deriv = [&](double alpha) {
    return c / alpha -
           b * (digamma(alpha + static_cast<double>(m)) - digamma(alpha + 1.0));
  };
  double lo = 1e-12, hi = 1e8;
  if (!(deriv(lo) > 0.0) || !(deriv(hi) < 0.0))
    throw std::runtime_error("ratio_of_uniforms_bounds: no bracket on (1e-12, 1e8)");
  while ((hi - lo) > 1e-10 * hi) {
    const double mid = std::sqrt(lo * hi);
    (deriv(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

inline double log_kernel(const StirlingGammaParams& p, double alpha) {
  // S(alpha) written as alpha^{a-b-1} / prod_{i<m} (alpha+i)^b
  return (p.a - p.b - 1.0) * std::log(alpha) -
         p.b * (log_gamma(alpha + static_cast<double>(p.m)) - log_gamma(alpha + 1.0));
}

}  // namespace detail

/// M_u = sup S and M_v = sup alpha^2 S for the ratio-of-uniforms sampler,
/// both on the log scale (the suprema underflow double for large m).
inline RatioOfUniformsBounds ratio_of_uniforms_bounds(const StirlingGammaParams& p) {
  if (!(p.a - p.b >= 1.0))
    throw ParameterError("ratio_of_uniforms_bounds: requires a - b >= 1");
  RatioOfUniformsBounds out{};
  if (p.a - p.b == 1.0) {
    // S is decreasing; its supremum is the alpha -> 0 limit 1/Gamma(m)^b
    out.log_m_u = -p.b * log_gamma(static_cast<double>(p.m));
    out.argmax_u = 0.0;
  } else {
    out.argmax_u = detail::maximize_power_kernel(p.a - p.b - 1.0, p.b, p.m);
    out.log_m_u = detail::log_kernel(p, out.argmax_u);
  }
  out.argmax_v = detail::maximize_power_kernel(p.a - p.b + 1.0, p.b, p.m);
  out.log_m_v = detail::log_kernel(p, out.argmax_v) + 2.0 * std::log(out.argmax_v);
  return out;
}

struct SampleBatch {
  std::vector<double> draws;
  double acceptance_rate;  // accepted / proposals
};

namespace detail {

/// Rejection-sampler state shared by the cached distribution object and the
/// one-shot free function; building it costs a bisection, not a quadrature.
class SamplerCore {
 public:
  explicit SamplerCore(const StirlingGammaParams& p) : params_(p) {
    if (p.a - p.b >= 1.0) bounds_ = ratio_of_uniforms_bounds(p);
    bep_r_ = std::exp(log_gamma(static_cast<double>(p.m)) /
                      static_cast<double>(p.m - 1));
  }

  double draw(Rng& rng, std::size_t& rejections) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (bounds_) {
      // ratio of uniforms: u in [0, M_u^{1/2}], v in [0, M_v^{1/2}],
      // accept alpha = v/u when 2 log u <= log S(alpha)
      const double log_scale = 0.5 * (bounds_->log_m_v - bounds_->log_m_u);
      for (rejections = 0; rejections < kRejectionBudget; ++rejections) {
        const double u1 = unif(rng), u2 = unif(rng);
        if (u1 == 0.0 || u2 == 0.0) continue;
        const double alpha = std::exp(log_scale) * u2 / u1;
        const double two_log_u = bounds_->log_m_u + 2.0 * std::log(u1);
        if (two_log_u <= log_kernel(params_, alpha)) return alpha;
      }
    } else {
      // generalized beta prime proposal BeP(a-b, mb-a, r), r = Gamma(m)^{1/(m-1)}
      const double a0 = params_.a - params_.b;
      const double b0 = static_cast<double>(params_.m) * params_.b - params_.a;
      const double bm1 = static_cast<double>(params_.m - 1);
      for (rejections = 0; rejections < kRejectionBudget; ++rejections) {
        const double y = beta_prime_sample(a0, b0, bep_r_, rng);
        const double log_accept =
            params_.b * (bm1 * std::log(y + bep_r_) -
                         (log_gamma(y + static_cast<double>(params_.m)) -
                          log_gamma(y + 1.0)));
        if (std::log(unif(rng)) <= log_accept) return y;
      }
    }
    throw SamplerBudgetError("stirling-gamma sampler: 1e6 consecutive rejections");
  }

 private:
  static constexpr std::size_t kRejectionBudget = 1000000;
  StirlingGammaParams params_;
  std::optional<RatioOfUniformsBounds> bounds_;
  double bep_r_;
};

}  // namespace detail

/// Stirling-gamma distribution with cached normalizing constant and sampler
/// bounds.  Immutable after construction; safe to share across threads as
/// long as each worker owns its generator.
class StirlingGamma {
 public:
  explicit StirlingGamma(StirlingGammaParams params, QuadratureOptions opts = {})
      : params_(params),
        opts_(opts),
        log_norm_const_(log_norm_const_quadrature(params, opts)),
        core_(params) {}

  const StirlingGammaParams& params() const { return params_; }
  double log_norm_const() const { return log_norm_const_; }

  double log_pdf(double alpha) const {
    return log_unnormalized_density(params_, alpha) - log_norm_const_;
  }

  /// log P(alpha > x), by quadrature over the upper tail.
  double log_survival(double x) const {
    return log_integrate_range(
               [&](double alpha) { return log_unnormalized_density(params_, alpha); },
               x, std::numeric_limits<double>::infinity(), opts_) -
           log_norm_const_;
  }

  double cdf(double x) const {
    return std::exp(log_integrate_range(
                        [&](double alpha) {
                          return log_unnormalized_density(params_, alpha);
                        },
                        0.0, x, opts_) -
                    log_norm_const_);
  }

  MomentValue moment(double s) const { return stirgamma::moment(params_, s, opts_); }

  double sample(Rng& rng) const {
    std::size_t rejections = 0;
    return core_.draw(rng, rejections);
  }

  SampleBatch sample_many(std::size_t count, Rng& rng) const {
    SampleBatch batch;
    batch.draws.reserve(count);
    std::size_t proposals = 0;
    for (std::size_t i = 0; i < count; ++i) {
      std::size_t rejections = 0;
      batch.draws.push_back(core_.draw(rng, rejections));
      proposals += rejections + 1;
    }
    batch.acceptance_rate = static_cast<double>(count) / static_cast<double>(proposals);
    return batch;
  }

 private:
  StirlingGammaParams params_;
  QuadratureOptions opts_;
  double log_norm_const_;
  detail::SamplerCore core_;
};

/// One exact draw from Sg(a,b,m).  Builds the sampler bounds per call
/// (a bisection), which is what Gibbs alpha-steps with changing posterior
/// parameters want.
inline double sample(const StirlingGammaParams& p, Rng& rng) {
  std::size_t rejections = 0;
  return detail::SamplerCore(p).draw(rng, rejections);
}

namespace detail {

/// Piecewise inverse-CDF sampler built from quadrature cell masses; the
/// independent oracle the rejection samplers are tested against.  Cell
/// masses are exact to quadrature accuracy and each cell carries at most
/// `1/resolution` of the total mass, which bounds the CDF interpolation
/// error by the same amount.
class CdfGrid {
 public:
  explicit CdfGrid(const StirlingGammaParams& p, int resolution = 4096) {
    auto log_g = [&](double t) {
      return log_unnormalized_density(p, t / (1.0 - t)) - 2.0 * std::log1p(-t);
    };
    double shift = kNegInf;
    for (int i = 0; i < 257; ++i) {
      const double t = (i + 0.5) / 257.0;
      shift = std::max(shift, log_g(t));
    }
    struct Cell {
      double lo, hi, mass;
    };
    std::vector<Cell> cells;
    const int n0 = 64;
    std::size_t evals = 0;
    double running_max = shift;
    auto mass_of = [&](double lo, double hi) {
      return gk15_cell(log_g, lo, hi, shift, running_max, evals).integral;
    };
    for (int i = 0; i < n0; ++i)
      cells.push_back({double(i) / n0, double(i + 1) / n0, 0.0});
    for (auto& c : cells) c.mass = mass_of(c.lo, c.hi);
    bool split = true;
    while (split) {
      split = false;
      double total = 0.0;
      for (const auto& c : cells) total += c.mass;
      std::vector<Cell> next;
      next.reserve(cells.size() * 2);
      for (const auto& c : cells) {
        const double mid = 0.5 * (c.lo + c.hi);
        if (c.mass > total / resolution && mid > c.lo && mid < c.hi) {
          next.push_back({c.lo, mid, mass_of(c.lo, mid)});
          next.push_back({mid, c.hi, mass_of(mid, c.hi)});
          split = true;
        } else {
          next.push_back(c);
        }
      }
      cells = std::move(next);
    }
    edges_.reserve(cells.size() + 1);
    cum_.reserve(cells.size() + 1);
    edges_.push_back(0.0);
    cum_.push_back(0.0);
    double acc = 0.0;
    for (const auto& c : cells) {
      acc += c.mass;
      edges_.push_back(c.hi);
      cum_.push_back(acc);
    }
    for (auto& v : cum_) v /= acc;
  }

  double sample(Rng& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    const std::size_t idx =
        std::min(static_cast<std::size_t>(it - cum_.begin()), cum_.size() - 1);
    const double clo = cum_[idx - 1], chi = cum_[idx];
    const double frac = (chi > clo) ? (u - clo) / (chi - clo) : 0.5;
    const double t = edges_[idx - 1] + frac * (edges_[idx] - edges_[idx - 1]);
    return t / (1.0 - t);
  }

 private:
  std::vector<double> edges_;  // cell boundaries in t-space
  std::vector<double> cum_;    // normalized cumulative mass at the boundaries
};

}  // namespace detail

}  // namespace stirgamma
