#pragma once

// Exchangeable random partitions of {1,..,n}: the Dirichlet-process EPPF,
// the Stirling-gamma process EPPF and its V coefficients, exact cluster
// count pmfs, urn-scheme simulation, and the negative-binomial / Poisson
// limit laws of the cluster count.

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stirgamma/quadrature.hpp"
#include "stirgamma/special_functions.hpp"
#include "stirgamma/stirling_gamma.hpp"

namespace stirgamma {

/// Partition of {1,..,n} in order-of-appearance canonical form: labels are
/// 1..k and the first occurrence of label j precedes that of label j+1, so
/// partition equality is array equality.
struct Partition {
  std::vector<int> labels;
  std::vector<int> sizes;

  int n() const { return static_cast<int>(labels.size()); }
  int k() const { return static_cast<int>(sizes.size()); }

  /// Canonicalize an arbitrary labelling.
  static Partition from_labels(const std::vector<int>& raw) {
    Partition p;
    p.labels.reserve(raw.size());
    std::vector<int> remap;   // original label -> canonical label (1-based)
    std::vector<int> seen;
    for (int lab : raw) {
      int idx = -1;
      for (std::size_t j = 0; j < seen.size(); ++j)
        if (seen[j] == lab) {
          idx = static_cast<int>(j);
          break;
        }
      if (idx < 0) {
        seen.push_back(lab);
        p.sizes.push_back(0);
        idx = static_cast<int>(seen.size()) - 1;
      }
      p.labels.push_back(idx + 1);
      ++p.sizes[idx];
    }
    return p;
  }

  bool operator==(const Partition& other) const { return labels == other.labels; }

  /// Single line of comma-separated labels.
  std::string serialize() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i) out << ',';
      out << labels[i];
    }
    return out.str();
  }

  static Partition parse(const std::string& line) {
    std::vector<int> raw;
    std::istringstream in(line);
    std::string tok;
    while (std::getline(in, tok, ',')) raw.push_back(std::stoi(tok));
    if (raw.empty()) throw std::invalid_argument("Partition::parse: empty line");
    return from_labels(raw);
  }
};

/// Exact pmf of the number of clusters K_n, entries for k = 1..n.
struct ClusterCountPmf {
  long n = 0;
  std::vector<double> probabilities;

  double mean() const {
    double acc = 0.0;
    for (std::size_t k = 0; k < probabilities.size(); ++k)
      acc += (k + 1.0) * probabilities[k];
    return acc;
  }
  double variance() const {
    const double mu = mean();
    double acc = 0.0;
    for (std::size_t k = 0; k < probabilities.size(); ++k)
      acc += (k + 1.0 - mu) * (k + 1.0 - mu) * probabilities[k];
    return acc;
  }
};

/// Total variation distance between two pmfs over k = 1,2,...
inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  const std::size_t len = std::max(p.size(), q.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double pi = i < p.size() ? p[i] : 0.0;
    const double qi = i < q.size() ? q[i] : 0.0;
    acc += std::abs(pi - qi);
  }
  return 0.5 * acc;
}

/// log pr(Pi_n | alpha) under the Dirichlet process:
/// k log alpha - log (alpha)_n + sum_j log (n_j - 1)!.
inline double dp_log_eppf(double alpha, const Partition& part) {
  if (!(alpha > 0.0)) throw std::domain_error("dp_log_eppf: requires alpha > 0");
  double acc = part.k() * std::log(alpha) -
               log_ascending_factorial(alpha, part.n());
  for (int sz : part.sizes) acc += log_gamma(static_cast<double>(sz));
  return acc;
}

/// log V_{a,b,m}(n,k) = log of int alpha^{a+k-1} / ((alpha)_m^b (alpha)_n).
inline double v_coefficient(const StirlingGammaParams& p, long n, long k,
                            QuadratureOptions opts = {}) {
  if (n < 1 || k < 1 || k > n)
    throw std::domain_error("v_coefficient: requires 1 <= k <= n");
  return log_integrate_positive_axis(
      [&](double alpha) {
        return (p.a + static_cast<double>(k) - 1.0) * std::log(alpha) -
               p.b * log_ascending_factorial(alpha, p.m) -
               log_ascending_factorial(alpha, n);
      },
      opts);
}

/// log pr(Pi_n) under the Stirling-gamma process (Gibbs coefficients
/// V_{n,k} = V(n,k)/V(1,1)).
inline double sgp_log_eppf(const StirlingGammaParams& p, const Partition& part,
                           QuadratureOptions opts = {}) {
  double acc = v_coefficient(p, part.n(), part.k(), opts) -
               v_coefficient(p, 1, 1, opts);
  for (int sz : part.sizes) acc += log_gamma(static_cast<double>(sz));
  return acc;
}

namespace detail {

inline ClusterCountPmf normalize_log_pmf(long n, std::vector<double> log_weights) {
  LogValue total;
  for (double lw : log_weights) total = total + LogValue::from_log(lw);
  ClusterCountPmf pmf;
  pmf.n = n;
  pmf.probabilities.resize(log_weights.size());
  double drift = 0.0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    pmf.probabilities[i] = std::exp(log_weights[i] - total.log_magnitude);
    drift += pmf.probabilities[i];
  }
  if (std::abs(drift - 1.0) > 1e-10)
    throw std::runtime_error("cluster count pmf: normalization drift above 1e-10");
  return pmf;
}

}  // namespace detail

/// pr(K_n = k) = alpha^k |s(n,k)| / (alpha)_n for the Dirichlet process.
inline ClusterCountPmf kn_pmf_dp(double alpha, long n) {
  if (!(alpha > 0.0)) throw std::domain_error("kn_pmf_dp: requires alpha > 0");
  if (n < 1) throw std::domain_error("kn_pmf_dp: requires n >= 1");
  const std::vector<double> row = StirlingNumberTable::log_row(n);
  const double log_asc = log_ascending_factorial(alpha, n);
  std::vector<double> lw(static_cast<std::size_t>(n));
  for (long k = 1; k <= n; ++k)
    lw[static_cast<std::size_t>(k - 1)] =
        k * std::log(alpha) - log_asc + row[static_cast<std::size_t>(k - 1)];
  return detail::normalize_log_pmf(n, std::move(lw));
}

/// pr(K_n = k) = V(n,k)/V(1,1) |s(n,k)| for the Stirling-gamma process.
inline ClusterCountPmf kn_pmf_sgp(const StirlingGammaParams& p, long n,
                                  QuadratureOptions opts = {}) {
  if (n < 1) throw std::domain_error("kn_pmf_sgp: requires n >= 1");
  const std::vector<double> row = StirlingNumberTable::log_row(n);
  const double log_v11 = v_coefficient(p, 1, 1, opts);
  std::vector<double> lw(static_cast<std::size_t>(n));
  for (long k = 1; k <= n; ++k)
    lw[static_cast<std::size_t>(k - 1)] =
        v_coefficient(p, n, k, opts) - log_v11 + row[static_cast<std::size_t>(k - 1)];
  return detail::normalize_log_pmf(n, std::move(lw));
}

/// D_{a,b,m} = E[alpha^2 (psi'(alpha) - psi'(alpha+m))], the correction in
/// the variance of K_m.
inline double d_constant(const StirlingGammaParams& p, QuadratureOptions opts = {}) {
  const double log_norm = log_norm_const_quadrature(p, opts);
  const double log_num = log_integrate_positive_axis(
      [&](double alpha) {
        const double sum_sq =
            trigamma(alpha) - trigamma(alpha + static_cast<double>(p.m));
        return log_unnormalized_density(p, alpha) + 2.0 * std::log(alpha) +
               std::log(sum_sq);
      },
      opts);
  return std::exp(log_num - log_norm);
}

/// Sequential Chinese-restaurant urn: unit i+1 joins block j with
/// probability n_j/(alpha+i) or opens a new block with alpha/(alpha+i).
inline Partition sample_partition_crp(double alpha, long n, Rng& rng) {
  if (!(alpha > 0.0)) throw std::domain_error("sample_partition_crp: requires alpha > 0");
  if (n < 1) throw std::domain_error("sample_partition_crp: requires n >= 1");
  Partition part;
  part.labels.reserve(static_cast<std::size_t>(n));
  part.labels.push_back(1);
  part.sizes.push_back(1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (long i = 1; i < n; ++i) {
    double r = unif(rng) * (alpha + static_cast<double>(i));
    int chosen = static_cast<int>(part.sizes.size());  // new block by default
    for (std::size_t j = 0; j < part.sizes.size(); ++j) {
      r -= part.sizes[j];
      if (r <= 0.0) {
        chosen = static_cast<int>(j);
        break;
      }
    }
    if (chosen == static_cast<int>(part.sizes.size())) part.sizes.push_back(0);
    ++part.sizes[static_cast<std::size_t>(chosen)];
    part.labels.push_back(chosen + 1);
  }
  return part;
}

/// Number of clusters of a CRP draw without building the partition.
inline long sample_crp_cluster_count(double alpha, long n, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  long k = 0;
  for (long i = 0; i < n; ++i)
    if (unif(rng) * (alpha + static_cast<double>(i)) < alpha) ++k;
  return k;
}

/// Stirling-gamma process partition by the mixture route: draw
/// alpha ~ Sg(a,b,m), then run the urn given alpha.
inline Partition sample_partition_sgp(const StirlingGamma& dist, long n, Rng& rng) {
  return sample_partition_crp(dist.sample(rng), n, rng);
}

inline Partition sample_partition_sgp(const StirlingGammaParams& p, long n, Rng& rng) {
  return sample_partition_crp(sample(p, rng), n, rng);
}

/// pmf of 1 + NegBin(a-b, b/(b+1)) at k >= 1, the m -> infinity law of K_m
/// under Sg(a,b,m).
inline double negbin_limit_pmf(double a, double b, long k) {
  if (!(a > b && b > 0.0)) throw std::domain_error("negbin_limit_pmf: requires a > b > 0");
  if (k < 1) throw std::domain_error("negbin_limit_pmf: requires k >= 1");
  const double r = a - b;
  const double log_p = log_gamma(r + static_cast<double>(k - 1)) -
                       log_gamma(static_cast<double>(k)) - log_gamma(r) -
                       (k - 1) * std::log(b + 1.0) + r * (std::log(b) - std::log(b + 1.0));
  return std::exp(log_p);
}

/// pmf of 1 + Poisson(lambda) at k >= 1, the fixed-precision analogue.
inline double poisson_limit_pmf(double lambda, long k) {
  if (!(lambda > 0.0)) throw std::domain_error("poisson_limit_pmf: requires lambda > 0");
  if (k < 1) throw std::domain_error("poisson_limit_pmf: requires k >= 1");
  return std::exp(-lambda + (k - 1) * std::log(lambda) -
                  log_gamma(static_cast<double>(k)));
}

}  // namespace stirgamma
