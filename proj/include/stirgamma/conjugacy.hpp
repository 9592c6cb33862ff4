#pragma once

// Conjugate updates for the Dirichlet-process precision under a
// Stirling-gamma prior.  Conjugacy requires the prior's reference sample
// size to equal the data size (m = n); anything else is a hard error, since
// the update formulas simply do not hold there.

#include <stdexcept>
#include <vector>

#include "stirgamma/special_functions.hpp"
#include "stirgamma/stirling_gamma.hpp"

namespace stirgamma {

class ConjugacyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cluster counts of N observed partitions of the same n units.
struct PartitionObservations {
  long n;
  std::vector<long> cluster_counts;

  PartitionObservations(long n_, std::vector<long> counts)
      : n(n_), cluster_counts(std::move(counts)) {
    if (cluster_counts.empty())
      throw std::invalid_argument("PartitionObservations: requires N >= 1");
    for (long k : cluster_counts)
      if (k < 1 || k > n)
        throw std::invalid_argument("PartitionObservations: each k must lie in 1..n");
  }

  long count() const { return static_cast<long>(cluster_counts.size()); }
  double mean_clusters() const {
    double acc = 0.0;
    for (long k : cluster_counts) acc += static_cast<double>(k);
    return acc / static_cast<double>(cluster_counts.size());
  }
};

namespace detail {

inline void require_conjugate(const StirlingGammaParams& prior, long n,
                              const char* where) {
  if (prior.m != n)
    throw ConjugacyError(std::string(where) +
                         ": conjugate update requires prior m == n (m = " +
                         std::to_string(prior.m) + ", n = " + std::to_string(n) + ")");
}

}  // namespace detail

/// alpha | Pi_n ~ Sg(a + k, b + 1, n) after observing one partition with k
/// clusters.
inline StirlingGammaParams posterior_single(const StirlingGammaParams& prior,
                                            long k, long n) {
  detail::require_conjugate(prior, n, "posterior_single");
  if (k < 1 || k > n)
    throw std::domain_error("posterior_single: requires 1 <= k <= n");
  return StirlingGammaParams(prior.a + static_cast<double>(k), prior.b + 1.0, n);
}

/// alpha | Pi_{n,1..N} ~ Sg(a + sum k_s, b + N, n) for N repeated partitions.
inline StirlingGammaParams posterior_pooled(const StirlingGammaParams& prior,
                                            const PartitionObservations& obs) {
  detail::require_conjugate(prior, obs.n, "posterior_pooled");
  double ksum = 0.0;
  for (long k : obs.cluster_counts) ksum += static_cast<double>(k);
  return StirlingGammaParams(prior.a + ksum,
                             prior.b + static_cast<double>(obs.count()), obs.n);
}

/// Posterior mean of E(K_n | alpha) = alpha (psi(alpha+n) - psi(alpha)):
/// the prior location a/b and the observed average shrink toward each other
/// with weights b/(b+N) and N/(b+N).
inline double posterior_mean_expected_clusters(const StirlingGammaParams& prior,
                                               const PartitionObservations& obs) {
  detail::require_conjugate(prior, obs.n, "posterior_mean_expected_clusters");
  const double nn = static_cast<double>(obs.count());
  return (prior.b / (prior.b + nn)) * (prior.a / prior.b) +
         (nn / (prior.b + nn)) * obs.mean_clusters();
}

/// Sg(e*b, b, n), the prior with E(K_n) = e at the reference size n.
inline StirlingGammaParams prior_elicit(double expected_clusters, double precision_b,
                                        long n) {
  if (!(expected_clusters > 1.0 && expected_clusters < static_cast<double>(n)))
    throw ParameterError("prior_elicit: expected cluster count must lie in (1, n)");
  if (!(precision_b > 0.0)) throw ParameterError("prior_elicit: requires b > 0");
  return StirlingGammaParams(expected_clusters * precision_b, precision_b, n);
}

}  // namespace stirgamma
