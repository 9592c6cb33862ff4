#pragma once

// Marginal (collapsed) Gibbs sampler for a Dirichlet-process mixture of
// Gaussians with a conjugate normal-inverse-Wishart baseline and fixed or
// Stirling-gamma-distributed precision.  Cluster parameters are integrated
// out; each sweep reseats every observation against the Student-t posterior
// predictives of the current clusters.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "stirgamma/conjugacy.hpp"
#include "stirgamma/partition.hpp"
#include "stirgamma/stirling_gamma.hpp"

namespace stirgamma {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NiwParams {
  Eigen::VectorXd mean0;
  double kappa0;
  double nu0;
  Eigen::MatrixXd scale0;

  NiwParams(Eigen::VectorXd mean, double kappa, double nu, Eigen::MatrixXd scale)
      : mean0(std::move(mean)), kappa0(kappa), nu0(nu), scale0(std::move(scale)) {
    const auto d = mean0.size();
    if (kappa0 <= 0.0) throw ParameterError("NIW: requires kappa0 > 0");
    if (nu0 <= static_cast<double>(d) - 1.0)
      throw ParameterError("NIW: requires nu0 > dim - 1");
    if (scale0.rows() != d || scale0.cols() != d)
      throw ParameterError("NIW: scale matrix dimension mismatch");
    if (!scale0.isApprox(scale0.transpose(), 1e-12))
      throw ParameterError("NIW: scale matrix must be symmetric");
    if (Eigen::LLT<Eigen::MatrixXd>(scale0).info() != Eigen::Success)
      throw ParameterError("NIW: scale matrix must be positive definite");
  }

  /// Zero mean, kappa0 = 0.01, nu0 = dim + 2, identity scale.
  static NiwParams weakly_informative(int dim) {
    return NiwParams(Eigen::VectorXd::Zero(dim), 0.01, dim + 2.0,
                     Eigen::MatrixXd::Identity(dim, dim));
  }

  int dim() const { return static_cast<int>(mean0.size()); }
};

/// Count, sum and sum of outer products of the points in one cluster.
struct ClusterStats {
  long count = 0;
  Eigen::VectorXd sum;
  Eigen::MatrixXd sum_outer;

  explicit ClusterStats(int dim)
      : sum(Eigen::VectorXd::Zero(dim)), sum_outer(Eigen::MatrixXd::Zero(dim, dim)) {}

  void add(const Eigen::VectorXd& x) {
    ++count;
    sum += x;
    sum_outer += x * x.transpose();
  }
  void remove(const Eigen::VectorXd& x) {
    --count;
    sum -= x;
    sum_outer -= x * x.transpose();
  }
};

/// Student-t posterior predictive of a NIW cluster; scratch buffers are
/// reused so the hot loop does not allocate.
class NiwPredictor {
 public:
  explicit NiwPredictor(NiwParams niw)
      : niw_(std::move(niw)),
        lambda_(niw_.dim(), niw_.dim()),
        mu_(niw_.dim()),
        diff_(niw_.dim()),
        xbar_(niw_.dim()) {}

  const NiwParams& params() const { return niw_; }

  double log_predictive(const ClusterStats& stats, const Eigen::VectorXd& x) const {
    const int d = niw_.dim();
    double kappa_q, nu_q;
    if (stats.count == 0) {
      kappa_q = niw_.kappa0;
      nu_q = niw_.nu0;
      mu_ = niw_.mean0;
      lambda_ = niw_.scale0;
    } else {
      const double q = static_cast<double>(stats.count);
      kappa_q = niw_.kappa0 + q;
      nu_q = niw_.nu0 + q;
      xbar_ = stats.sum / q;
      mu_ = (niw_.kappa0 * niw_.mean0 + stats.sum) / kappa_q;
      diff_ = xbar_ - niw_.mean0;
      lambda_ = niw_.scale0 + stats.sum_outer -
                q * (xbar_ * xbar_.transpose()) +
                (niw_.kappa0 * q / kappa_q) * (diff_ * diff_.transpose());
    }
    const double dof = nu_q - d + 1.0;
    const double scale_factor = (kappa_q + 1.0) / (kappa_q * dof);
    llt_.compute(lambda_);
    if (llt_.info() != Eigen::Success)
      throw NumericalError("NIW predictive: posterior scale lost positive definiteness");
    // multivariate t with dof degrees of freedom, location mu,
    // shape scale_factor * lambda
    double log_det = 0.0;
    for (int i = 0; i < d; ++i) log_det += std::log(llt_.matrixL()(i, i));
    log_det = 2.0 * log_det + d * std::log(scale_factor);
    diff_ = x - mu_;
    const double quad = llt_.solve(diff_).dot(diff_) / scale_factor;
    return log_gamma(0.5 * (dof + d)) - log_gamma(0.5 * dof) -
           0.5 * d * std::log(dof * M_PI) - 0.5 * log_det -
           0.5 * (dof + d) * std::log1p(quad / dof);
  }

 private:
  NiwParams niw_;
  mutable Eigen::MatrixXd lambda_;
  mutable Eigen::VectorXd mu_, diff_, xbar_;
  mutable Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// One-shot predictive evaluation; loops should hold a NiwPredictor instead.
inline double log_posterior_predictive(const ClusterStats& stats,
                                       const Eigen::VectorXd& x, const NiwParams& niw) {
  return NiwPredictor(niw).log_predictive(stats, x);
}

/// Precision model: fixed alpha or Sg(a,b,m) with conjugate resampling.
struct PrecisionPrior {
  std::optional<StirlingGammaParams> sg;  // empty = fixed
  double fixed_alpha = 1.0;

  static PrecisionPrior fixed(double alpha) {
    if (!(alpha > 0.0)) throw ParameterError("fixed precision must be positive");
    PrecisionPrior p;
    p.fixed_alpha = alpha;
    return p;
  }
  static PrecisionPrior stirling_gamma(const StirlingGammaParams& params) {
    PrecisionPrior p;
    p.sg = params;
    return p;
  }
  bool is_fixed() const { return !sg.has_value(); }
  double initial_alpha() const {
    return is_fixed() ? fixed_alpha : sg->a / sg->b;  // prior location
  }
};

struct MixtureChainState {
  std::vector<int> assignments;        // 0-based cluster index per point
  std::vector<ClusterStats> clusters;  // non-empty, order of appearance
  double alpha = 1.0;

  int n_clusters() const { return static_cast<int>(clusters.size()); }

  Partition partition() const {
    std::vector<int> labels(assignments.size());
    for (std::size_t i = 0; i < assignments.size(); ++i)
      labels[i] = assignments[i] + 1;
    return Partition::from_labels(labels);
  }
};

/// All points in one cluster to start; matches a draw with alpha -> 0.
inline MixtureChainState initial_state(const Eigen::MatrixXd& data, double alpha) {
  MixtureChainState st;
  st.alpha = alpha;
  st.assignments.assign(static_cast<std::size_t>(data.rows()), 0);
  st.clusters.emplace_back(static_cast<int>(data.cols()));
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    st.clusters[0].add(data.row(i).transpose());
  return st;
}

/// Draws from the four-component bivariate normal benchmark: equal weights,
/// means (+-1, +-1), covariance diag(0.15, 0.15).
inline Eigen::MatrixXd simulate_four_component_data(long n, Rng& rng) {
  if (n < 4) throw std::domain_error("simulate_four_component_data: requires n >= 4");
  static const double means[4][2] = {{-1, -1}, {1, -1}, {-1, 1}, {1, 1}};
  std::uniform_int_distribution<int> pick(0, 3);
  std::normal_distribution<double> noise(0.0, std::sqrt(0.15));
  Eigen::MatrixXd data(n, 2);
  for (long i = 0; i < n; ++i) {
    const int c = pick(rng);
    data(i, 0) = means[c][0] + noise(rng);
    data(i, 1) = means[c][1] + noise(rng);
  }
  return data;
}

namespace detail {

inline void remove_point(MixtureChainState& st, const Eigen::VectorXd& x, int i) {
  const int c = st.assignments[static_cast<std::size_t>(i)];
  st.clusters[static_cast<std::size_t>(c)].remove(x);
  if (st.clusters[static_cast<std::size_t>(c)].count == 0) {
    st.clusters.erase(st.clusters.begin() + c);
    for (auto& a : st.assignments)
      if (a > c) --a;
  }
  st.assignments[static_cast<std::size_t>(i)] = -1;
}

/// Relabel clusters by order of first appearance.
inline void canonicalize(MixtureChainState& st) {
  std::vector<int> order;  // old index in appearance order
  std::vector<int> remap(st.clusters.size(), -1);
  for (int a : st.assignments)
    if (remap[static_cast<std::size_t>(a)] < 0) {
      remap[static_cast<std::size_t>(a)] = static_cast<int>(order.size());
      order.push_back(a);
    }
  std::vector<ClusterStats> reordered;
  reordered.reserve(st.clusters.size());
  for (int old : order) reordered.push_back(std::move(st.clusters[static_cast<std::size_t>(old)]));
  st.clusters = std::move(reordered);
  for (auto& a : st.assignments) a = remap[static_cast<std::size_t>(a)];
}

}  // namespace detail

/// One full reseating sweep in data order; empty clusters are dropped and
/// labels re-canonicalized at the end.
inline void gibbs_sweep_assignments(MixtureChainState& st, const Eigen::MatrixXd& data,
                                    const NiwPredictor& predictor, Rng& rng) {
  const int n = static_cast<int>(data.rows());
  const ClusterStats empty(static_cast<int>(data.cols()));
  std::vector<double> log_w;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd x(data.cols());
  for (int i = 0; i < n; ++i) {
    x = data.row(i).transpose();
    detail::remove_point(st, x, i);
    const int kk = st.n_clusters();
    log_w.assign(static_cast<std::size_t>(kk) + 1, 0.0);
    for (int c = 0; c < kk; ++c)
      log_w[static_cast<std::size_t>(c)] =
          std::log(static_cast<double>(st.clusters[static_cast<std::size_t>(c)].count)) +
          predictor.log_predictive(st.clusters[static_cast<std::size_t>(c)], x);
    log_w[static_cast<std::size_t>(kk)] =
        std::log(st.alpha) + predictor.log_predictive(empty, x);
    double max_lw = kNegInf;
    for (double lw : log_w) max_lw = std::max(max_lw, lw);
    double total = 0.0;
    for (double& lw : log_w) {
      lw = std::exp(lw - max_lw);
      total += lw;
    }
    double r = unif(rng) * total;
    int chosen = kk;
    for (int c = 0; c <= kk; ++c) {
      r -= log_w[static_cast<std::size_t>(c)];
      if (r <= 0.0) {
        chosen = c;
        break;
      }
    }
    if (chosen == kk) st.clusters.emplace_back(static_cast<int>(data.cols()));
    st.clusters[static_cast<std::size_t>(chosen)].add(x);
    st.assignments[static_cast<std::size_t>(i)] = chosen;
  }
  detail::canonicalize(st);
}

/// Conjugate precision refresh: alpha ~ Sg(a + k, b + 1, n) given the last
/// sampled partition's cluster count; no-op for fixed precision.
inline void gibbs_step_alpha(MixtureChainState& st, const PrecisionPrior& prior,
                             Rng& rng) {
  if (prior.is_fixed()) return;
  const long n = static_cast<long>(st.assignments.size());
  const StirlingGammaParams post =
      posterior_single(*prior.sg, st.n_clusters(), n);
  st.alpha = sample(post, rng);
}

/// From-scratch sufficient-statistic audit; raises on drift.
inline void check_stats_consistency(const MixtureChainState& st,
                                    const Eigen::MatrixXd& data, double tol = 1e-8) {
  std::vector<ClusterStats> fresh(st.clusters.size(),
                                  ClusterStats(static_cast<int>(data.cols())));
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    fresh[static_cast<std::size_t>(st.assignments[static_cast<std::size_t>(i)])].add(
        data.row(i).transpose());
  for (std::size_t c = 0; c < fresh.size(); ++c) {
    if (fresh[c].count != st.clusters[c].count)
      throw NumericalError("mixture stats audit: cluster count drift");
    if ((fresh[c].sum - st.clusters[c].sum).cwiseAbs().maxCoeff() > tol ||
        (fresh[c].sum_outer - st.clusters[c].sum_outer).cwiseAbs().maxCoeff() > tol)
      throw NumericalError("mixture stats audit: sufficient statistics drift");
  }
}

struct MixtureOptions {
  long iterations = 20000;
  long burn_in = 5000;
  long coclustering_thin = 10;  // accumulate the n x n matrix every so many sweeps
  bool store_partitions = false;
  long audit_every = 500;
};

struct MixtureTraces {
  std::vector<int> k_trace;        // post burn-in cluster counts
  std::vector<double> alpha_trace; // post burn-in precision values
  std::vector<Partition> partitions;
  Eigen::MatrixXd coclustering;    // posterior same-cluster frequencies
  Partition last_partition;
};

inline MixtureTraces run_chain(const Eigen::MatrixXd& data, const NiwParams& niw,
                               const PrecisionPrior& prior, const MixtureOptions& opts,
                               Rng& rng) {
  if (opts.iterations <= opts.burn_in)
    throw ParameterError("run_chain: iterations must exceed burn_in");
  if (!prior.is_fixed() && prior.sg->m != data.rows())
    throw ConjugacyError("run_chain: Stirling-gamma prior needs m == n");
  const int n = static_cast<int>(data.rows());
  NiwPredictor predictor(niw);
  MixtureChainState st = initial_state(data, prior.initial_alpha());
  MixtureTraces out;
  out.coclustering = Eigen::MatrixXd::Zero(n, n);
  long coclust_samples = 0;
  for (long it = 0; it < opts.iterations; ++it) {
    gibbs_sweep_assignments(st, data, predictor, rng);
    gibbs_step_alpha(st, prior, rng);
    if ((it + 1) % opts.audit_every == 0) check_stats_consistency(st, data);
    if (it < opts.burn_in) continue;
    out.k_trace.push_back(st.n_clusters());
    out.alpha_trace.push_back(st.alpha);
    if (opts.store_partitions) out.partitions.push_back(st.partition());
    if ((it - opts.burn_in) % opts.coclustering_thin == 0) {
      ++coclust_samples;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (st.assignments[static_cast<std::size_t>(i)] ==
              st.assignments[static_cast<std::size_t>(j)]) {
            out.coclustering(i, j) += 1.0;
            out.coclustering(j, i) += 1.0;
          }
    }
  }
  if (coclust_samples > 0) {
    out.coclustering /= static_cast<double>(coclust_samples);
    out.coclustering.diagonal().setOnes();
  }
  out.last_partition = st.partition();
  return out;
}

}  // namespace stirgamma
