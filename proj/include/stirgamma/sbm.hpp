#pragma once

// Collapsed Gibbs sampler for Beta-Bernoulli stochastic block models on N
// binary networks over the same n nodes.  Block edge probabilities carry
// uniform Beta(1,1) priors and are integrated out; each network keeps its
// own node partition while the Dirichlet-process precision can be fixed,
// independent per network, or pooled through the conjugate update.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "stirgamma/conjugacy.hpp"
#include "stirgamma/partition.hpp"
#include "stirgamma/stirling_gamma.hpp"

namespace stirgamma {

using BinaryMatrix = std::vector<std::vector<std::uint8_t>>;

/// N symmetric binary adjacency matrices with empty diagonal.
struct NetworkData {
  long n = 0;
  std::vector<BinaryMatrix> networks;

  long count() const { return static_cast<long>(networks.size()); }

  void add(const BinaryMatrix& adj) {
    const long nn = static_cast<long>(adj.size());
    if (networks.empty())
      n = nn;
    else if (nn != n)
      throw std::invalid_argument("NetworkData: node count mismatch across networks");
    for (long i = 0; i < nn; ++i) {
      if (static_cast<long>(adj[static_cast<std::size_t>(i)].size()) != nn)
        throw std::invalid_argument("NetworkData: adjacency matrix is not square");
      if (adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] != 0)
        throw std::invalid_argument("NetworkData: self-relations are not allowed");
      for (long j = 0; j < nn; ++j) {
        const std::uint8_t v = adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (v > 1) throw std::invalid_argument("NetworkData: entries must be 0/1");
        if (v != adj[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)])
          throw std::invalid_argument("NetworkData: adjacency matrix is not symmetric");
      }
    }
    networks.push_back(adj);
  }
};

/// log of the Bernoulli marginal of one block under the uniform Beta prior:
/// log B(1+edges, 1+non-edges) - log B(1,1).
inline double log_collapsed_block_likelihood(long edge_count, long pair_count) {
  if (edge_count < 0 || pair_count < 0 || edge_count > pair_count)
    throw std::domain_error("block likelihood: requires 0 <= edges <= pairs");
  return log_gamma(1.0 + edge_count) + log_gamma(1.0 + (pair_count - edge_count)) -
         log_gamma(2.0 + pair_count);
}

namespace detail {

/// lgamma(1..size) lookup so the sweep's inner loop is three array reads.
class BlockLikelihoodTable {
 public:
  explicit BlockLikelihoodTable(long max_pairs) : lg_(static_cast<std::size_t>(max_pairs) + 3) {
    lg_[1] = 0.0;
    for (std::size_t i = 2; i < lg_.size(); ++i)
      lg_[i] = lg_[i - 1] + std::log(static_cast<double>(i - 1));
  }
  double operator()(long edges, long pairs) const {
    return lg_[static_cast<std::size_t>(edges) + 1] +
           lg_[static_cast<std::size_t>(pairs - edges) + 1] -
           lg_[static_cast<std::size_t>(pairs) + 2];
  }

 private:
  std::vector<double> lg_;  // lg_[i] = log Gamma(i)
};

}  // namespace detail

struct SimulatedNetworks {
  NetworkData data;
  Partition truth;  // one true partition shared by all networks
};

/// Six-cluster benchmark: assignment weights from Dirichlet(10,..,10),
/// within-cluster edge probabilities (0.95,...,0.70) and between-cluster
/// (0.05,...,0.30) across N = 6 networks of decreasing signal.
inline SimulatedNetworks simulate_networks(long n, Rng& rng) {
  if (n < 12) throw std::domain_error("simulate_networks: requires n >= 12");
  const int k_true = 6;
  const double within[6] = {0.95, 0.90, 0.85, 0.80, 0.75, 0.70};
  const double between[6] = {0.05, 0.10, 0.10, 0.15, 0.15, 0.30};

  std::gamma_distribution<double> gam(10.0, 1.0);
  std::vector<double> weights(k_true);
  double wsum = 0.0;
  for (auto& w : weights) {
    w = gam(rng);
    wsum += w;
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> raw(static_cast<std::size_t>(n));
  for (auto& lab : raw) {
    double r = unif(rng) * wsum;
    int c = k_true - 1;
    for (int j = 0; j < k_true; ++j) {
      r -= weights[static_cast<std::size_t>(j)];
      if (r <= 0.0) {
        c = j;
        break;
      }
    }
    lab = c;
  }

  SimulatedNetworks out;
  out.truth = Partition::from_labels(raw);
  for (int s = 0; s < 6; ++s) {
    BinaryMatrix adj(static_cast<std::size_t>(n),
                     std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0));
    for (long i = 0; i < n; ++i)
      for (long j = i + 1; j < n; ++j) {
        const bool same = out.truth.labels[static_cast<std::size_t>(i)] ==
                          out.truth.labels[static_cast<std::size_t>(j)];
        const double p = same ? within[s] : between[s];
        const std::uint8_t v = unif(rng) < p ? 1 : 0;
        adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
        adj[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
      }
    out.data.add(adj);
  }
  return out;
}

/// Chance-corrected pair-counting agreement between two partitions.
inline double adjusted_rand_index(const Partition& p1, const Partition& p2) {
  if (p1.n() != p2.n())
    throw std::invalid_argument("adjusted_rand_index: partition sizes differ");
  const int k1 = p1.k(), k2 = p2.k();
  std::vector<std::vector<long>> table(static_cast<std::size_t>(k1),
                                       std::vector<long>(static_cast<std::size_t>(k2), 0));
  for (int i = 0; i < p1.n(); ++i)
    ++table[static_cast<std::size_t>(p1.labels[static_cast<std::size_t>(i)] - 1)]
           [static_cast<std::size_t>(p2.labels[static_cast<std::size_t>(i)] - 1)];
  auto choose2 = [](long v) { return 0.5 * static_cast<double>(v) * (v - 1); };
  double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (int i = 0; i < k1; ++i) {
    long row = 0;
    for (int j = 0; j < k2; ++j) {
      row += table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      sum_cells += choose2(table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    sum_rows += choose2(row);
  }
  for (int j = 0; j < k2; ++j) {
    long col = 0;
    for (int i = 0; i < k1; ++i)
      col += table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    sum_cols += choose2(col);
  }
  const double expected = sum_rows * sum_cols / choose2(p1.n());
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (std::abs(max_index - expected) < 1e-12)
    return p1.labels == p2.labels ? 1.0 : 0.0;
  return (sum_cells - expected) / (max_index - expected);
}

/// Effective sample size by Geyer's initial monotone sequence estimator.
inline double effective_sample_size(const std::vector<double>& x) {
  const long n = static_cast<long>(x.size());
  if (n < 4) return static_cast<double>(n);
  double mu = 0.0;
  for (double v : x) mu += v;
  mu /= static_cast<double>(n);
  auto gamma_at = [&](long t) {
    double acc = 0.0;
    for (long i = 0; i + t < n; ++i) acc += (x[static_cast<std::size_t>(i)] - mu) *
                                            (x[static_cast<std::size_t>(i + t)] - mu);
    return acc / static_cast<double>(n);
  };
  const double g0 = gamma_at(0);
  if (g0 <= 0.0) return static_cast<double>(n);
  double sigma2 = -g0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (long k = 0; 2 * k + 1 < n; ++k) {
    double pair = gamma_at(2 * k) + gamma_at(2 * k + 1);
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);  // enforce monotone decrease
    sigma2 += 2.0 * pair;
    prev_pair = pair;
  }
  const double iact = std::max(sigma2 / g0, 1.0);
  return static_cast<double>(n) / iact;
}

/// Precision model across the N networks.
struct SbmPrecisionModel {
  enum class Kind { fixed, independent, pooled };
  Kind kind = Kind::fixed;
  double fixed_alpha = 1.0;
  std::optional<StirlingGammaParams> sg;

  static SbmPrecisionModel fixed(double alpha) {
    if (!(alpha > 0.0)) throw ParameterError("fixed precision must be positive");
    SbmPrecisionModel m;
    m.kind = Kind::fixed;
    m.fixed_alpha = alpha;
    return m;
  }
  static SbmPrecisionModel independent(const StirlingGammaParams& p) {
    SbmPrecisionModel m;
    m.kind = Kind::independent;
    m.sg = p;
    return m;
  }
  static SbmPrecisionModel pooled(const StirlingGammaParams& p) {
    SbmPrecisionModel m;
    m.kind = Kind::pooled;
    m.sg = p;
    return m;
  }
  double initial_alpha() const {
    return kind == Kind::fixed ? fixed_alpha : sg->a / sg->b;
  }
};

/// Per-network partitions, block edge counts and the precision values.
/// Chains start from all-singleton partitions: single-site Gibbs merges
/// blocks easily but splits them only through rare nucleation events, so
/// starting from the finest partition avoids stuck coarse modes.
class MultiNetworkState {
 public:
  MultiNetworkState(const NetworkData& data, double alpha0)
      : n_(data.n),
        labels_(static_cast<std::size_t>(data.count())),
        sizes_(static_cast<std::size_t>(data.count())),
        edges_(static_cast<std::size_t>(data.count())),
        alphas_(static_cast<std::size_t>(data.count()), alpha0) {
    for (long s = 0; s < data.count(); ++s) {
      auto& lab = labels_[static_cast<std::size_t>(s)];
      lab.resize(static_cast<std::size_t>(n_));
      for (long i = 0; i < n_; ++i) lab[static_cast<std::size_t>(i)] = static_cast<int>(i);
      sizes_[static_cast<std::size_t>(s)].assign(static_cast<std::size_t>(n_), 1);
      const BinaryMatrix& adj = data.networks[static_cast<std::size_t>(s)];
      auto& e = edges_[static_cast<std::size_t>(s)];
      e.assign(static_cast<std::size_t>(n_), std::vector<long>(static_cast<std::size_t>(n_), 0));
      for (long i = 0; i < n_; ++i)
        for (long j = i + 1; j < n_; ++j)
          e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }

  long n_nodes() const { return n_; }
  long n_networks() const { return static_cast<long>(labels_.size()); }
  int n_clusters(long s) const { return static_cast<int>(sizes_[static_cast<std::size_t>(s)].size()); }
  double alpha(long s) const { return alphas_[static_cast<std::size_t>(s)]; }
  void set_alpha(long s, double a) { alphas_[static_cast<std::size_t>(s)] = a; }
  void set_all_alphas(double a) { std::fill(alphas_.begin(), alphas_.end(), a); }

  Partition partition(long s) const {
    std::vector<int> raw(static_cast<std::size_t>(n_));
    for (long i = 0; i < n_; ++i)
      raw[static_cast<std::size_t>(i)] =
          labels_[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] + 1;
    return Partition::from_labels(raw);
  }

  long pair_count(long s, int h, int hp) const {
    const auto& sz = sizes_[static_cast<std::size_t>(s)];
    if (h == hp)
      return static_cast<long>(sz[static_cast<std::size_t>(h)]) *
             (sz[static_cast<std::size_t>(h)] - 1) / 2;
    return static_cast<long>(sz[static_cast<std::size_t>(h)]) *
           sz[static_cast<std::size_t>(hp)];
  }

  long edge_count(long s, int h, int hp) const {
    return edges_[static_cast<std::size_t>(s)][static_cast<std::size_t>(std::min(h, hp))]
                 [static_cast<std::size_t>(std::max(h, hp))];
  }

  /// Sum of block log marginals of network s.
  double log_marginal(long s, const detail::BlockLikelihoodTable& table) const {
    const int kk = n_clusters(s);
    double acc = 0.0;
    for (int h = 0; h < kk; ++h)
      for (int hp = h; hp < kk; ++hp)
        acc += table(edge_count(s, h, hp), pair_count(s, h, hp));
    return acc;
  }

  /// Recompute sizes and block counts from scratch and compare.
  void audit(const NetworkData& data) const {
    for (long s = 0; s < n_networks(); ++s) {
      const auto& lab = labels_[static_cast<std::size_t>(s)];
      const int kk = n_clusters(s);
      std::vector<int> sz(static_cast<std::size_t>(kk), 0);
      std::vector<std::vector<long>> e(static_cast<std::size_t>(kk),
                                       std::vector<long>(static_cast<std::size_t>(kk), 0));
      for (long i = 0; i < n_; ++i) ++sz[static_cast<std::size_t>(lab[static_cast<std::size_t>(i)])];
      const BinaryMatrix& adj = data.networks[static_cast<std::size_t>(s)];
      for (long i = 0; i < n_; ++i)
        for (long j = i + 1; j < n_; ++j)
          if (adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
            const int h = lab[static_cast<std::size_t>(i)], hp = lab[static_cast<std::size_t>(j)];
            ++e[static_cast<std::size_t>(std::min(h, hp))][static_cast<std::size_t>(std::max(h, hp))];
          }
      if (sz != sizes_[static_cast<std::size_t>(s)])
        throw std::runtime_error("sbm audit: cluster sizes drifted");
      for (int h = 0; h < kk; ++h)
        for (int hp = h; hp < kk; ++hp)
          if (e[static_cast<std::size_t>(h)][static_cast<std::size_t>(hp)] !=
              edge_count(s, h, hp))
            throw std::runtime_error("sbm audit: block edge counts drifted");
    }
  }

  /// One collapsed Gibbs sweep over the nodes of network s.
  void sweep(long s, const NetworkData& data, const detail::BlockLikelihoodTable& table,
             Rng& rng) {
    const BinaryMatrix& adj = data.networks[static_cast<std::size_t>(s)];
    auto& lab = labels_[static_cast<std::size_t>(s)];
    auto& sz = sizes_[static_cast<std::size_t>(s)];
    auto& e = edges_[static_cast<std::size_t>(s)];
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<long> deg;       // edges from node i into each cluster
    std::vector<double> log_w;
    for (long i = 0; i < n_; ++i) {
      int kk = static_cast<int>(sz.size());
      deg.assign(static_cast<std::size_t>(kk), 0);
      for (long j = 0; j < n_; ++j)
        if (adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
          ++deg[static_cast<std::size_t>(lab[static_cast<std::size_t>(j)])];

      // detach node i
      const int c = lab[static_cast<std::size_t>(i)];
      for (int h = 0; h < kk; ++h) {
        auto& cell = e[static_cast<std::size_t>(std::min(c, h))][static_cast<std::size_t>(std::max(c, h))];
        cell -= deg[static_cast<std::size_t>(h)];
      }
      --sz[static_cast<std::size_t>(c)];
      if (sz[static_cast<std::size_t>(c)] == 0) {
        drop_cluster(s, c);
        deg.erase(deg.begin() + c);
        kk = static_cast<int>(sz.size());
      }
      lab[static_cast<std::size_t>(i)] = -1;

      // candidate weights
      log_w.assign(static_cast<std::size_t>(kk) + 1, 0.0);
      for (int h = 0; h < kk; ++h) {
        double delta = 0.0;
        for (int hp = 0; hp < kk; ++hp) {
          const long e0 = edge_count(s, h, hp);
          const long q0 = pair_count(s, h, hp);
          const long gain_pairs = sz[static_cast<std::size_t>(hp)];
          delta += table(e0 + deg[static_cast<std::size_t>(hp)], q0 + gain_pairs) -
                   table(e0, q0);
        }
        log_w[static_cast<std::size_t>(h)] =
            std::log(static_cast<double>(sz[static_cast<std::size_t>(h)])) + delta;
      }
      {
        double delta = 0.0;
        for (int hp = 0; hp < kk; ++hp)
          delta += table(deg[static_cast<std::size_t>(hp)], sz[static_cast<std::size_t>(hp)]);
        log_w[static_cast<std::size_t>(kk)] =
            std::log(alphas_[static_cast<std::size_t>(s)]) + delta;
      }

      double max_lw = kNegInf;
      for (double lw : log_w) max_lw = std::max(max_lw, lw);
      double total = 0.0;
      for (double& lw : log_w) {
        lw = std::exp(lw - max_lw);
        total += lw;
      }
      double r = unif(rng) * total;
      int chosen = kk;
      for (int h = 0; h <= kk; ++h) {
        r -= log_w[static_cast<std::size_t>(h)];
        if (r <= 0.0) {
          chosen = h;
          break;
        }
      }
      if (chosen == kk) {
        sz.push_back(0);
        deg.push_back(0);
        for (auto& row : e) row.push_back(0);
        e.emplace_back(sz.size(), 0);
      }
      ++sz[static_cast<std::size_t>(chosen)];
      for (int h = 0; h < static_cast<int>(sz.size()); ++h) {
        auto& cell = e[static_cast<std::size_t>(std::min(chosen, h))]
                      [static_cast<std::size_t>(std::max(chosen, h))];
        cell += deg[static_cast<std::size_t>(h)];
      }
      lab[static_cast<std::size_t>(i)] = chosen;
    }
    canonicalize(s);
  }

 private:
  void drop_cluster(long s, int c) {
    auto& lab = labels_[static_cast<std::size_t>(s)];
    auto& sz = sizes_[static_cast<std::size_t>(s)];
    auto& e = edges_[static_cast<std::size_t>(s)];
    sz.erase(sz.begin() + c);
    e.erase(e.begin() + c);
    for (auto& row : e) row.erase(row.begin() + c);
    for (auto& l : lab)
      if (l > c) --l;
  }

  void canonicalize(long s) {
    auto& lab = labels_[static_cast<std::size_t>(s)];
    const int kk = n_clusters(s);
    std::vector<int> remap(static_cast<std::size_t>(kk), -1);
    int next = 0;
    for (int l : lab)
      if (remap[static_cast<std::size_t>(l)] < 0) remap[static_cast<std::size_t>(l)] = next++;
    if (next != kk) throw std::runtime_error("sbm canonicalize: empty cluster survived");
    std::vector<int> sz_new(static_cast<std::size_t>(kk));
    std::vector<std::vector<long>> e_new(static_cast<std::size_t>(kk),
                                         std::vector<long>(static_cast<std::size_t>(kk), 0));
    const auto& sz = sizes_[static_cast<std::size_t>(s)];
    for (int h = 0; h < kk; ++h) {
      sz_new[static_cast<std::size_t>(remap[static_cast<std::size_t>(h)])] =
          sz[static_cast<std::size_t>(h)];
      for (int hp = h; hp < kk; ++hp) {
        const int a = remap[static_cast<std::size_t>(h)], b = remap[static_cast<std::size_t>(hp)];
        e_new[static_cast<std::size_t>(std::min(a, b))][static_cast<std::size_t>(std::max(a, b))] =
            edge_count(s, h, hp);
      }
    }
    sizes_[static_cast<std::size_t>(s)] = std::move(sz_new);
    edges_[static_cast<std::size_t>(s)] = std::move(e_new);
    for (auto& l : lab) l = remap[static_cast<std::size_t>(l)];
  }

  long n_;
  std::vector<std::vector<int>> labels_;        // [network][node], 0-based
  std::vector<std::vector<int>> sizes_;         // [network][cluster]
  std::vector<std::vector<std::vector<long>>> edges_;  // upper-triangular block counts
  std::vector<double> alphas_;                  // one per network (shared if pooled)
};

/// One collapsed sweep over the nodes of network s.
inline void gibbs_sweep_network(MultiNetworkState& st, long s, const NetworkData& data,
                                const detail::BlockLikelihoodTable& table, Rng& rng) {
  st.sweep(s, data, table, rng);
}

/// Shared-precision refresh from the pooled conjugate posterior.
inline void gibbs_step_alpha_pooled(MultiNetworkState& st, const StirlingGammaParams& prior,
                                    Rng& rng) {
  std::vector<long> ks;
  for (long s = 0; s < st.n_networks(); ++s) ks.push_back(st.n_clusters(s));
  const StirlingGammaParams post =
      posterior_pooled(prior, PartitionObservations(st.n_nodes(), ks));
  st.set_all_alphas(sample(post, rng));
}

/// Independent per-network refresh via the single-partition posterior.
inline void gibbs_step_alpha_independent(MultiNetworkState& st,
                                         const StirlingGammaParams& prior, Rng& rng) {
  for (long s = 0; s < st.n_networks(); ++s) {
    const StirlingGammaParams post =
        posterior_single(prior, st.n_clusters(s), st.n_nodes());
    st.set_alpha(s, sample(post, rng));
  }
}

struct MultiNetworkOptions {
  long iterations = 10000;
  long burn_in = 2000;
  long audit_every = 500;
  long coclustering_thin = 10;
  bool store_partitions = false;
};

struct MultiNetworkTraces {
  std::vector<std::vector<int>> k_traces;           // [network][post-burn-in iter]
  std::vector<std::vector<double>> alpha_traces;    // pooled: one trace
  std::vector<std::vector<double>> coclustering;    // [network] row-major n x n
  std::vector<std::vector<Partition>> partitions;   // when stored
  std::vector<Partition> last_partitions;
  std::vector<double> ess;                          // per alpha trace
  double mean_ari = std::numeric_limits<double>::quiet_NaN();  // vs truth
};

inline MultiNetworkTraces run_multinetwork_chain(
    const NetworkData& data, const SbmPrecisionModel& model,
    const MultiNetworkOptions& opts, Rng& rng,
    const Partition* truth = nullptr) {
  if (opts.iterations <= opts.burn_in)
    throw ParameterError("run_multinetwork_chain: iterations must exceed burn_in");
  if (model.kind != SbmPrecisionModel::Kind::fixed && model.sg->m != data.n)
    throw ConjugacyError("run_multinetwork_chain: Stirling-gamma prior needs m == n");
  const long n = data.n, nets = data.count();
  const detail::BlockLikelihoodTable table(n * (n - 1) / 2);
  MultiNetworkState st(data, model.initial_alpha());
  MultiNetworkTraces out;
  out.k_traces.resize(static_cast<std::size_t>(nets));
  out.partitions.resize(static_cast<std::size_t>(nets));
  out.coclustering.assign(static_cast<std::size_t>(nets),
                          std::vector<double>(static_cast<std::size_t>(n * n), 0.0));
  const bool pooled = model.kind == SbmPrecisionModel::Kind::pooled;
  if (pooled)
    out.alpha_traces.resize(1);
  else if (model.kind == SbmPrecisionModel::Kind::independent)
    out.alpha_traces.resize(static_cast<std::size_t>(nets));
  long coclust_samples = 0;
  double ari_acc = 0.0;
  long ari_count = 0;
  for (long it = 0; it < opts.iterations; ++it) {
    for (long s = 0; s < nets; ++s) st.sweep(s, data, table, rng);
    switch (model.kind) {
      case SbmPrecisionModel::Kind::fixed:
        break;
      case SbmPrecisionModel::Kind::independent:
        gibbs_step_alpha_independent(st, *model.sg, rng);
        break;
      case SbmPrecisionModel::Kind::pooled:
        gibbs_step_alpha_pooled(st, *model.sg, rng);
        break;
    }
    if ((it + 1) % opts.audit_every == 0) st.audit(data);
    if (it < opts.burn_in) continue;
    const bool accumulate_coclust = (it - opts.burn_in) % opts.coclustering_thin == 0;
    if (accumulate_coclust) ++coclust_samples;
    for (long s = 0; s < nets; ++s) {
      const Partition part = st.partition(s);
      out.k_traces[static_cast<std::size_t>(s)].push_back(part.k());
      if (opts.store_partitions)
        out.partitions[static_cast<std::size_t>(s)].push_back(part);
      if (truth != nullptr) {
        ari_acc += adjusted_rand_index(part, *truth);
        ++ari_count;
      }
      if (accumulate_coclust) {
        auto& cc = out.coclustering[static_cast<std::size_t>(s)];
        for (long i = 0; i < n; ++i)
          for (long j = i; j < n; ++j)
            if (part.labels[static_cast<std::size_t>(i)] ==
                part.labels[static_cast<std::size_t>(j)]) {
              cc[static_cast<std::size_t>(i * n + j)] += 1.0;
              cc[static_cast<std::size_t>(j * n + i)] += (i == j) ? 0.0 : 1.0;
            }
      }
    }
    if (pooled)
      out.alpha_traces[0].push_back(st.alpha(0));
    else if (model.kind == SbmPrecisionModel::Kind::independent)
      for (long s = 0; s < nets; ++s)
        out.alpha_traces[static_cast<std::size_t>(s)].push_back(st.alpha(s));
  }
  if (coclust_samples > 0)
    for (auto& cc : out.coclustering)
      for (auto& v : cc) v /= static_cast<double>(coclust_samples);
  for (long s = 0; s < nets; ++s) out.last_partitions.push_back(st.partition(s));
  for (const auto& tr : out.alpha_traces) out.ess.push_back(effective_sample_size(tr));
  if (ari_count > 0) out.mean_ari = ari_acc / static_cast<double>(ari_count);
  return out;
}

}  // namespace stirgamma
