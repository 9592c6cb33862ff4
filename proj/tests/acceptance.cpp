// Acceptance suite: one line per criterion, [PASS]/[FAIL] plus timing.
// Exit code is the number of failed criteria.

#include <boost/math/special_functions/gamma.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "stirgamma/closed_form.hpp"
#include "stirgamma/conjugacy.hpp"
#include "stirgamma/mixture.hpp"
#include "stirgamma/partition.hpp"
#include "stirgamma/sbm.hpp"
#include "stirgamma/stirling_gamma.hpp"

using namespace stirgamma;

namespace {

struct Check {
  std::string name;
  std::function<bool(std::ostringstream&)> run;
};

double rel_gap(double log_a, double log_b) { return std::abs(std::exp(log_a - log_b) - 1.0); }

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  return d;
}

std::vector<std::vector<int>> all_set_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int maxlab) {
    if (i == n) {
      out.push_back(labels);
      return;
    }
    for (int lab = 0; lab <= maxlab + 1; ++lab) {
      labels[static_cast<std::size_t>(i)] = lab;
      rec(i + 1, std::max(maxlab, lab));
    }
  };
  rec(0, -1);
  return out;
}

std::vector<double> k_histogram(const std::vector<int>& ks, int support) {
  std::vector<double> h(static_cast<std::size_t>(support), 0.0);
  for (int k : ks)
    if (k >= 1 && k <= support) h[static_cast<std::size_t>(k - 1)] += 1.0;
  for (auto& v : h) v /= static_cast<double>(ks.size());
  return h;
}

int histogram_mode(const std::vector<int>& ks) {
  std::map<int, long> hist;
  for (int k : ks) ++hist[k];
  int mode = 0;
  long best = -1;
  for (const auto& [k, cnt] : hist)
    if (cnt > best) {
      best = cnt;
      mode = k;
    }
  return mode;
}

// ------------------------------------------------------------- criterion 1

bool criterion_norm_const(std::ostringstream& msg) {
  const std::pair<long, long> pairs[] = {{2, 1}, {3, 1}, {3, 2}, {4, 2}, {5, 2}};
  double worst = 0.0;
  for (const auto& [a, b] : pairs)
    for (long m = 3; m <= 20; ++m) {
      if (!(b < a && a < b * m)) continue;
      const double cf = log_norm_const_closed_form(a, b, m);
      const double q = log_norm_const_quadrature(
          StirlingGammaParams(static_cast<double>(a), static_cast<double>(b), m));
      worst = std::max(worst, rel_gap(cf, q));
    }
  const double anchor1 =
      std::abs(std::exp(log_norm_const_closed_form(2, 1, 3)) / std::log(2.0) - 1.0);
  const double anchor2 =
      std::abs(std::exp(log_norm_const_closed_form(3, 2, 3)) /
                   (1.5 - 2.0 * std::log(2.0)) -
               1.0);
  msg << "worst sweep gap " << worst << ", anchors " << anchor1 << ", " << anchor2;
  return worst <= 1e-8 && anchor1 <= 1e-10 && anchor2 <= 1e-10;
}

// ------------------------------------------------------------- criterion 2

bool criterion_v_closed_form(std::ostringstream& msg) {
  double worst = 0.0;
  for (long a : {2L, 3L})
    for (long b : {1L, 2L}) {
      if (!(b < a)) continue;
      for (long m : {5L, 10L}) {
        if (!(a < b * m)) continue;
        for (long n : {m, m + 3, m - 2})
          for (long k = 1; k <= n; ++k) {
            const double cf = log_v_closed_form(a, b, m, n, k);
            const double q = v_coefficient(
                StirlingGammaParams(static_cast<double>(a), static_cast<double>(b), m),
                n, k);
            worst = std::max(worst, rel_gap(cf, q));
          }
      }
    }
  msg << "worst gap " << worst << " (includes the n = m branch)";
  return worst <= 1e-8;
}

// ------------------------------------------------------------- criterion 3

bool criterion_acceptance_rates(std::ostringstream& msg) {
  struct Cell {
    double a, b;
    long m;
    double rate;
  };
  const Cell cells[] = {
      {2.0, 0.2, 100, 0.756}, {10.0, 5.0, 1000, 0.523}, {0.2, 0.1, 100, 0.949},
      {1.0, 0.6, 1000, 0.670}, {3.0, 1.5, 100, 0.754},  {0.6, 0.5, 100, 0.940},
  };
  Rng rng(20240);
  bool ok = true;
  for (const Cell& c : cells) {
    const StirlingGamma dist(StirlingGammaParams(c.a, c.b, c.m));
    const SampleBatch batch = dist.sample_many(100000, rng);
    msg << "(" << c.a << "," << c.b << "," << c.m << ")->" << std::setprecision(3)
        << batch.acceptance_rate << " ";
    ok = ok && std::abs(batch.acceptance_rate - c.rate) <= 0.03;
  }
  return ok;
}

// ------------------------------------------------------------- criterion 4

bool criterion_sampler_exactness(std::ostringstream& msg) {
  const std::size_t n = 100000;
  const double critical = std::sqrt(-0.5 * std::log(0.0005)) * std::sqrt(2.0 / n);
  bool ok = true;
  for (const StirlingGammaParams p :
       {StirlingGammaParams(5, 1, 100), StirlingGammaParams(0.6, 0.2, 149)}) {
    const StirlingGamma dist(p);
    Rng rng(99);
    const SampleBatch batch = dist.sample_many(n, rng);
    const detail::CdfGrid grid(p);
    std::vector<double> oracle(n);
    for (auto& v : oracle) v = grid.sample(rng);
    const double d = ks_two_sample(batch.draws, oracle);
    msg << "KS=" << d << " (crit " << critical << ") ";
    ok = ok && d < critical;
  }
  return ok;
}

// ------------------------------------------------------------- criterion 5

bool criterion_reference_size_moments(std::ostringstream& msg) {
  const StirlingGammaParams p(6.0, 3.0, 50);
  const ClusterCountPmf pmf = kn_pmf_sgp(p, 50);
  const double mean_err = std::abs(pmf.mean() - 2.0);
  const double d = d_constant(p);
  const double var_err = std::abs(pmf.variance() - (4.0 / 3.0) * (2.0 - d));
  Rng rng(555);
  const StirlingGamma dist(p);
  const long reps = 100000;
  double acc = 0.0, acc2 = 0.0;
  for (long r = 0; r < reps; ++r) {
    const double k =
        static_cast<double>(sample_crp_cluster_count(dist.sample(rng), 50, rng));
    acc += k;
    acc2 += k * k;
  }
  const double mc_mean = acc / reps;
  const double mc_se = std::sqrt((acc2 / reps - mc_mean * mc_mean) / reps);
  msg << "mean err " << mean_err << ", var err " << var_err << ", urn mean "
      << mc_mean << " +- " << mc_se;
  return mean_err <= 1e-6 && var_err <= 1e-6 && std::abs(mc_mean - 2.0) <= 3.0 * mc_se;
}

// ------------------------------------------------------------- criterion 6

bool criterion_limit_laws(std::ostringstream& msg) {
  StirlingNumberTable::set_cap(10001);
  bool ok = true;
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{{5, 1}, {3, 0.5}}) {
    std::vector<double> limit(600);
    for (long k = 1; k <= 600; ++k)
      limit[static_cast<std::size_t>(k - 1)] = negbin_limit_pmf(a, b, k);
    double prev = 2.0;
    msg << "negbin(" << a << "," << b << ") TV:";
    for (long m : {100L, 1000L, 10000L}) {
      const double tv = total_variation(
          kn_pmf_sgp(StirlingGammaParams(a, b, m), m).probabilities, limit);
      msg << " " << tv;
      ok = ok && tv < prev;
      prev = tv;
    }
    msg << "; ";
  }
  {
    std::vector<double> plimit(600);
    for (long k = 1; k <= 600; ++k)
      plimit[static_cast<std::size_t>(k - 1)] = poisson_limit_pmf(3.0, k);
    double prev = 2.0;
    msg << "poisson TV:";
    for (long m : {100L, 1000L, 10000L}) {
      const double tv = total_variation(
          kn_pmf_dp(3.0 / std::log(static_cast<double>(m)), m).probabilities, plimit);
      msg << " " << tv;
      ok = ok && tv < prev;
      prev = tv;
    }
    msg << "; ";
  }
  {
    double prev = 2.0;
    msg << "gamma KS:";
    for (long m : {100L, 1000L, 10000L}) {
      const StirlingGamma dist(StirlingGammaParams(5, 1, m));
      Rng rng(246);
      SampleBatch batch = dist.sample_many(20000, rng);
      const double logm = std::log(static_cast<double>(m));
      std::sort(batch.draws.begin(), batch.draws.end());
      double ks = 0.0;
      for (std::size_t i = 0; i < batch.draws.size(); ++i) {
        const double f = boost::math::gamma_p(4.0, batch.draws[i] * logm);
        ks = std::max(ks, std::abs((i + 1.0) / batch.draws.size() - f));
        ks = std::max(ks, std::abs(f - static_cast<double>(i) / batch.draws.size()));
      }
      msg << " " << ks;
      ok = ok && ks < prev;
      prev = ks;
    }
  }
  return ok;
}

// ------------------------------------------------------------- criterion 7

bool criterion_conjugacy(std::ostringstream& msg) {
  Rng rng(777);
  const long n = 40;
  const StirlingGammaParams prior(2.5, 0.8, n);
  const double log_norm_prior = log_norm_const_quadrature(prior);
  bool ok = true;
  for (long N : {1L, 4L}) {
    std::vector<Partition> parts;
    std::vector<long> ks;
    for (long s = 0; s < N; ++s) {
      parts.push_back(sample_partition_crp(1.7, n, rng));
      ks.push_back(parts.back().k());
    }
    const StirlingGammaParams post =
        posterior_pooled(prior, PartitionObservations(n, ks));
    const double log_norm_post = log_norm_const_quadrature(post);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double alpha = 0.05; alpha < 25.0; alpha *= 1.6) {
      double log_lik = 0.0;
      for (const Partition& part : parts) log_lik += dp_log_eppf(alpha, part);
      const double c = (log_unnormalized_density(post, alpha) - log_norm_post) -
                       (log_unnormalized_density(prior, alpha) - log_norm_prior) -
                       log_lik;
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    msg << "N=" << N << " spread " << (hi - lo) << "; ";
    ok = ok && (hi - lo) < 1e-10;
  }
  // posterior-mean decomposition vs Monte Carlo
  const PartitionObservations obs(n, {5, 9, 7});
  const StirlingGammaParams post = posterior_pooled(prior, obs);
  const StirlingGamma dist(post);
  const long reps = 100000;
  double acc = 0.0, acc2 = 0.0;
  for (long r = 0; r < reps; ++r) {
    const double a = dist.sample(rng);
    const double v = a * (digamma(a + n) - digamma(a));
    acc += v;
    acc2 += v * v;
  }
  const double mc = acc / reps;
  const double se = std::sqrt((acc2 / reps - mc * mc) / reps);
  const double formula = posterior_mean_expected_clusters(prior, obs);
  msg << "posterior mean " << formula << " vs MC " << mc << " +- " << se;
  return ok && std::abs(formula - mc) <= 3.0 * se;
}

// ------------------------------------------------------------- criterion 8

bool criterion_eppf_normalization(std::ostringstream& msg) {
  const StirlingGammaParams sg(2.0, 1.0, 10);
  bool ok = true;
  for (int n : {5, 8}) {
    double dp_total = 0.0, sgp_total = 0.0;
    for (const auto& labels : all_set_partitions(n)) {
      const Partition part = Partition::from_labels(labels);
      dp_total += std::exp(dp_log_eppf(1.3, part));
      sgp_total += std::exp(sgp_log_eppf(sg, part));
    }
    msg << "n=" << n << ": dp " << std::setprecision(12) << dp_total << ", sgp "
        << sgp_total << "; ";
    ok = ok && std::abs(dp_total - 1.0) <= 1e-8 && std::abs(sgp_total - 1.0) <= 1e-8;
  }
  return ok;
}

// ------------------------------------------------------------- criterion 9

bool criterion_figure1(std::ostringstream& msg) {
  Rng data_rng(7);
  const Eigen::MatrixXd data = simulate_four_component_data(800, data_rng);
  const NiwParams niw = NiwParams::weakly_informative(2);
  MixtureOptions opts;
  opts.iterations = 20000;
  opts.burn_in = 5000;
  opts.coclustering_thin = 100;

  auto run = [&](const PrecisionPrior& prior, unsigned long seed) {
    Rng rng(seed);
    return run_chain(data, niw, prior, opts, rng);
  };
  const MixtureTraces sg_low =
      run(PrecisionPrior::stirling_gamma(StirlingGammaParams(0.73, 0.1, 800)), 11);
  const MixtureTraces sg_high =
      run(PrecisionPrior::stirling_gamma(StirlingGammaParams(2.6, 0.1, 800)), 12);
  const MixtureTraces fix_low = run(PrecisionPrior::fixed(1.0), 13);
  const MixtureTraces fix_high = run(PrecisionPrior::fixed(5.0), 14);

  const int mode_sg_low = histogram_mode(sg_low.k_trace);
  const int mode_sg_high = histogram_mode(sg_high.k_trace);
  const int mode_fix_low = histogram_mode(fix_low.k_trace);
  const int mode_fix_high = histogram_mode(fix_high.k_trace);
  const int support = 40;
  const double tv_sg = total_variation(k_histogram(sg_low.k_trace, support),
                                       k_histogram(sg_high.k_trace, support));
  const double tv_fix = total_variation(k_histogram(fix_low.k_trace, support),
                                        k_histogram(fix_high.k_trace, support));
  msg << "modes: sg " << mode_sg_low << "/" << mode_sg_high << ", fixed "
      << mode_fix_low << "/" << mode_fix_high << "; TV sg " << tv_sg << " vs fixed "
      << tv_fix;
  return mode_sg_low == 4 && mode_sg_high == 4 && mode_fix_low != mode_fix_high &&
         tv_sg < tv_fix;
}

// ------------------------------------------------------------ criterion 10

bool criterion_multinetwork(std::ostringstream& msg) {
  Rng data_rng(7);
  const SimulatedNetworks sim = simulate_networks(100, data_rng);
  MultiNetworkOptions opts;
  opts.iterations = 10000;
  opts.burn_in = 2000;
  opts.coclustering_thin = 100;
  const StirlingGammaParams prior(6.0, 0.3, 100);

  auto run = [&](const SbmPrecisionModel& model, unsigned long seed) {
    Rng rng(seed);
    return run_multinetwork_chain(sim.data, model, opts, rng, &sim.truth);
  };
  const MultiNetworkTraces pooled = run(SbmPrecisionModel::pooled(prior), 21);
  const MultiNetworkTraces indep = run(SbmPrecisionModel::independent(prior), 22);
  const MultiNetworkTraces fixed = run(SbmPrecisionModel::fixed(7.5), 23);

  bool modes_ok = true;
  msg << "pooled modes:";
  for (long s = 0; s < 5; ++s) {
    const int mode = histogram_mode(pooled.k_traces[static_cast<std::size_t>(s)]);
    msg << " " << mode;
    modes_ok = modes_ok && mode == 6;
  }
  // the implied expected cluster count of the fixed case, for the record
  const double ek_fixed = 7.5 * (digamma(107.5) - digamma(7.5));
  msg << "; ARI pooled " << pooled.mean_ari << " >= indep " << indep.mean_ari
      << " >= fixed " << fixed.mean_ari << "; E(K|alpha=7.5,n=100)=" << ek_fixed
      << "; pooled ESS " << pooled.ess[0];
  return modes_ok && pooled.mean_ari >= indep.mean_ari &&
         indep.mean_ari >= fixed.mean_ari && pooled.mean_ari >= 0.85;
}

// ------------------------------------------------------------ criterion 11

bool criterion_sbm_exactness(std::ostringstream& msg) {
  NetworkData data;
  data.add(BinaryMatrix{{0, 1, 1, 0}, {1, 0, 1, 0}, {1, 1, 0, 0}, {0, 0, 0, 0}});
  std::map<std::string, double> exact;
  double total = 0.0;
  for (const auto& labels : all_set_partitions(4)) {
    const Partition part = Partition::from_labels(labels);
    double loglik = 0.0;
    for (int h = 1; h <= part.k(); ++h)
      for (int hp = h; hp <= part.k(); ++hp) {
        long edges = 0, pairs = 0;
        for (int i = 0; i < 4; ++i)
          for (int j = i + 1; j < 4; ++j) {
            const int hi = std::min(part.labels[static_cast<std::size_t>(i)],
                                    part.labels[static_cast<std::size_t>(j)]);
            const int hj = std::max(part.labels[static_cast<std::size_t>(i)],
                                    part.labels[static_cast<std::size_t>(j)]);
            if (hi == h && hj == hp) {
              ++pairs;
              edges += data.networks[0][static_cast<std::size_t>(i)]
                                     [static_cast<std::size_t>(j)];
            }
          }
        loglik += log_collapsed_block_likelihood(edges, pairs);
      }
    const double w = std::exp(dp_log_eppf(1.0, part) + loglik);
    exact[part.serialize()] = w;
    total += w;
  }
  for (auto& [key, w] : exact) w /= total;

  MultiNetworkOptions opts;
  opts.iterations = 100000;
  opts.burn_in = 0;
  opts.store_partitions = true;
  opts.coclustering_thin = 100000;
  Rng rng(31);
  const MultiNetworkTraces tr =
      run_multinetwork_chain(data, SbmPrecisionModel::fixed(1.0), opts, rng);
  std::map<std::string, double> freq;
  for (const Partition& part : tr.partitions[0]) freq[part.serialize()] += 1.0;
  double tv = 0.0;
  for (const auto& [key, w] : exact) {
    const double f = freq.count(key) ? freq[key] / 100000.0 : 0.0;
    tv += std::abs(w - f);
  }
  tv *= 0.5;
  msg << "TV(empirical, enumeration) = " << tv;
  return tv < 0.02;
}

// ------------------------------------------------------------ criterion 12

bool criterion_heavy_tail(std::ostringstream& msg) {
  const StirlingGamma dist(StirlingGammaParams(5, 1, 100));
  bool tail_ok = true;
  double prev = kNegInf;
  for (double alpha = 10.0; alpha <= 200.0; alpha += 10.0) {
    const double v = alpha + dist.log_survival(alpha);
    if (v <= prev) tail_ok = false;
    prev = v;
  }
  const GammaParams g = gamma_limit_params(dist.params());
  auto log_gamma_pdf = [&](double x) {
    return g.shape * std::log(g.rate) - log_gamma(g.shape) +
           (g.shape - 1.0) * std::log(x) - g.rate * x;
  };
  bool gap_ok = true;
  prev = kNegInf;
  for (double alpha = 50.0; alpha <= 500.0; alpha += 25.0) {
    const double gap = dist.log_pdf(alpha) - log_gamma_pdf(alpha);
    if (gap <= prev) gap_ok = false;
    prev = gap;
  }
  msg << "e^a*(1-CDF) increasing on {10..200}: " << (tail_ok ? "yes" : "no")
      << "; log-density gap increasing on [50,500]: " << (gap_ok ? "yes" : "no");
  if (!tail_ok)
    msg << " | note: the tail hazard of Sg(5,1,100) is ~96/alpha, so "
           "e^alpha*(1-CDF) provably decreases until alpha ~ 96 and increases "
           "after; monotone growth over the full grid {10,...,200} is "
           "analytically impossible for these parameters (verified by two "
           "independent quadratures). The stated property holds on {100,...,200}.";
  return tail_ok && gap_ok;
}

}  // namespace

int main() {
  std::vector<Check> checks = {
      {"1 closed-form norm consts vs quadrature + anchors", criterion_norm_const},
      {"2 closed-form V coefficients vs quadrature", criterion_v_closed_form},
      {"3 sampler acceptance rates (published tables)", criterion_acceptance_rates},
      {"4 sampler exactness (two-sample KS vs inverse CDF)", criterion_sampler_exactness},
      {"5 cluster-count mean/variance at the reference size", criterion_reference_size_moments},
      {"6 limit laws: TV and KS decrease in m", criterion_limit_laws},
      {"7 conjugacy identities and posterior-mean formula", criterion_conjugacy},
      {"8 EPPF normalization by enumeration (n <= 8)", criterion_eppf_normalization},
      {"9 four-component mixture benchmark replication", criterion_figure1},
      {"10 multi-network SBM benchmark replication", criterion_multinetwork},
      {"11 tiny-scale SBM exactness by enumeration", criterion_sbm_exactness},
      {"12 heavy-tail properties", criterion_heavy_tail},
  };
  int failures = 0;
  for (const Check& check : checks) {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream msg;
    bool ok = false;
    try {
      ok = check.run(msg);
    } catch (const std::exception& err) {
      msg << "exception: " << err.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %s (%.1fs): %s\n", ok ? "PASS" : "FAIL",
                check.name.c_str(), secs, msg.str().c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures)
    std::printf("%d of %zu criteria failed\n", failures, checks.size());
  else
    std::printf("all %zu criteria passed\n", checks.size());
  return failures;
}
