#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergodia/bottleneck_graph.hpp"
#include "ergodia/channel_model.hpp"

namespace ergodia {

// K users whose cross-link INRs are drawn once and frozen.
struct DenseNetwork {
  int users = 0;
  double snr = 0.0;
  CrossDistribution cross = CrossDistribution::constant(0.0);
  std::vector<double> inr;  // K x K row-major, diagonal unused (0)

  double at(int r, int t) const {
    return inr[static_cast<std::size_t>(r) * static_cast<std::size_t>(users) + static_cast<std::size_t>(t)];
  }
};

DenseNetwork sample_dense_network(int users, double snr, const CrossDistribution& cross, Rng& rng);

// Largest INR whose strong-interference pair bound log2(1+snr+inr) stays within
// eps of log2(1+2snr): (1+2snr) 2^eps - 1 - snr.
double eps_bottleneck_ceiling(double snr, double eps);

// inr >= snr and log2(1+snr+inr) <= log2(1+2snr)+eps. Throws DomainError for eps <= 0.
bool is_eps_bottleneck(double inr, double snr, double eps);

// P[snr <= INR <= ceiling] under the distribution, in closed form.
double eps_bottleneck_probability(const CrossDistribution& cross, double snr, double eps);

// I^{[rt]} over 0-based (r, t); diagonal is always off.
class BottleneckIndicators {
 public:
  BottleneckIndicators(int users, std::vector<char> on) : users_(users), on_(std::move(on)) {}

  int users() const { return users_; }
  bool at(int r, int t) const {
    return on_[static_cast<std::size_t>(r) * static_cast<std::size_t>(users_) + static_cast<std::size_t>(t)] != 0;
  }
  std::size_t count() const;
  // Indicated links projected to unordered 1-based user pairs.
  std::set<Edge> edges() const;

 private:
  int users_;
  std::vector<char> on_;
};

BottleneckIndicators bottleneck_indicators(const DenseNetwork& net, double eps);

struct UvStatistics {
  double u = 0.0;
  double v = 0.0;
  double mean_u = 0.0;
  double mean_v = 0.0;
  double var_u = 0.0;
  double var_v = 0.0;
};

// U_K, V_K for the given rate vector, plus their analytic means and variances
// for link probability delta. Throws DomainError if a rate exceeds log2(1+snr).
UvStatistics uv_statistics(const DenseNetwork& net, double eps, std::span<const double> rates, double delta);
// As above with delta = eps_bottleneck_probability(net.cross, ...).
UvStatistics uv_statistics(const DenseNetwork& net, double eps, std::span<const double> rates);

// min(1, 4 (var_u + var_v) / (eps^2 delta^2)). Throws DomainError unless delta, eps > 0.
double chebyshev_bound(double delta, double eps, double var_u, double var_v);

struct ScalingSpec {
  std::vector<int> user_counts;
  CrossDistribution cross = CrossDistribution::constant(0.0);
  double snr = 0.0;
  double eps = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct TrialRecord {
  int users = 0;
  std::size_t trial = 0;
  double delta_hat = 0.0;  // fraction of cross links that are eps-bottlenecks
  double outer_per_user = 0.0;
  double inner_per_user = 0.0;
  double gap_per_user = 0.0;
  double u = 0.0;
  double v = 0.0;
};

struct ScalingRecord {
  int users = 0;
  std::size_t trials = 0;
  double delta_hat = 0.0;
  double delta = 0.0;  // analytic link probability
  double outer_per_user = 0.0;
  double inner_per_user = 0.0;
  double gap_per_user = 0.0;
  double freq_gap_gt_eps = 0.0;
  double freq_stderr = 0.0;
  double var_u = 0.0;
  double var_v = 0.0;
  double cheb_bound = 0.0;
  bool degenerate = false;
};

struct ScalingResult {
  std::vector<TrialRecord> trials;     // sorted by (K, trial)
  std::vector<ScalingRecord> summary;  // one per K, in input order
  std::vector<std::string> warnings;
};

ScalingResult scaling_experiment(const ScalingSpec& spec);

std::vector<std::string> trial_csv_header();
std::vector<std::string> trial_csv_cells(const TrialRecord& r);
std::vector<std::string> summary_csv_header();
std::vector<std::string> summary_csv_cells(const ScalingRecord& r);
nlohmann::json to_json(const TrialRecord& r);
nlohmann::json to_json(const ScalingRecord& r);

}  // namespace ergodia
