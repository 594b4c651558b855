#include "ergodia/dense_scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ergodia/alignment_sim.hpp"
#include "ergodia/capacity_bounds.hpp"
#include "ergodia/error.hpp"
#include "ergodia/format.hpp"
#include "ergodia/parallel.hpp"

namespace ergodia {

namespace {

void require_positive_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be a finite positive number");
}

}  // namespace

DenseNetwork sample_dense_network(int users, double snr, const CrossDistribution& cross, Rng& rng) {
  if (users < 2) throw ConfigError("K must be at least 2");
  if (!(snr > 0.0)) throw ConfigError("snr must be positive");
  DenseNetwork net;
  net.users = users;
  net.snr = snr;
  net.cross = cross;
  net.inr.assign(static_cast<std::size_t>(users) * static_cast<std::size_t>(users), 0.0);
  for (int r = 0; r < users; ++r)
    for (int t = 0; t < users; ++t)
      if (r != t) net.inr[static_cast<std::size_t>(r * users + t)] = cross.sample(rng);
  return net;
}

double eps_bottleneck_ceiling(double snr, double eps) {
  return (1.0 + 2.0 * snr) * std::exp2(eps) - 1.0 - snr;
}

bool is_eps_bottleneck(double inr, double snr, double eps) {
  require_positive_eps(eps);
  if (inr < 0.0 || snr < 0.0) throw DomainError("inr and snr must be non-negative");
  return inr >= snr && std::log2(1.0 + snr + inr) <= std::log2(1.0 + 2.0 * snr) + eps;
}

double eps_bottleneck_probability(const CrossDistribution& cross, double snr, double eps) {
  require_positive_eps(eps);
  return cross.mass(snr, eps_bottleneck_ceiling(snr, eps));
}

std::size_t BottleneckIndicators::count() const {
  return static_cast<std::size_t>(std::count(on_.begin(), on_.end(), char{1}));
}

std::set<Edge> BottleneckIndicators::edges() const {
  std::set<Edge> out;
  for (int r = 0; r < users_; ++r)
    for (int t = 0; t < users_; ++t)
      if (r != t && at(r, t)) out.emplace(std::min(r, t) + 1, std::max(r, t) + 1);
  return out;
}

BottleneckIndicators bottleneck_indicators(const DenseNetwork& net, double eps) {
  const int k = net.users;
  std::vector<char> on(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0);
  for (int r = 0; r < k; ++r)
    for (int t = 0; t < k; ++t)
      if (r != t && is_eps_bottleneck(net.at(r, t), net.snr, eps)) on[static_cast<std::size_t>(r * k + t)] = 1;
  return BottleneckIndicators(k, std::move(on));
}

UvStatistics uv_statistics(const DenseNetwork& net, double eps, std::span<const double> rates, double delta) {
  const int k = net.users;
  if (rates.size() != static_cast<std::size_t>(k)) throw DomainError("rate vector must have K entries");
  const double cap = std::log2(1.0 + net.snr) + 1e-9;
  for (double r : rates)
    if (r > cap || r < 0.0) throw DomainError("rates must lie in [0, log2(1+snr)]");
  if (delta < 0.0 || delta > 1.0) throw DomainError("delta must be a probability");

  const double pair_limit = std::log2(1.0 + 2.0 * net.snr) + eps;
  const BottleneckIndicators ind = bottleneck_indicators(net, eps);
  const double links = static_cast<double>(k) * static_cast<double>(k - 1);

  UvStatistics s;
  double pair_square_sum = 0.0;
  double rate_sum = 0.0;
  bool constraints_hold = true;
  for (int r = 0; r < k; ++r) {
    rate_sum += rates[static_cast<std::size_t>(r)];
    for (int t = 0; t < k; ++t) {
      if (r == t) continue;
      const double pair = rates[static_cast<std::size_t>(r)] + rates[static_cast<std::size_t>(t)];
      pair_square_sum += pair * pair;
      if (ind.at(r, t)) {
        s.u += pair_limit;
        s.v += pair;
        if (pair > pair_limit + 1e-12) constraints_hold = false;
      }
    }
  }
  s.u /= links;
  s.v /= links;
  if (constraints_hold && s.v > s.u + 1e-12) throw std::logic_error("V_K exceeds U_K with every pair constraint met");

  s.mean_u = delta * pair_limit;
  s.mean_v = 2.0 * delta * rate_sum / k;
  const double half = 0.5 * std::log2(1.0 + 2.0 * net.snr) + eps;
  s.var_u = delta * (1.0 - delta) / links * half * half;
  s.var_v = delta * (1.0 - delta) / (links * links) * pair_square_sum;
  return s;
}

UvStatistics uv_statistics(const DenseNetwork& net, double eps, std::span<const double> rates) {
  return uv_statistics(net, eps, rates, eps_bottleneck_probability(net.cross, net.snr, eps));
}

double chebyshev_bound(double delta, double eps, double var_u, double var_v) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  require_positive_eps(eps);
  if (var_u < 0.0 || var_v < 0.0) throw DomainError("variances must be non-negative");
  return std::min(1.0, 4.0 * (var_u + var_v) / (eps * eps * delta * delta));
}

ScalingResult scaling_experiment(const ScalingSpec& spec) {
  require_positive_eps(spec.eps);
  if (!(spec.snr > 0.0)) throw ConfigError("snr must be positive");
  if (spec.trials < 1) throw ConfigError("at least one trial is required");
  if (spec.user_counts.empty()) throw ConfigError("at least one K is required");
  for (int k : spec.user_counts)
    if (k < 2) throw ConfigError("every K must be at least 2");

  const double inner = theoretical_rate(spec.snr);
  const double delta = eps_bottleneck_probability(spec.cross, spec.snr, spec.eps);

  ScalingResult result;
  const std::size_t per_k = spec.trials;
  result.trials.resize(spec.user_counts.size() * per_k);
  parallel_for(result.trials.size(), spec.workers, [&](std::size_t job) {
    const int k = spec.user_counts[job / per_k];
    const std::size_t trial = job % per_k;
    Rng rng = Rng::substream(spec.seed, {static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(trial)});
    const DenseNetwork net = sample_dense_network(k, spec.snr, spec.cross, rng);
    const BottleneckIndicators ind = bottleneck_indicators(net, spec.eps);
    const std::vector<double> ia_rates(static_cast<std::size_t>(k), inner);
    const UvStatistics uv = uv_statistics(net, spec.eps, ia_rates, delta);

    TrialRecord& rec = result.trials[job];
    rec.users = k;
    rec.trial = trial;
    rec.delta_hat = static_cast<double>(ind.count()) / (static_cast<double>(k) * (k - 1));
    rec.outer_per_user = lp_outer_bound(k, spec.snr, spec.eps, ind.edges()) / k;
    rec.inner_per_user = inner;
    rec.gap_per_user = rec.outer_per_user - inner;
    rec.u = uv.u;
    rec.v = uv.v;
    if (rec.gap_per_user < -1e-9) throw std::logic_error("outer bound fell below the achievable rate");
  });

  for (std::size_t ki = 0; ki < spec.user_counts.size(); ++ki) {
    const int k = spec.user_counts[ki];
    ScalingRecord s;
    s.users = k;
    s.trials = per_k;
    s.delta = delta;
    s.inner_per_user = inner;
    std::size_t exceed = 0;
    for (std::size_t i = 0; i < per_k; ++i) {
      const TrialRecord& t = result.trials[ki * per_k + i];
      s.delta_hat += t.delta_hat;
      s.outer_per_user += t.outer_per_user;
      s.gap_per_user += t.gap_per_user;
      if (t.gap_per_user > spec.eps) ++exceed;
    }
    const double n = static_cast<double>(per_k);
    s.delta_hat /= n;
    s.outer_per_user /= n;
    s.gap_per_user /= n;
    s.freq_gap_gt_eps = static_cast<double>(exceed) / n;
    s.freq_stderr = std::sqrt(s.freq_gap_gt_eps * (1.0 - s.freq_gap_gt_eps) / n);

    const double links = static_cast<double>(k) * (k - 1);
    const double half = 0.5 * std::log2(1.0 + 2.0 * spec.snr) + spec.eps;
    s.var_u = delta * (1.0 - delta) / links * half * half;
    s.var_v = delta * (1.0 - delta) / links * (2.0 * inner) * (2.0 * inner);
    if (delta > 0.0) {
      s.cheb_bound = chebyshev_bound(delta, spec.eps, s.var_u, s.var_v);
    } else {
      s.degenerate = true;
      s.cheb_bound = 1.0;
      result.warnings.push_back("K=" + std::to_string(k) +
                                ": the cross distribution puts no mass on eps-bottleneck links (delta = 0)");
    }
    result.summary.push_back(s);
  }
  return result;
}

std::vector<std::string> trial_csv_header() {
  return {"K", "trial", "delta_hat", "outer_per_user", "inner_per_user", "gap_per_user", "U_K", "V_K"};
}

std::vector<std::string> trial_csv_cells(const TrialRecord& r) {
  return {std::to_string(r.users),          std::to_string(r.trial),          format_double(r.delta_hat),
          format_double(r.outer_per_user), format_double(r.inner_per_user), format_double(r.gap_per_user),
          format_double(r.u),              format_double(r.v)};
}

std::vector<std::string> summary_csv_header() {
  return {"K",     "trials",  "delta_hat", "outer_per_user_mean", "gap_mean", "freq_gap_gt_eps", "cheb_bound",
          "delta", "sigma2_u", "sigma2_v", "degenerate"};
}

std::vector<std::string> summary_csv_cells(const ScalingRecord& r) {
  return {std::to_string(r.users),      std::to_string(r.trials),          format_double(r.delta_hat),
          format_double(r.outer_per_user), format_double(r.gap_per_user), format_double(r.freq_gap_gt_eps),
          format_double(r.cheb_bound), format_double(r.delta),            format_double(r.var_u),
          format_double(r.var_v),      r.degenerate ? "1" : "0"};
}

nlohmann::json to_json(const TrialRecord& r) {
  return {{"K", r.users},
          {"trial", r.trial},
          {"delta_hat", r.delta_hat},
          {"outer_per_user", r.outer_per_user},
          {"inner_per_user", r.inner_per_user},
          {"gap_per_user", r.gap_per_user},
          {"U_K", r.u},
          {"V_K", r.v}};
}

nlohmann::json to_json(const ScalingRecord& r) {
  return {{"K", r.users},
          {"trials", r.trials},
          {"delta_hat", r.delta_hat},
          {"delta", r.delta},
          {"outer_per_user_mean", r.outer_per_user},
          {"inner_per_user", r.inner_per_user},
          {"gap_mean", r.gap_per_user},
          {"freq_gap_gt_eps", r.freq_gap_gt_eps},
          {"freq_stderr", r.freq_stderr},
          {"sigma2_u", r.var_u},
          {"sigma2_v", r.var_v},
          {"cheb_bound", r.cheb_bound},
          {"degenerate", r.degenerate}};
}

}  // namespace ergodia
