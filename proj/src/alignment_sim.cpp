#include "ergodia/alignment_sim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "ergodia/error.hpp"
#include "ergodia/format.hpp"
#include "ergodia/parallel.hpp"

namespace ergodia {

namespace {

std::vector<int> off_diagonal_key(const QuantizedState& q) {
  const int k = q.users();
  std::vector<int> key;
  key.reserve(static_cast<std::size_t>(k * (k - 1)));
  for (int r = 0; r < k; ++r)
    for (int t = 0; t < k; ++t)
      if (r != t) key.push_back(q.bin(r, t));
  return key;
}

// Running sums for one simulation run.
struct Accumulator {
  explicit Accumulator(int users)
      : desired(static_cast<std::size_t>(users), 0.0), residual(static_cast<std::size_t>(users), 0.0) {}

  void add(const ChannelState& a, const ChannelState& b, int bins) {
    const PairMeasurement m = measure_pair(a, b);
    const std::vector<double> bound = residual_bound(a, b, bins);
    for (std::size_t k = 0; k < desired.size(); ++k) {
      if (m.residual[k] > bound[k] * (1.0 + 1e-9) + 1e-9)
        throw std::logic_error("residual interference exceeds the quantization bound");
      desired[k] += m.desired[k];
      residual[k] += m.residual[k];
    }
    ++pairs;
  }

  std::vector<double> desired;
  std::vector<double> residual;
  std::size_t pairs = 0;
};

void finalize(MatchStats& stats, const std::vector<double>& desired_sum,
              const std::vector<double>& residual_sum) {
  const auto k = static_cast<std::size_t>(stats.users);
  stats.matched_fraction =
      stats.n_uses == 0 ? 0.0 : 2.0 * static_cast<double>(stats.n_matched_pairs) / static_cast<double>(stats.n_uses);
  stats.desired_power.assign(k, 0.0);
  stats.residual_interference_power.assign(k, 0.0);
  stats.per_user_sinr.assign(k, 0.0);
  stats.per_user_rate.assign(k, 0.0);
  if (stats.n_matched_pairs == 0) return;
  const double pairs = static_cast<double>(stats.n_matched_pairs);
  for (std::size_t i = 0; i < k; ++i) {
    stats.desired_power[i] = desired_sum[i] / pairs;
    stats.residual_interference_power[i] = residual_sum[i] / pairs;
    // Two independent unit-variance noise samples are added by the receiver.
    stats.per_user_sinr[i] = stats.desired_power[i] / (2.0 + stats.residual_interference_power[i]);
    stats.per_user_rate[i] = stats.matched_fraction * 0.5 * std::log2(1.0 + stats.per_user_sinr[i]);
  }
}

MatchStats simulate(const NetworkConfig& config, std::size_t uses, PairingMode mode, Rng& rng) {
  config.validate();
  if (uses == 0) throw EmptyStatsError("run_alignment needs at least one channel use");

  MatchStats stats;
  stats.users = config.users;
  stats.snr = config.snr;
  stats.phase_bins = config.phase_bins;
  stats.seed = config.seed;
  stats.mode = mode;
  stats.n_uses = uses;

  Accumulator acc(config.users);
  if (mode == PairingMode::ExactComplement) {
    for (std::size_t i = 0; i + 1 < uses; i += 2) {
      const ChannelState s = sample_state(config, rng);
      acc.add(s, complementary_state(s), 0);
    }
    if (uses % 2 == 1) (void)sample_state(config, rng);
  } else {
    ComplementPairer pairer;
    std::unordered_map<std::size_t, ChannelState> waiting;
    for (std::size_t n = 0; n < uses; ++n) {
      ChannelState s = receiver_referenced(sample_state(config, rng));
      const QuantizedState q = quantize(s, config.phase_bins);
      if (auto partner = pairer.offer(q, n)) {
        auto it = waiting.find(*partner);
        acc.add(it->second, s, config.phase_bins);
        waiting.erase(it);
      } else {
        waiting.emplace(n, std::move(s));
      }
    }
  }
  stats.n_matched_pairs = acc.pairs;
  finalize(stats, acc.desired, acc.residual);
  return stats;
}

}  // namespace

std::string to_string(PairingMode mode) {
  return mode == PairingMode::Quantized ? "quantized" : "exact";
}

PairingMode pairing_mode_from_string(const std::string& name) {
  if (name == "quantized") return PairingMode::Quantized;
  if (name == "exact") return PairingMode::ExactComplement;
  throw ConfigError("pairing mode must be 'quantized' or 'exact'");
}

double MatchStats::mean_rate() const {
  if (per_user_rate.empty()) return 0.0;
  double s = 0.0;
  for (double r : per_user_rate) s += r;
  return s / static_cast<double>(per_user_rate.size());
}

std::size_t ComplementPairer::KeyHash::operator()(const std::vector<int>& key) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (int v : key) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::optional<std::size_t> ComplementPairer::offer(const QuantizedState& q, std::size_t index) {
  auto partner_queue = queues_.find(off_diagonal_key(complement_key(q)));
  if (partner_queue != queues_.end() && !partner_queue->second.empty()) {
    const std::size_t partner = partner_queue->second.front();
    partner_queue->second.pop_front();
    if (partner_queue->second.empty()) queues_.erase(partner_queue);
    return partner;
  }
  queues_[off_diagonal_key(q)].push_back(index);
  return std::nullopt;
}

std::vector<std::size_t> ComplementPairer::waiting() const {
  std::vector<std::size_t> out;
  for (const auto& [key, queue] : queues_) out.insert(out.end(), queue.begin(), queue.end());
  std::sort(out.begin(), out.end());
  return out;
}

PairingResult pair_states(std::span<const QuantizedState> states) {
  if (!states.empty()) {
    for (const auto& q : states)
      if (q.bins() != states.front().bins()) throw ConfigError("all states must share the bin count");
  }
  PairingResult result;
  ComplementPairer pairer;
  for (std::size_t i = 0; i < states.size(); ++i)
    if (auto partner = pairer.offer(states[i], i)) result.pairs.emplace_back(*partner, i);
  result.unmatched = pairer.waiting();
  return result;
}

PairMeasurement measure_pair(const ChannelState& first, const ChannelState& second) {
  const int k = first.users();
  if (second.users() != k) throw ConfigError("paired states differ in K");
  PairMeasurement m;
  m.desired.resize(static_cast<std::size_t>(k));
  m.residual.resize(static_cast<std::size_t>(k));
  for (int r = 0; r < k; ++r) {
    // Receiver r derotates each use by its known direct-link phase, then adds.
    const std::complex<double> undo1 = std::polar(1.0, -first.phase(r, r));
    const std::complex<double> undo2 = std::polar(1.0, -second.phase(r, r));
    m.desired[static_cast<std::size_t>(r)] =
        std::norm(first.coefficient(r, r) * undo1 + second.coefficient(r, r) * undo2);
    double interference = 0.0;
    for (int t = 0; t < k; ++t) {
      if (t == r) continue;
      interference += std::norm(first.coefficient(r, t) * undo1 + second.coefficient(r, t) * undo2);
    }
    m.residual[static_cast<std::size_t>(r)] = interference;
  }
  return m;
}

std::vector<double> residual_bound(const ChannelState& first, const ChannelState& second, int bins) {
  const int k = first.users();
  const double max_error = bins > 0 ? kTwoPi / bins : 0.0;
  std::vector<double> bound(static_cast<std::size_t>(k), 0.0);
  for (int r = 0; r < k; ++r) {
    for (int t = 0; t < k; ++t) {
      if (t == r) continue;
      const double a1 = first.strength(r, t);
      const double a2 = second.strength(r, t);
      const double term = std::abs(a1 - a2) + a2 * max_error;
      bound[static_cast<std::size_t>(r)] += term * term;
    }
  }
  return bound;
}

MatchStats run_alignment(const NetworkConfig& config, std::size_t uses, PairingMode mode) {
  Rng rng = Rng::substream(config.seed, {0});
  return simulate(config, uses, mode, rng);
}

std::vector<MatchStats> run_alignment_trials(const NetworkConfig& config, std::size_t uses,
                                             std::size_t trials, PairingMode mode, unsigned workers) {
  config.validate();
  if (trials == 0) throw EmptyStatsError("at least one trial is required");
  std::vector<MatchStats> out(trials);
  parallel_for(trials, workers, [&](std::size_t trial) {
    Rng rng = Rng::substream(config.seed, {static_cast<std::uint64_t>(trial)});
    out[trial] = simulate(config, uses, mode, rng);
  });
  return out;
}

MatchStats merge_stats(std::span<const MatchStats> trials) {
  if (trials.empty()) throw EmptyStatsError("no trials to merge");
  MatchStats merged;
  const MatchStats& first = trials.front();
  merged.users = first.users;
  merged.snr = first.snr;
  merged.phase_bins = first.phase_bins;
  merged.seed = first.seed;
  merged.mode = first.mode;
  const auto k = static_cast<std::size_t>(first.users);
  std::vector<double> desired(k, 0.0);
  std::vector<double> residual(k, 0.0);
  for (const auto& t : trials) {
    if (t.users != first.users) throw ConfigError("cannot merge trials with different K");
    merged.n_uses += t.n_uses;
    merged.n_matched_pairs += t.n_matched_pairs;
    if (t.n_matched_pairs == 0) continue;
    for (std::size_t i = 0; i < k; ++i) {
      desired[i] += t.desired_power[i] * static_cast<double>(t.n_matched_pairs);
      residual[i] += t.residual_interference_power[i] * static_cast<double>(t.n_matched_pairs);
    }
  }
  finalize(merged, desired, residual);
  return merged;
}

double theoretical_rate(double snr) {
  if (snr < 0.0 || std::isnan(snr)) throw DomainError("snr must be non-negative");
  return 0.5 * std::log2(1.0 + 2.0 * snr);
}

nlohmann::json to_json(const MatchStats& stats) {
  return {{"K", stats.users},
          {"snr", stats.snr},
          {"B", stats.phase_bins},
          {"seed", stats.seed},
          {"mode", to_string(stats.mode)},
          {"n_uses", stats.n_uses},
          {"n_matched_pairs", stats.n_matched_pairs},
          {"matched_fraction", stats.matched_fraction},
          {"desired_power", stats.desired_power},
          {"residual_interference_power", stats.residual_interference_power},
          {"per_user_sinr", stats.per_user_sinr},
          {"per_user_rate", stats.per_user_rate},
          {"theory_rate", theoretical_rate(stats.snr)}};
}

std::vector<std::string> csv_header(int users) {
  std::vector<std::string> h{"K", "snr", "B", "N", "matched_fraction"};
  for (int k = 1; k <= users; ++k) h.push_back("rate_user_" + std::to_string(k));
  h.emplace_back("theory_rate");
  return h;
}

std::vector<std::string> csv_cells(const MatchStats& stats) {
  std::vector<std::string> c{std::to_string(stats.users), format_double(stats.snr),
                             std::to_string(stats.phase_bins), std::to_string(stats.n_uses),
                             format_double(stats.matched_fraction)};
  for (double r : stats.per_user_rate) c.push_back(format_double(r));
  c.push_back(format_double(theoretical_rate(stats.snr)));
  return c;
}

}  // namespace ergodia
