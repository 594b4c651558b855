#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ergodia/channel_model.hpp"

namespace ergodia {

enum class PairingMode {
  // Pair states whose quantized receiver-referenced cross phases are complementary.
  Quantized,
  // Pair every drawn state with its exact complementary_state (the B -> infinity limit).
  ExactComplement,
};

std::string to_string(PairingMode mode);
PairingMode pairing_mode_from_string(const std::string& name);

struct MatchStats {
  int users = 0;
  double snr = 0.0;
  int phase_bins = 0;
  std::uint64_t seed = 0;
  PairingMode mode = PairingMode::Quantized;

  std::size_t n_uses = 0;
  std::size_t n_matched_pairs = 0;
  double matched_fraction = 0.0;
  // Per user, averaged over matched pairs.
  std::vector<double> desired_power;
  std::vector<double> residual_interference_power;
  std::vector<double> per_user_sinr;
  std::vector<double> per_user_rate;

  double mean_rate() const;
};

struct PairingResult {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> unmatched;
};

// Online FIFO matcher over quantized off-diagonal keys. A state offered with
// key q is paired with the oldest waiting state whose key is complement_key(q),
// otherwise it waits.
class ComplementPairer {
 public:
  std::optional<std::size_t> offer(const QuantizedState& q, std::size_t index);
  // Indices still waiting, ascending.
  std::vector<std::size_t> waiting() const;

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<int>& key) const noexcept;
  };
  std::unordered_map<std::vector<int>, std::deque<std::size_t>, KeyHash> queues_;
};

PairingResult pair_states(std::span<const QuantizedState> states);

// Residual interference a receiver sees after derotating and adding the two
// uses of a matched pair, for every receiver.
struct PairMeasurement {
  std::vector<double> desired;
  std::vector<double> residual;
};
PairMeasurement measure_pair(const ChannelState& first, const ChannelState& second);

// Upper bound on each receiver's residual for a pair whose quantized keys are
// complementary with the given bin count: sum_t (|a1 - a2| + a2 * 2pi/B)^2.
// For equal strengths this is sum_t INR^{[kt]} (2pi/B)^2. bins = 0 means an
// exact complement (zero phase error).
std::vector<double> residual_bound(const ChannelState& first, const ChannelState& second, int bins);

MatchStats run_alignment(const NetworkConfig& config, std::size_t uses,
                         PairingMode mode = PairingMode::Quantized);

// Independent trials on seeded substreams, executed by up to `workers` threads.
// Output order is by trial index.
std::vector<MatchStats> run_alignment_trials(const NetworkConfig& config, std::size_t uses,
                                             std::size_t trials, PairingMode mode, unsigned workers = 1);

// Pools trial counts and per-pair power sums, then recomputes SINR and rate.
MatchStats merge_stats(std::span<const MatchStats> trials);

// 0.5 * log2(1 + 2 snr).
double theoretical_rate(double snr);

nlohmann::json to_json(const MatchStats& stats);
std::vector<std::string> csv_header(int users);
std::vector<std::string> csv_cells(const MatchStats& stats);

}  // namespace ergodia
