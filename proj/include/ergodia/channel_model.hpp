#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ergodia/rng.hpp"

namespace ergodia {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383279;

// Reduces an angle to [0, 2*pi).
double wrap_phase(double phase);

// Law of the cross-link interference-to-noise ratio INR^{[rt]}.
class CrossDistribution {
 public:
  enum class Kind { Constant, Uniform, PointMass };

  static CrossDistribution constant(double value);
  static CrossDistribution uniform(double lo, double hi);
  static CrossDistribution point_mass(std::vector<double> values, std::vector<double> weights);

  Kind kind() const { return kind_; }
  // Constant: {value}. Uniform: {lo, hi}. PointMass: atom locations.
  const std::vector<double>& values() const { return values_; }
  // PointMass only; normalized to sum to one.
  const std::vector<double>& weights() const { return weights_; }

  double sample(Rng& rng) const;
  double mean() const;
  // P[lo <= X <= hi].
  double mass(double lo, double hi) const;

  bool operator==(const CrossDistribution&) const = default;

 private:
  CrossDistribution(Kind kind, std::vector<double> values, std::vector<double> weights);

  Kind kind_;
  std::vector<double> values_;
  std::vector<double> weights_;
};

std::string to_string(CrossDistribution::Kind kind);

struct NetworkConfig {
  int users = 0;
  double snr = 0.0;
  CrossDistribution cross = CrossDistribution::constant(0.0);
  int phase_bins = 2;
  std::uint64_t seed = 0;

  // Throws ConfigError on K < 2, snr <= 0 or an odd / non-positive bin count.
  void validate() const;

  bool operator==(const NetworkConfig&) const = default;
};

// One channel use: K x K link strengths (amplitudes) and phases, row index is
// the receiver, column index the transmitter. Indices are 0-based.
class ChannelState {
 public:
  ChannelState(int users, std::vector<double> strengths, std::vector<double> phases);

  int users() const { return users_; }
  double strength(int r, int t) const { return strengths_[index(r, t)]; }
  double phase(int r, int t) const { return phases_[index(r, t)]; }
  std::complex<double> coefficient(int r, int t) const {
    return std::polar(strength(r, t), phase(r, t));
  }
  std::span<const double> strengths() const { return strengths_; }
  std::span<const double> phases() const { return phases_; }

 private:
  std::size_t index(int r, int t) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(users_) + static_cast<std::size_t>(t);
  }

  int users_;
  std::vector<double> strengths_;
  std::vector<double> phases_;
};

// Phase bin indices of a state, one per link, each in [0, bins).
class QuantizedState {
 public:
  QuantizedState(int users, int bins, std::vector<int> values);

  int users() const { return users_; }
  int bins() const { return bins_; }
  int bin(int r, int t) const {
    return values_[static_cast<std::size_t>(r) * static_cast<std::size_t>(users_) + static_cast<std::size_t>(t)];
  }
  std::span<const int> values() const { return values_; }

  bool operator==(const QuantizedState&) const = default;

 private:
  int users_;
  int bins_;
  std::vector<int> values_;
};

ChannelState sample_state(const NetworkConfig& config, Rng& rng);

// Same strengths, off-diagonal phases advanced by pi.
ChannelState complementary_state(const ChannelState& state);

// Rotates every receiver's row by minus its direct-link phase, so the direct
// links become real and positive. This is what a receiver that knows its own
// channel sees after derotation; cross-link phases become relative phases.
ChannelState receiver_referenced(const ChannelState& state);

QuantizedState quantize(const ChannelState& state, int bins);

// Off-diagonal bins shifted by bins/2 (mod bins). Throws ConfigError on odd bins.
QuantizedState complement_key(const QuantizedState& q);

}  // namespace ergodia
