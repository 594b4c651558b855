#include "ergodia/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ergodia/error.hpp"

namespace ergodia {

double wrap_phase(double phase) {
  double w = std::fmod(phase, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

CrossDistribution::CrossDistribution(Kind kind, std::vector<double> values, std::vector<double> weights)
    : kind_(kind), values_(std::move(values)), weights_(std::move(weights)) {}

CrossDistribution CrossDistribution::constant(double value) {
  if (!std::isfinite(value) || value < 0.0)
    throw ConfigError("constant cross distribution needs a finite non-negative value");
  return CrossDistribution(Kind::Constant, {value}, {});
}

CrossDistribution CrossDistribution::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("uniform bounds must be finite");
  if (hi < lo) throw ConfigError("uniform cross distribution needs lo <= hi");
  if (lo < 0.0) throw ConfigError("uniform cross distribution support must be non-negative");
  return CrossDistribution(Kind::Uniform, {lo, hi}, {});
}

CrossDistribution CrossDistribution::point_mass(std::vector<double> values, std::vector<double> weights) {
  if (values.empty()) throw ConfigError("point-mass cross distribution needs at least one atom");
  if (values.size() != weights.size()) throw ConfigError("point-mass values and weights differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0)
      throw ConfigError("point-mass atoms must be finite and non-negative");
    if (!std::isfinite(weights[i]) || weights[i] < 0.0)
      throw ConfigError("point-mass weights must be finite and non-negative");
    total += weights[i];
  }
  if (total <= 0.0) throw ConfigError("point-mass weights sum to zero");
  for (double& w : weights) w /= total;
  return CrossDistribution(Kind::PointMass, std::move(values), std::move(weights));
}

double CrossDistribution::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::Constant:
      return values_[0];
    case Kind::Uniform:
      return rng.uniform(values_[0], values_[1]);
    case Kind::PointMass: {
      double u = rng.uniform01();
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
        acc += weights_[i];
        if (u < acc) return values_[i];
      }
      return values_.back();
    }
  }
  return 0.0;
}

double CrossDistribution::mean() const {
  switch (kind_) {
    case Kind::Constant:
      return values_[0];
    case Kind::Uniform:
      return 0.5 * (values_[0] + values_[1]);
    case Kind::PointMass:
      return std::inner_product(values_.begin(), values_.end(), weights_.begin(), 0.0);
  }
  return 0.0;
}

double CrossDistribution::mass(double lo, double hi) const {
  if (hi < lo) return 0.0;
  switch (kind_) {
    case Kind::Constant:
      return (values_[0] >= lo && values_[0] <= hi) ? 1.0 : 0.0;
    case Kind::Uniform: {
      const double a = values_[0];
      const double b = values_[1];
      if (b == a) return (a >= lo && a <= hi) ? 1.0 : 0.0;
      const double overlap = std::min(hi, b) - std::max(lo, a);
      return overlap > 0.0 ? overlap / (b - a) : 0.0;
    }
    case Kind::PointMass: {
      double m = 0.0;
      for (std::size_t i = 0; i < values_.size(); ++i)
        if (values_[i] >= lo && values_[i] <= hi) m += weights_[i];
      return m;
    }
  }
  return 0.0;
}

std::string to_string(CrossDistribution::Kind kind) {
  switch (kind) {
    case CrossDistribution::Kind::Constant:
      return "constant";
    case CrossDistribution::Kind::Uniform:
      return "uniform";
    case CrossDistribution::Kind::PointMass:
      return "point_mass";
  }
  return "unknown";
}

void NetworkConfig::validate() const {
  if (users < 2) throw ConfigError("K must be at least 2");
  if (!(snr > 0.0) || !std::isfinite(snr)) throw ConfigError("snr must be a finite positive number");
  if (phase_bins < 2) throw ConfigError("phase_bins must be at least 2");
  if (phase_bins % 2 != 0) throw ConfigError("phase_bins must be even");
}

ChannelState::ChannelState(int users, std::vector<double> strengths, std::vector<double> phases)
    : users_(users), strengths_(std::move(strengths)), phases_(std::move(phases)) {
  const auto cells = static_cast<std::size_t>(users) * static_cast<std::size_t>(users);
  if (users < 1 || strengths_.size() != cells || phases_.size() != cells)
    throw ConfigError("channel state matrices must be K x K");
  for (double h : strengths_)
    if (!std::isfinite(h) || h < 0.0) throw ConfigError("channel strengths must be finite and non-negative");
  for (double& p : phases_) {
    if (!std::isfinite(p)) throw ConfigError("channel phases must be finite");
    p = wrap_phase(p);
  }
}

QuantizedState::QuantizedState(int users, int bins, std::vector<int> values)
    : users_(users), bins_(bins), values_(std::move(values)) {
  if (bins < 1) throw ConfigError("bin count must be positive");
  if (values_.size() != static_cast<std::size_t>(users) * static_cast<std::size_t>(users))
    throw ConfigError("quantized state must be K x K");
  for (int v : values_)
    if (v < 0 || v >= bins) throw ConfigError("quantized bin out of range");
}

ChannelState sample_state(const NetworkConfig& config, Rng& rng) {
  const int k = config.users;
  const auto cells = static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
  std::vector<double> strengths(cells);
  std::vector<double> phases(cells);
  const double direct = std::sqrt(config.snr);
  for (int r = 0; r < k; ++r) {
    for (int t = 0; t < k; ++t) {
      const auto i = static_cast<std::size_t>(r * k + t);
      strengths[i] = (r == t) ? direct : std::sqrt(config.cross.sample(rng));
      phases[i] = kTwoPi * rng.uniform01();
    }
  }
  return ChannelState(k, std::move(strengths), std::move(phases));
}

ChannelState complementary_state(const ChannelState& state) {
  const int k = state.users();
  std::vector<double> phases(state.phases().begin(), state.phases().end());
  for (int r = 0; r < k; ++r)
    for (int t = 0; t < k; ++t)
      if (r != t) phases[static_cast<std::size_t>(r * k + t)] += kPi;
  return ChannelState(k, {state.strengths().begin(), state.strengths().end()}, std::move(phases));
}

ChannelState receiver_referenced(const ChannelState& state) {
  const int k = state.users();
  std::vector<double> phases(state.phases().begin(), state.phases().end());
  for (int r = 0; r < k; ++r) {
    const double direct = state.phase(r, r);
    for (int t = 0; t < k; ++t) phases[static_cast<std::size_t>(r * k + t)] -= direct;
    phases[static_cast<std::size_t>(r * k + r)] = 0.0;
  }
  return ChannelState(k, {state.strengths().begin(), state.strengths().end()}, std::move(phases));
}

QuantizedState quantize(const ChannelState& state, int bins) {
  if (bins < 2 || bins % 2 != 0) throw ConfigError("phase_bins must be even");
  std::vector<int> values;
  values.reserve(state.phases().size());
  for (double p : state.phases()) {
    int b = static_cast<int>(std::floor(p * bins / kTwoPi));
    values.push_back(std::clamp(b, 0, bins - 1));
  }
  return QuantizedState(state.users(), bins, std::move(values));
}

QuantizedState complement_key(const QuantizedState& q) {
  const int bins = q.bins();
  if (bins % 2 != 0) throw ConfigError("phase_bins must be even");
  const int k = q.users();
  std::vector<int> values(q.values().begin(), q.values().end());
  for (int r = 0; r < k; ++r)
    for (int t = 0; t < k; ++t)
      if (r != t) {
        int& v = values[static_cast<std::size_t>(r * k + t)];
        v = (v + bins / 2) % bins;
      }
  return QuantizedState(k, bins, std::move(values));
}

}  // namespace ergodia
