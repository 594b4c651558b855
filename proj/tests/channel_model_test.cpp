#include "ergodia/channel_model.hpp"

#include <cmath>
#include <complex>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "ergodia/config_io.hpp"
#include "ergodia/error.hpp"

namespace ergodia {
namespace {

NetworkConfig make_config(int users, double snr, CrossDistribution cross, int bins = 8, std::uint64_t seed = 1) {
  NetworkConfig c;
  c.users = users;
  c.snr = snr;
  c.cross = std::move(cross);
  c.phase_bins = bins;
  c.seed = seed;
  return c;
}

double circular_distance(double a, double b) {
  const double d = std::fmod(std::fabs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

TEST(SampleState, ConstantCrossEqualToSnrGivesUniformStrengths) {
  Rng rng(3);
  const auto s = sample_state(make_config(3, 10.0, CrossDistribution::constant(10.0)), rng);
  for (int r = 0; r < 3; ++r)
    for (int t = 0; t < 3; ++t) EXPECT_DOUBLE_EQ(s.strength(r, t), std::sqrt(10.0));
}

TEST(SampleState, ZeroCrossLinks) {
  Rng rng(4);
  const auto s = sample_state(make_config(2, 5.0, CrossDistribution::constant(0.0)), rng);
  EXPECT_DOUBLE_EQ(s.strength(0, 0), std::sqrt(5.0));
  EXPECT_DOUBLE_EQ(s.strength(1, 1), std::sqrt(5.0));
  EXPECT_EQ(s.strength(0, 1), 0.0);
  EXPECT_EQ(s.strength(1, 0), 0.0);
}

TEST(SampleState, UniformCrossMeanMatchesDistributionMean) {
  const double snr = 4.0;
  const auto config = make_config(3, snr, CrossDistribution::uniform(0.0, 2.0 * snr));
  Rng rng(11);
  double sum = 0.0;
  int count = 0;
  while (count < 100000) {
    const auto s = sample_state(config, rng);
    for (int r = 0; r < 3; ++r)
      for (int t = 0; t < 3; ++t)
        if (r != t && count < 100000) {
          sum += s.strength(r, t) * s.strength(r, t);
          ++count;
        }
  }
  EXPECT_NEAR(sum / count, snr, 0.02 * snr);
}

TEST(SampleState, DeterministicForSeed) {
  const auto config = make_config(4, 2.0, CrossDistribution::uniform(1.0, 3.0));
  Rng a(99), b(99);
  for (int i = 0; i < 50; ++i) {
    const auto sa = sample_state(config, a);
    const auto sb = sample_state(config, b);
    ASSERT_TRUE(std::equal(sa.phases().begin(), sa.phases().end(), sb.phases().begin()));
    ASSERT_TRUE(std::equal(sa.strengths().begin(), sa.strengths().end(), sb.strengths().begin()));
  }
}

TEST(SampleState, PhasesPassChiSquareUniformity) {
  const int bins = 16;
  const auto config = make_config(4, 1.0, CrossDistribution::constant(1.0), bins);
  Rng rng(2024);
  std::vector<double> counts(bins, 0.0);
  int total = 0;
  while (total < 1000000) {
    const auto s = sample_state(config, rng);
    for (double p : s.phases()) {
      if (total == 1000000) break;
      counts[static_cast<std::size_t>(std::min(bins - 1, static_cast<int>(p * bins / kTwoPi)))] += 1.0;
      ++total;
    }
  }
  const double expected = total / static_cast<double>(bins);
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  boost::math::chi_squared dist(bins - 1);
  EXPECT_LT(chi2, boost::math::quantile(boost::math::complement(dist, 0.001)));
}

TEST(SampleState, PointMassSamplesOnlyAtoms) {
  const auto config = make_config(3, 1.0, CrossDistribution::point_mass({1.0, 9.0}, {1.0, 3.0}));
  Rng rng(5);
  int high = 0, total = 0;
  for (int i = 0; i < 20000; ++i) {
    const auto s = sample_state(config, rng);
    for (int r = 0; r < 3; ++r)
      for (int t = 0; t < 3; ++t)
        if (r != t) {
          const double inr = s.strength(r, t) * s.strength(r, t);
          ASSERT_TRUE(std::fabs(inr - 1.0) < 1e-12 || std::fabs(inr - 9.0) < 1e-12);
          high += inr > 5.0;
          ++total;
        }
  }
  EXPECT_NEAR(high / static_cast<double>(total), 0.75, 0.01);
}

TEST(CrossDistribution, RejectsInvalidParameters) {
  EXPECT_THROW(CrossDistribution::uniform(2.0, 1.0), ConfigError);
  EXPECT_THROW(CrossDistribution::uniform(-1.0, 1.0), ConfigError);
  EXPECT_THROW(CrossDistribution::constant(-0.5), ConfigError);
  EXPECT_THROW(CrossDistribution::point_mass({1.0}, {1.0, 2.0}), ConfigError);
  EXPECT_THROW(CrossDistribution::point_mass({-1.0}, {1.0}), ConfigError);
}

TEST(CrossDistribution, IntervalMass) {
  const auto u = CrossDistribution::uniform(0.0, 2.0);
  EXPECT_DOUBLE_EQ(u.mass(1.0, 1.5), 0.25);
  EXPECT_DOUBLE_EQ(u.mass(1.5, 5.0), 0.25);
  EXPECT_DOUBLE_EQ(u.mass(3.0, 5.0), 0.0);
  EXPECT_DOUBLE_EQ(CrossDistribution::constant(1.0).mass(1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(CrossDistribution::point_mass({1.0, 2.0}, {1.0, 1.0}).mass(1.5, 3.0), 0.5);
}

TEST(NetworkConfig, Validation) {
  EXPECT_NO_THROW(make_config(2, 1.0, CrossDistribution::constant(1.0), 2).validate());
  EXPECT_THROW(make_config(1, 1.0, CrossDistribution::constant(1.0)).validate(), ConfigError);
  EXPECT_THROW(make_config(3, 0.0, CrossDistribution::constant(1.0)).validate(), ConfigError);
  EXPECT_THROW(make_config(3, 1.0, CrossDistribution::constant(1.0), 7).validate(), ConfigError);
}

TEST(NetworkConfig, JsonRoundTripKeepsFieldNames) {
  const auto config = make_config(5, 3.5, CrossDistribution::point_mass({0.5, 4.0}, {0.25, 0.75}), 32, 1234567890123ULL);
  const auto j = to_json(config);
  for (const char* key : {"K", "snr", "cross_dist", "phase_bins", "seed"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["cross_dist"]["kind"], "point_mass");
  EXPECT_EQ(network_config_from_json(nlohmann::json::parse(j.dump())), config);

  const auto u = network_config_from_json(nlohmann::json::parse(
      R"({"K":3,"snr":10,"cross_dist":{"kind":"uniform","params":{"a":0,"b":20}},"phase_bins":64,"seed":7})"));
  EXPECT_EQ(u.cross, CrossDistribution::uniform(0.0, 20.0));
  EXPECT_THROW(network_config_from_json(nlohmann::json::parse(R"({"K":3})")), ConfigError);
}

TEST(CrossDistribution, CompactSyntax) {
  EXPECT_EQ(parse_cross_distribution("constant:10"), CrossDistribution::constant(10.0));
  EXPECT_EQ(parse_cross_distribution("uniform:0,2"), CrossDistribution::uniform(0.0, 2.0));
  EXPECT_EQ(parse_cross_distribution("point_mass:1@1,3@1"), CrossDistribution::point_mass({1.0, 3.0}, {0.5, 0.5}));
  EXPECT_THROW(parse_cross_distribution("gauss:1"), ConfigError);
  EXPECT_THROW(parse_cross_distribution("uniform:3,1"), ConfigError);
}

TEST(ComplementaryState, ZeroOffDiagonalPhasesBecomePi) {
  std::vector<double> strengths(9, 1.0);
  std::vector<double> phases(9, 0.0);
  const ChannelState s(3, strengths, phases);
  const ChannelState c = complementary_state(s);
  for (int r = 0; r < 3; ++r)
    for (int t = 0; t < 3; ++t) {
      EXPECT_NEAR(c.phase(r, t), r == t ? 0.0 : kPi, 1e-15);
      const std::complex<double> sum = s.coefficient(r, t) + c.coefficient(r, t);
      if (r == t) {
        EXPECT_NEAR(std::abs(sum - 2.0 * s.coefficient(r, r)), 0.0, 1e-12);
      } else {
        EXPECT_LE(std::abs(sum), 1e-9);
      }
    }
}

TEST(ComplementaryState, ZeroCrossStrengthsSumToTwiceDiagonal) {
  Rng rng(8);
  const auto s = sample_state(make_config(4, 3.0, CrossDistribution::constant(0.0)), rng);
  const auto c = complementary_state(s);
  for (int r = 0; r < 4; ++r)
    for (int t = 0; t < 4; ++t) {
      const auto sum = s.coefficient(r, t) + c.coefficient(r, t);
      const auto expected = r == t ? 2.0 * s.coefficient(r, r) : std::complex<double>(0.0);
      EXPECT_LE(std::abs(sum - expected), 1e-12);
    }
}

TEST(ComplementaryState, PropertyInvolutionAndComplementAlgebra) {
  Rng rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 2 + static_cast<int>(rng.next() % 6);
    const double snr = rng.uniform(0.1, 50.0);
    const auto s = sample_state(make_config(k, snr, CrossDistribution::uniform(0.0, 3.0 * snr)), rng);
    const auto c = complementary_state(s);
    const auto cc = complementary_state(c);
    for (int r = 0; r < k; ++r)
      for (int t = 0; t < k; ++t) {
        ASSERT_LE(circular_distance(cc.phase(r, t), s.phase(r, t)), 1e-12);
        ASSERT_EQ(c.strength(r, t), s.strength(r, t));
        const auto sum = s.coefficient(r, t) + c.coefficient(r, t);
        if (r == t) {
          ASSERT_LE(std::abs(sum - 2.0 * std::sqrt(snr) * std::polar(1.0, s.phase(r, r))), 1e-9);
        } else {
          ASSERT_LE(std::abs(sum), 1e-9);
        }
      }
  }
}

TEST(ReceiverReferenced, DirectPhasesBecomeZeroAndRelativePhasesKept) {
  Rng rng(12);
  const auto s = sample_state(make_config(3, 2.0, CrossDistribution::constant(1.0)), rng);
  const auto n = receiver_referenced(s);
  for (int r = 0; r < 3; ++r) {
    EXPECT_EQ(n.phase(r, r), 0.0);
    for (int t = 0; t < 3; ++t)
      EXPECT_LE(circular_distance(n.phase(r, t), s.phase(r, t) - s.phase(r, r)), 1e-12);
  }
}

ChannelState single_phase(double phase) {
  return ChannelState(2, {1.0, 1.0, 1.0, 1.0}, {0.0, phase, phase, 0.0});
}

TEST(Quantize, Bins) {
  EXPECT_EQ(quantize(single_phase(0.0), 8).bin(0, 1), 0);
  EXPECT_EQ(quantize(single_phase(std::nextafter(kTwoPi, 0.0)), 8).bin(0, 1), 7);
  EXPECT_EQ(quantize(single_phase(kPi), 8).bin(0, 1), 4);
  EXPECT_THROW(quantize(single_phase(1.0), 7), ConfigError);
}

TEST(ComplementKey, ShiftsOffDiagonalByHalf) {
  const QuantizedState q(2, 8, {3, 1, 6, 2});
  const QuantizedState c = complement_key(q);
  EXPECT_EQ(c.bin(0, 0), 3);
  EXPECT_EQ(c.bin(1, 1), 2);
  EXPECT_EQ(c.bin(0, 1), 5);
  EXPECT_EQ(c.bin(1, 0), 2);
  EXPECT_EQ(complement_key(c), q);
}

TEST(ComplementKey, TwoBinsFlip) {
  const QuantizedState q(3, 2, {0, 0, 1, 1, 1, 0, 0, 1, 0});
  const QuantizedState c = complement_key(q);
  for (int r = 0; r < 3; ++r)
    for (int t = 0; t < 3; ++t) EXPECT_EQ(c.bin(r, t), r == t ? q.bin(r, t) : 1 - q.bin(r, t));
}

TEST(ComplementKey, OddBinsRejected) {
  EXPECT_THROW(complement_key(QuantizedState(2, 3, {0, 1, 2, 0})), ConfigError);
}

TEST(ComplementKey, PropertyInvolution) {
  Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + static_cast<int>(rng.next() % 5);
    const int bins = 2 * (1 + static_cast<int>(rng.next() % 32));
    const auto s = sample_state(make_config(k, 1.0, CrossDistribution::constant(1.0), bins), rng);
    const auto q = quantize(s, bins);
    ASSERT_EQ(complement_key(complement_key(q)), q);
  }
}

}  // namespace
}  // namespace ergodia
