#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergodia/bottleneck_graph.hpp"

namespace ergodia {

// All rates are in bits per channel use.

struct RateBound {
  enum class Kind { SingleUser, PairBottleneck, SumMinimalState, LpOuter, AchievableIA };

  double value = 0.0;
  Kind kind = Kind::SingleUser;
  std::string provenance;
};

std::string to_string(RateBound::Kind kind);
nlohmann::json to_json(const RateBound& bound);

// log2(1 + snr).
double single_user_capacity(double snr);

// Sum capacity of the two-user Z channel with INR = SNR, optionally relaxed by eps:
// log2(1 + 2 snr) + eps.
double pair_bound(double snr, double eps = 0.0);

// (K/2) log2(1 + 2 snr).
double sum_capacity_minimal(int users, double snr);

// max sum_k R_k  s.t.  0 <= R_k <= log2(1+snr),  R_r + R_t <= log2(1+2snr)+eps per edge.
// Closed form through fractional matching duality:
//   K c1 - max(0, 2 c1 - c2) * nu_f(edges).
double lp_outer_bound(int users, double snr, double eps, const std::set<Edge>& edges);

// Same LP solved by a dense simplex method. Independent of the matching code. K <= 12.
double lp_oracle(int users, double snr, double eps, const std::set<Edge>& edges);

struct SeparationComparison {
  double separate = 0.0;
  double joint = 0.0;
};

// Two complementary parallel 3-user states with all links of strength sqrt(snr):
// separate coding gives 2 log2(1+3 snr), joint coding 3 log2(1+2 snr).
SeparationComparison inseparability_example(double snr);

struct SeparabilityExample {
  double separate = 0.0;
  double joint = 0.0;
  bool joint_feasible = false;
};

// Three-state parallel example: separate = 3 log2(1+2snr), joint = 4 log2(1+snr),
// feasible iff log2(1+alpha) >= 2 log2(1+snr).
SeparabilityExample separability_example(double snr, double alpha);

// M parallel sub-channels each in a minimal bottleneck state: M (K/2) log2(1+2snr).
double parallel_same_state_capacity(int states, int users, double snr);

// Every bound applicable to one instance, for reporting.
std::vector<RateBound> bounds_report(int users, double snr, double eps, const std::set<Edge>& edges);

}  // namespace ergodia
