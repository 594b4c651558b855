#include "ergodia/capacity_bounds.hpp"

#include <algorithm>
#include <cmath>

#include "ergodia/error.hpp"

namespace ergodia {

namespace {

void require_snr(double snr) {
  if (!(snr >= 0.0) || !std::isfinite(snr)) throw DomainError("snr must be a finite non-negative number");
}

void require_eps(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw DomainError("eps must be a finite non-negative number");
}

}  // namespace

std::string to_string(RateBound::Kind kind) {
  switch (kind) {
    case RateBound::Kind::SingleUser:
      return "SingleUser";
    case RateBound::Kind::PairBottleneck:
      return "PairBottleneck";
    case RateBound::Kind::SumMinimalState:
      return "SumMinimalState";
    case RateBound::Kind::LpOuter:
      return "LpOuter";
    case RateBound::Kind::AchievableIA:
      return "AchievableIA";
  }
  return "Unknown";
}

nlohmann::json to_json(const RateBound& bound) {
  return {{"kind", to_string(bound.kind)}, {"value_bits", bound.value}, {"provenance", bound.provenance}};
}

double single_user_capacity(double snr) {
  require_snr(snr);
  return std::log2(1.0 + snr);
}

double pair_bound(double snr, double eps) {
  require_snr(snr);
  require_eps(eps);
  return std::log2(1.0 + 2.0 * snr) + eps;
}

double sum_capacity_minimal(int users, double snr) {
  if (users < 2) throw DomainError("K must be at least 2");
  require_snr(snr);
  return 0.5 * users * std::log2(1.0 + 2.0 * snr);
}

double lp_outer_bound(int users, double snr, double eps, const std::set<Edge>& edges) {
  if (users < 1) throw DomainError("K must be positive");
  const double c1 = single_user_capacity(snr);
  const double c2 = pair_bound(snr, eps);
  // Substituting x_k = c1 - R_k turns the LP into a fractional vertex cover
  // with demand 2c1 - c2 per edge; its dual is the fractional matching.
  const double demand = std::max(0.0, 2.0 * c1 - c2);
  if (demand == 0.0 || edges.empty()) return users * c1;
  return users * c1 - demand * fractional_matching_number(users, edges);
}

SeparationComparison inseparability_example(double snr) {
  require_snr(snr);
  return {2.0 * std::log2(1.0 + 3.0 * snr), 3.0 * std::log2(1.0 + 2.0 * snr)};
}

SeparabilityExample separability_example(double snr, double alpha) {
  require_snr(snr);
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be a finite non-negative number");
  SeparabilityExample ex;
  ex.separate = 3.0 * std::log2(1.0 + 2.0 * snr);
  ex.joint = 4.0 * std::log2(1.0 + snr);
  // log2(1+alpha) >= 2 log2(1+snr)  <=>  alpha >= snr^2 + 2 snr, compared exactly.
  ex.joint_feasible = alpha >= snr * snr + 2.0 * snr;
  return ex;
}

double parallel_same_state_capacity(int states, int users, double snr) {
  if (states < 1) throw DomainError("at least one parallel state is required");
  return states * sum_capacity_minimal(users, snr);
}

std::vector<RateBound> bounds_report(int users, double snr, double eps, const std::set<Edge>& edges) {
  std::vector<RateBound> out;
  out.push_back({single_user_capacity(snr), RateBound::Kind::SingleUser, "single-user point-to-point bound"});
  out.push_back({pair_bound(snr, eps), RateBound::Kind::PairBottleneck,
                 eps > 0.0 ? "two-user Z channel, eps-relaxed" : "two-user Z channel with INR = SNR"});
  out.push_back({sum_capacity_minimal(users, snr), RateBound::Kind::SumMinimalState,
                 "sum capacity of a minimal bottleneck state"});
  out.push_back({lp_outer_bound(users, snr, eps, edges), RateBound::Kind::LpOuter,
                 "pairwise bottleneck constraints plus single-user caps"});
  out.push_back({sum_capacity_minimal(users, snr), RateBound::Kind::AchievableIA,
                 "ergodic interference alignment, K * 0.5 log2(1 + 2 snr)"});
  return out;
}

}  // namespace ergodia
