#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace ergodia {

// Directed cross link (receiver r, transmitter t), users numbered 1..K.
using Link = std::pair<int, int>;
// Unordered user pair {a, b}, stored with a < b.
using Edge = std::pair<int, int>;

// Set of cross links whose INR equals the SNR at every channel use.
class BottleneckGraph {
 public:
  BottleneckGraph(int users, std::set<Link> links);
  BottleneckGraph(int users, std::initializer_list<Link> links)
      : BottleneckGraph(users, std::set<Link>(links)) {}

  int users() const { return users_; }
  const std::set<Link>& links() const { return links_; }

  BottleneckGraph with(Link link) const;
  BottleneckGraph without(Link link) const;

  bool operator==(const BottleneckGraph&) const = default;

 private:
  int users_;
  std::set<Link> links_;
};

enum class StateClass { NotCertified, Bottleneck, IrreducibleBottleneck, MinimalBottleneck };

std::string to_string(StateClass c);

// Spanning vertex-disjoint cover of the users by edges and odd cycles.
struct FpmWitness {
  std::vector<Edge> edges;
  std::vector<std::vector<int>> odd_cycles;
};

std::set<Edge> undirected_edges(const BottleneckGraph& g);

// Perfect matching search in the bipartite double cover (u+ -- v- and v+ -- u-
// for every edge). A perfect matching there is a permutation whose cycles
// yield the witness: 2-cycles are edges, even cycles split into edges, odd
// cycles are kept.
std::optional<FpmWitness> find_fpm(int users, const std::set<Edge>& edges);
bool has_fpm(int users, const std::set<Edge>& edges);
bool has_fpm(const BottleneckGraph& g);

// Maximum fractional matching value: half the maximum double-cover matching.
double fractional_matching_number(int users, const std::set<Edge>& edges);

// Exhaustive search for a spanning union of disjoint edges and odd cycles.
// Independent of the matching code. Throws ResourceError for K > 10.
bool brute_fpm(int users, const std::set<Edge>& edges);
bool brute_fpm(const BottleneckGraph& g);

StateClass classify(const BottleneckGraph& g);

// K/2 for even K, (K+3)/2 for odd K. Throws DomainError for K < 2.
int minimal_link_count(int users);

// K!/(K/2)! for even K. Throws DomainError for odd K or K < 2.
boost::multiprecision::cpp_int count_minimal_states(int users);

// Every directed link set of size minimal_link_count(K) that classifies as
// MinimalBottleneck, in lexicographic order. Throws ResourceError for K > 8.
std::vector<BottleneckGraph> enumerate_minimal_states(int users);

// "1:2,2:3" -> {(1,2),(2,3)}. Throws ConfigError on malformed input.
std::set<Link> parse_links(const std::string& text);

nlohmann::json to_json(const BottleneckGraph& g);
BottleneckGraph bottleneck_graph_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FpmWitness& w);
// {"class": ..., "fpm_witness": [[a,b], [c,d,e], ...] or null}
nlohmann::json classification_json(const BottleneckGraph& g);

}  // namespace ergodia
