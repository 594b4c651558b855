#include "ergodia/bottleneck_graph.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "ergodia/error.hpp"
#include "ergodia/matching.hpp"

namespace ergodia {

using nlohmann::json;

namespace {

void check_edges(int users, const std::set<Edge>& edges) {
  for (const auto& [a, b] : edges)
    if (a < 1 || b < 1 || a > users || b > users || a == b) throw ConfigError("edge endpoint out of range");
}

BipartiteMatching double_cover_matching(int users, const std::set<Edge>& edges) {
  check_edges(users, edges);
  const auto n = static_cast<std::size_t>(users);
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : edges) {
    adj[static_cast<std::size_t>(a - 1)].push_back(b - 1);
    adj[static_cast<std::size_t>(b - 1)].push_back(a - 1);
  }
  return hopcroft_karp(n, n, adj);
}

// Exhaustive cover search with a failure memo over covered-vertex masks.
class CoverSearch {
 public:
  CoverSearch(int users, const std::set<Edge>& edges)
      : users_(users), adj_(static_cast<std::size_t>(users), 0u), failed_(std::size_t{1} << users, false) {
    for (const auto& [a, b] : edges) {
      adj_[static_cast<std::size_t>(a - 1)] |= 1u << (b - 1);
      adj_[static_cast<std::size_t>(b - 1)] |= 1u << (a - 1);
    }
  }

  bool covers(unsigned covered) {
    const unsigned all = (1u << users_) - 1u;
    if (covered == all) return true;
    if (failed_[covered]) return false;
    int v = 0;
    while (covered & (1u << v)) ++v;
    const unsigned free = all & ~covered;
    // v paired with a neighbour by a single edge.
    for (int u = 0; u < users_; ++u)
      if ((adj_[static_cast<std::size_t>(v)] & free & (1u << u)) && u != v)
        if (covers(covered | (1u << v) | (1u << u))) return true;
    // v on an odd cycle through free vertices.
    if (odd_cycle_from(v, v, 1u << v, 1, covered)) return true;
    failed_[covered] = true;
    return false;
  }

 private:
  bool odd_cycle_from(int start, int current, unsigned path, int length, unsigned covered) {
    const unsigned all = (1u << users_) - 1u;
    if (length >= 3 && length % 2 == 1 && (adj_[static_cast<std::size_t>(current)] & (1u << start)))
      if (covers(covered | path)) return true;
    const unsigned next = adj_[static_cast<std::size_t>(current)] & all & ~covered & ~path;
    for (int u = 0; u < users_; ++u)
      if (next & (1u << u))
        if (odd_cycle_from(start, u, path | (1u << u), length + 1, covered)) return true;
    return false;
  }

  int users_;
  std::vector<unsigned> adj_;
  std::vector<bool> failed_;
};

}  // namespace

BottleneckGraph::BottleneckGraph(int users, std::set<Link> links) : users_(users), links_(std::move(links)) {
  if (users < 1) throw ConfigError("K must be positive");
  for (const auto& [r, t] : links_) {
    if (r < 1 || t < 1 || r > users || t > users) throw ConfigError("link endpoint outside 1..K");
    if (r == t) throw ConfigError("a bottleneck link cannot be a direct link");
  }
}

BottleneckGraph BottleneckGraph::with(Link link) const {
  auto links = links_;
  links.insert(link);
  return BottleneckGraph(users_, std::move(links));
}

BottleneckGraph BottleneckGraph::without(Link link) const {
  auto links = links_;
  links.erase(link);
  return BottleneckGraph(users_, std::move(links));
}

std::string to_string(StateClass c) {
  switch (c) {
    case StateClass::NotCertified:
      return "NotCertified";
    case StateClass::Bottleneck:
      return "Bottleneck";
    case StateClass::IrreducibleBottleneck:
      return "IrreducibleBottleneck";
    case StateClass::MinimalBottleneck:
      return "MinimalBottleneck";
  }
  return "Unknown";
}

std::set<Edge> undirected_edges(const BottleneckGraph& g) {
  std::set<Edge> edges;
  for (const auto& [r, t] : g.links()) edges.emplace(std::min(r, t), std::max(r, t));
  return edges;
}

std::optional<FpmWitness> find_fpm(int users, const std::set<Edge>& edges) {
  const BipartiteMatching m = double_cover_matching(users, edges);
  if (m.size != static_cast<std::size_t>(users)) return std::nullopt;
  FpmWitness w;
  std::vector<bool> seen(static_cast<std::size_t>(users), false);
  for (int start = 0; start < users; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::vector<int> cycle;
    for (int v = start; !seen[static_cast<std::size_t>(v)]; v = m.mate_left[static_cast<std::size_t>(v)]) {
      seen[static_cast<std::size_t>(v)] = true;
      cycle.push_back(v + 1);
    }
    if (cycle.size() % 2 == 1) {
      w.odd_cycles.push_back(std::move(cycle));
    } else {
      for (std::size_t i = 0; i < cycle.size(); i += 2)
        w.edges.emplace_back(std::min(cycle[i], cycle[i + 1]), std::max(cycle[i], cycle[i + 1]));
    }
  }
  std::sort(w.edges.begin(), w.edges.end());
  return w;
}

bool has_fpm(int users, const std::set<Edge>& edges) {
  return double_cover_matching(users, edges).size == static_cast<std::size_t>(users);
}

bool has_fpm(const BottleneckGraph& g) { return has_fpm(g.users(), undirected_edges(g)); }

double fractional_matching_number(int users, const std::set<Edge>& edges) {
  return 0.5 * static_cast<double>(double_cover_matching(users, edges).size);
}

bool brute_fpm(int users, const std::set<Edge>& edges) {
  if (users > 10) throw ResourceError("brute_fpm is limited to K <= 10");
  if (users < 1) return false;
  check_edges(users, edges);
  return CoverSearch(users, edges).covers(0u);
}

bool brute_fpm(const BottleneckGraph& g) { return brute_fpm(g.users(), undirected_edges(g)); }

StateClass classify(const BottleneckGraph& g) {
  if (!has_fpm(g)) return StateClass::NotCertified;
  for (const Link& l : g.links())
    if (has_fpm(g.without(l))) return StateClass::Bottleneck;
  if (g.users() >= 2 && static_cast<int>(g.links().size()) == minimal_link_count(g.users()))
    return StateClass::MinimalBottleneck;
  return StateClass::IrreducibleBottleneck;
}

int minimal_link_count(int users) {
  if (users < 2) throw DomainError("K must be at least 2");
  return users % 2 == 0 ? users / 2 : (users + 3) / 2;
}

boost::multiprecision::cpp_int count_minimal_states(int users) {
  if (users < 2) throw DomainError("K must be at least 2");
  if (users % 2 != 0) throw DomainError("the minimal-state count is only available for even K");
  boost::multiprecision::cpp_int count = 1;
  for (int i = users / 2 + 1; i <= users; ++i) count *= i;
  return count;
}

std::vector<BottleneckGraph> enumerate_minimal_states(int users) {
  if (users > 8) throw ResourceError("enumerate_minimal_states is limited to K <= 8");
  const int size = minimal_link_count(users);
  std::vector<Link> all;
  for (int r = 1; r <= users; ++r)
    for (int t = 1; t <= users; ++t)
      if (r != t) all.emplace_back(r, t);
  const int n = static_cast<int>(all.size());
  std::vector<BottleneckGraph> out;
  if (size > n) return out;
  std::vector<int> pick(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::set<Link> links;
    for (int i : pick) links.insert(all[static_cast<std::size_t>(i)]);
    BottleneckGraph g(users, std::move(links));
    if (classify(g) == StateClass::MinimalBottleneck) out.push_back(std::move(g));
    int i = size - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - size + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < size; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::set<Link> parse_links(const std::string& text) {
  std::set<Link> links;
  std::istringstream in(text);
  std::string item;
  auto parse_int = [](const std::string& s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("bad link endpoint '" + s + "'");
    return v;
  };
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("links must be written r:t");
    links.emplace(parse_int(item.substr(0, colon)), parse_int(item.substr(colon + 1)));
  }
  return links;
}

json to_json(const BottleneckGraph& g) {
  json links = json::array();
  for (const auto& [r, t] : g.links()) links.push_back({r, t});
  return {{"K", g.users()}, {"links", links}};
}

BottleneckGraph bottleneck_graph_from_json(const json& j) {
  try {
    std::set<Link> links;
    for (const auto& l : j.at("links")) {
      if (!l.is_array() || l.size() != 2) throw ConfigError("each link must be [r, t]");
      links.emplace(l[0].get<int>(), l[1].get<int>());
    }
    return BottleneckGraph(j.at("K").get<int>(), std::move(links));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad bottleneck graph JSON: ") + e.what());
  }
}

json to_json(const FpmWitness& w) {
  json parts = json::array();
  for (const auto& [a, b] : w.edges) parts.push_back({a, b});
  for (const auto& c : w.odd_cycles) parts.push_back(c);
  return parts;
}

json classification_json(const BottleneckGraph& g) {
  const auto witness = find_fpm(g.users(), undirected_edges(g));
  return {{"class", to_string(classify(g))}, {"fpm_witness", witness ? to_json(*witness) : json(nullptr)}};
}

}  // namespace ergodia
