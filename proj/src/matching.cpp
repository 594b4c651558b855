#include "ergodia/matching.hpp"

#include <limits>
#include <queue>

namespace ergodia {

namespace {

constexpr int kInf = std::numeric_limits<int>::max();

class HopcroftKarp {
 public:
  HopcroftKarp(std::size_t left, std::size_t right, const std::vector<std::vector<int>>& adj)
      : adj_(adj), dist_(left), it_(left) {
    result_.mate_left.assign(left, kUnmatched);
    result_.mate_right.assign(right, kUnmatched);
  }

  BipartiteMatching solve() {
    while (bfs()) {
      for (std::size_t u = 0; u < it_.size(); ++u) it_[u] = 0;
      for (std::size_t u = 0; u < adj_.size(); ++u)
        if (result_.mate_left[u] == kUnmatched && dfs(static_cast<int>(u))) ++result_.size;
    }
    return std::move(result_);
  }

 private:
  // Layers free left vertices at distance 0; true if some free right vertex is reachable.
  bool bfs() {
    std::queue<int> q;
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      if (result_.mate_left[u] == kUnmatched) {
        dist_[u] = 0;
        q.push(static_cast<int>(u));
      } else {
        dist_[u] = kInf;
      }
    }
    bool found = false;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj_[static_cast<std::size_t>(u)]) {
        const int w = result_.mate_right[static_cast<std::size_t>(v)];
        if (w == kUnmatched) {
          found = true;
        } else if (dist_[static_cast<std::size_t>(w)] == kInf) {
          dist_[static_cast<std::size_t>(w)] = dist_[static_cast<std::size_t>(u)] + 1;
          q.push(w);
        }
      }
    }
    return found;
  }

  bool dfs(int u) {
    const auto uu = static_cast<std::size_t>(u);
    const auto& nbrs = adj_[uu];
    for (std::size_t& i = it_[uu]; i < nbrs.size(); ++i) {
      const int v = nbrs[i];
      const int w = result_.mate_right[static_cast<std::size_t>(v)];
      if (w == kUnmatched || (dist_[static_cast<std::size_t>(w)] == dist_[uu] + 1 && dfs(w))) {
        result_.mate_left[uu] = v;
        result_.mate_right[static_cast<std::size_t>(v)] = u;
        ++i;
        return true;
      }
    }
    dist_[uu] = kInf;
    return false;
  }

  const std::vector<std::vector<int>>& adj_;
  std::vector<int> dist_;
  std::vector<std::size_t> it_;
  BipartiteMatching result_;
};

}  // namespace

BipartiteMatching hopcroft_karp(std::size_t left, std::size_t right, const std::vector<std::vector<int>>& adjacency) {
  std::vector<std::vector<int>> adj = adjacency;
  adj.resize(left);
  return HopcroftKarp(left, right, adj).solve();
}

}  // namespace ergodia
