#pragma once

#include <cstddef>
#include <vector>

namespace ergodia {

inline constexpr int kUnmatched = -1;

// Maximum cardinality matching in a bipartite graph by Hopcroft-Karp.
// adjacency[u] lists right-side neighbours of left vertex u.
struct BipartiteMatching {
  std::vector<int> mate_left;   // right partner of each left vertex, or kUnmatched
  std::vector<int> mate_right;  // left partner of each right vertex, or kUnmatched
  std::size_t size = 0;
};

BipartiteMatching hopcroft_karp(std::size_t left, std::size_t right, const std::vector<std::vector<int>>& adjacency);

}  // namespace ergodia
