#pragma once

#include <utility>
#include <vector>

#include "cosetkit/subgroup.hpp"

namespace cosetkit {

// Hasse diagram of a subgroup family under strict containment. Top-level
// nodes have no proper superset in the family; depth is the longest directed
// path (in edges).
struct ContainmentDag {
  std::vector<Subgroup> nodes;
  std::vector<std::vector<bool>> strictly_contains;  // [i][j]: nodes[i] > nodes[j]
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  static ContainmentDag build(std::vector<Subgroup> family) {
    ContainmentDag d;
    d.nodes = std::move(family);
    const std::size_t n = d.nodes.size();
    d.strictly_contains.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && subgroup_contains(d.nodes[i], d.nodes[j]) && d.nodes[i] != d.nodes[j])
          d.strictly_contains[i][j] = true;
    // transitive reduction: keep i -> j only when nothing sits strictly between
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (!d.strictly_contains[i][j]) continue;
        bool direct = true;
        for (std::size_t k = 0; k < n && direct; ++k)
          if (k != i && k != j && d.strictly_contains[i][k] && d.strictly_contains[k][j])
            direct = false;
        if (direct) d.edges.emplace_back(i, j);
      }
    return d;
  }

  std::vector<std::size_t> top_level() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      bool covered = false;
      for (std::size_t i = 0; i < nodes.size() && !covered; ++i)
        covered = strictly_contains[i][j];
      if (!covered) out.push_back(j);
    }
    return out;
  }

  // Longest path length; containment is acyclic, so a simple memoized walk works.
  std::size_t depth() const {
    std::vector<long> memo(nodes.size(), -1);
    std::size_t best = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) best = std::max(best, walk(i, memo));
    return best;
  }

 private:
  std::size_t walk(std::size_t i, std::vector<long>& memo) const {
    if (memo[i] >= 0) return static_cast<std::size_t>(memo[i]);
    std::size_t best = 0;
    for (const auto& [a, b] : edges)
      if (a == i) best = std::max(best, 1 + walk(b, memo));
    memo[i] = static_cast<long>(best);
    return best;
  }
};

}  // namespace cosetkit
