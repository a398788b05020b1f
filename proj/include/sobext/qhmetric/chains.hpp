#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "../whitney/decomposition.hpp"

namespace sobext {

enum class ChainKind { Intersecting, Touching };

struct ChainResult {
  std::vector<int> cubes;  // indices into the decomposition, endpoints included
  ChainKind kind = ChainKind::Intersecting;
  int length() const { return int(cubes.size()); }
};

/// Minimum-length chain from cube `from` to any cube satisfying `is_target`,
/// over intersecting or touching neighbours accepted by `allowed`.
template <int D>
std::optional<ChainResult> bfs_chain(const WhitneyDecomposition<D>& W, int from,
                                     const std::function<bool(int)>& is_target, ChainKind kind,
                                     int max_len, const std::function<bool(int)>& allowed = nullptr) {
  if (is_target(from)) return ChainResult{{from}, kind};
  std::unordered_map<int, std::pair<int, int>> seen;  // cube -> (previous, depth)
  std::deque<int> queue{from};
  seen[from] = {-1, 1};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    int du = seen[u].second;
    if (du >= max_len) continue;
    int found = -1;
    W.for_each_intersecting(u, [&](int v) {
      if (found >= 0 || seen.count(v)) return;
      if (kind == ChainKind::Touching && !cubes_touch(W.cubes[u], W.cubes[v])) return;
      if (allowed && !allowed(v)) return;
      seen[v] = {u, du + 1};
      if (is_target(v)) found = v;
      queue.push_back(v);
    });
    if (found >= 0) {
      ChainResult r{{}, kind};
      for (int c = found; c != -1; c = seen[c].first) r.cubes.push_back(c);
      std::reverse(r.cubes.begin(), r.cubes.end());
      return r;
    }
  }
  return std::nullopt;
}

template <int D>
std::optional<ChainResult> bfs_chain(const WhitneyDecomposition<D>& W, int from, int to, ChainKind kind,
                                     int max_len, const std::function<bool(int)>& allowed = nullptr) {
  return bfs_chain<D>(W, from, [to](int c) { return c == to; }, kind, max_len, allowed);
}

}  // namespace sobext
