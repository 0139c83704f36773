#pragma once

#include <atomic>
#include <cstdint>
#include <utility>
#include <vector>

#include "orienthc/digraph.hpp"

namespace ohc {

/// Injective placement of pattern positions onto host vertices subject to
/// required arcs. Every position gets a distinct vertex from its domain and
/// every arc (a, b) becomes the host edge f(a) → f(b).
struct SearchProblem {
  int positions = 0;
  std::vector<std::pair<int, int>> arcs;
  std::vector<VertexSet> domains;  // one per position, universe = host order

  /// Problem with `positions` unconstrained positions over `allowed`.
  static SearchProblem over(int positions, const VertexSet& allowed);
  void pin(int position, Vertex v);
};

enum class SearchStatus { Found, None, Timeout };

const char* to_string(SearchStatus s);

struct SearchOptions {
  double seconds = 10.0;       // wall-clock budget; <= 0 means unlimited
  long long node_limit = -1;   // -1 means unlimited
  int workers = 1;             // top-level branches explored concurrently
  std::uint64_t value_seed = 0;  // 0: ascending vertex order, else seeded shuffle
  std::atomic<bool>* cancel = nullptr;
};

struct SearchResult {
  SearchStatus status = SearchStatus::None;
  std::vector<Vertex> assignment;  // position → vertex when Found
  long long nodes = 0;
};

/// Complete backtracking search: positions are chosen fewest-candidates
/// first, domains are kept arc consistent along the pattern arcs and a
/// bipartite matching of open positions into free vertices is maintained.
SearchResult solve(const Digraph& g, const SearchProblem& problem, const SearchOptions& options = {});

}  // namespace ohc
