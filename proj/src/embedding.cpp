#include "orienthc/embedding.hpp"

#include <algorithm>
#include <string>

#include "orienthc/errors.hpp"

namespace ohc {

namespace {

CheckReport fail(std::string why) { return {false, std::move(why)}; }

CheckReport check_images(const Digraph& g, const std::vector<Vertex>& map) {
  VertexSet seen(g.order());
  for (std::size_t i = 0; i < map.size(); ++i) {
    const Vertex v = map[i];
    if (v < 0 || v >= g.order()) return fail("position " + std::to_string(i) + " maps outside V(G)");
    if (seen.contains(v)) return fail("vertex " + std::to_string(v) + " used twice");
    seen.insert(v);
  }
  return {};
}

CheckReport check_edge(const Digraph& g, bool forward, Vertex a, Vertex b, int edge) {
  const bool ok = forward ? g.has_edge(a, b) : g.has_edge(b, a);
  if (ok) return {};
  return fail("edge " + std::to_string(edge) + " missing: " + std::to_string(forward ? a : b) + "->" +
              std::to_string(forward ? b : a));
}

SearchOptions search_options(const OracleOptions& o) {
  SearchOptions s;
  s.seconds = o.seconds;
  s.node_limit = o.node_limit;
  s.workers = o.workers;
  s.value_seed = o.value_seed;
  return s;
}

EmbedOutcome run(const Digraph& g, SearchProblem problem, const Pins& pins, const OracleOptions& o) {
  VertexSet pinned(g.order());
  for (const auto& [pos, v] : pins) {
    if (pos < 0 || pos >= problem.positions) throw InputError("pin position " + std::to_string(pos) + " out of range");
    if (v < 0 || v >= g.order()) throw InputError("pin vertex " + std::to_string(v) + " out of range");
    if (pinned.contains(v)) throw PreconditionError("pins are not injective at vertex " + std::to_string(v));
    pinned.insert(v);
  }
  for (const auto& [pos, v] : pins) problem.pin(pos, v);
  EmbedOutcome out;
  if (problem.positions > g.order()) return out;
  const SearchResult r = solve(g, problem, search_options(o));
  out.status = r.status;
  out.nodes = r.nodes;
  if (r.status == SearchStatus::Found) out.embedding.map = r.assignment;
  return out;
}

}  // namespace

CheckReport check_cycle_embedding(const Digraph& g, const CyclePattern& c, const std::vector<Vertex>& map,
                                  bool spanning) {
  const int n = c.size();
  if (static_cast<int>(map.size()) != n) return fail("map has " + std::to_string(map.size()) + " positions");
  if (spanning && n != g.order()) return fail("pattern does not span V(G)");
  if (auto r = check_images(g, map); !r.ok) return r;
  for (int i = 0; i < n; ++i)
    if (auto r = check_edge(g, c.forward(i), map[i], map[(i + 1) % n], i); !r.ok) return r;
  return {};
}

CheckReport check_path_embedding(const Digraph& g, const PathPattern& p, const std::vector<Vertex>& map,
                                 std::optional<Vertex> start, std::optional<Vertex> end) {
  const int len = p.length();
  if (static_cast<int>(map.size()) != len) return fail("map has " + std::to_string(map.size()) + " positions");
  if (auto r = check_images(g, map); !r.ok) return r;
  for (int i = 0; i + 1 < len; ++i)
    if (auto r = check_edge(g, p.forward(i), map[i], map[i + 1], i); !r.ok) return r;
  if (start && map.front() != *start) return fail("path does not start at " + std::to_string(*start));
  if (end && map.back() != *end) return fail("path does not end at " + std::to_string(*end));
  return {};
}

EmbedOutcome exact_embed(const Digraph& g, const CyclePattern& c, const Pins& pins, const OracleOptions& o) {
  const int n = c.size();
  SearchProblem problem = SearchProblem::over(n, o.allowed ? *o.allowed : g.all());
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    problem.arcs.push_back(c.forward(i) ? std::pair{i, j} : std::pair{j, i});
  }
  return run(g, std::move(problem), pins, o);
}

EmbedOutcome exact_embed(const Digraph& g, const PathPattern& p, const Pins& pins, const OracleOptions& o) {
  const int len = p.length();
  SearchProblem problem = SearchProblem::over(len, o.allowed ? *o.allowed : g.all());
  for (int i = 0; i + 1 < len; ++i) problem.arcs.push_back(p.forward(i) ? std::pair{i, i + 1} : std::pair{i + 1, i});
  return run(g, std::move(problem), pins, o);
}

EmbedOutcome embed_path_between(const Digraph& g, const PathPattern& path, Vertex u, Vertex v,
                                const VertexSet& forbidden, const OracleOptions& o) {
  if (u == v) throw PreconditionError("embed_path_between needs distinct endpoints");
  if (forbidden.contains(u) || forbidden.contains(v)) throw PreconditionError("endpoint is forbidden");
  if (path.length() < 2) throw PreconditionError("path must have at least two vertices");
  OracleOptions inner = o;
  VertexSet allowed = o.allowed ? *o.allowed : g.all();
  allowed -= forbidden;
  allowed.insert(u);
  allowed.insert(v);
  inner.allowed = allowed;
  return exact_embed(g, path, {{0, u}, {path.length() - 1, v}}, inner);
}

std::vector<int> tt_embed_path(const PathPattern& path, int size) {
  const int len = path.length();
  if (len > size) throw PreconditionError("path has more vertices than the tournament");
  std::vector<int> rank(len);
  int lo = 0, hi = size - 1;
  for (int i = 0; i + 1 < len; ++i) rank[i] = path.forward(i) ? lo++ : hi--;
  rank[len - 1] = lo;
  return rank;
}

std::vector<Connector> select_connectors(const Digraph& g, const VertexSet& x, const VertexSet& y, int count,
                                         ConnectorDirection direction, const VertexSet* excluded) {
  // Orient everything as tail side → head side.
  const bool flip = direction == ConnectorDirection::YToX;
  VertexSet tails = flip ? y : x;
  VertexSet heads = flip ? x : y;
  if (excluded) {
    tails -= *excluded;
    heads -= *excluded;
  }
  long long pool = 0;
  tails.for_each([&](Vertex a) { pool += g.out_degree(a, heads); });
  if (pool == 0) throw PreconditionError("no usable edge between the connector sets");

  std::vector<Connector> out;
  while (static_cast<int>(out.size()) < count) {
    Vertex best_tail = -1;
    int best_deg = 0;
    tails.for_each([&](Vertex a) {
      const int d = g.out_degree(a, heads);
      if (d > best_deg) best_deg = d, best_tail = a;
    });
    if (best_tail < 0) break;
    VertexSet cand = g.out(best_tail);
    cand &= heads;
    cand.erase(best_tail);
    Vertex best_head = -1;
    int head_deg = -1;
    cand.for_each([&](Vertex b) {
      const int d = g.in_degree(b, tails);
      if (d > head_deg) head_deg = d, best_head = b;
    });
    if (best_head < 0) {
      tails.erase(best_tail);
      continue;
    }
    out.push_back({best_tail, best_head});
    for (VertexSet* s : {&tails, &heads}) {
      s->erase(best_tail);
      s->erase(best_head);
    }
  }
  if (static_cast<int>(out.size()) < count)
    throw ResourceError("connector pool exhausted after " + std::to_string(out.size()) + " of " +
                        std::to_string(count) + " edges");
  return out;
}

}  // namespace ohc
