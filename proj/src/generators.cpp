#include "orienthc/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "json.hpp"

#include "orienthc/errors.hpp"

namespace ohc {

Digraph gen_complete_digraph(int n) {
  if (n < 1) throw InputError("complete digraph needs n >= 1");
  std::vector<Edge> es;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v) es.emplace_back(u, v);
  return Digraph::from_edge_list(n, es);
}

Digraph gen_bipartite_extremal(int n) {
  if (n < 4) throw InputError("bipartite extremal digraph needs n >= 4");
  const int a = (n + 1) / 2 - 1;
  std::vector<Edge> es;
  for (Vertex u = 0; u < a; ++u)
    for (Vertex v = a; v < n; ++v) {
      es.emplace_back(u, v);
      es.emplace_back(v, u);
    }
  return Digraph::from_edge_list(n, es);
}

Digraph gen_split_cliques(int n) {
  if (n < 4) throw InputError("split cliques need n >= 4");
  const int a = n / 2;
  std::vector<Edge> es;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v && (u < a) == (v < a)) es.emplace_back(u, v);
  return Digraph::from_edge_list(n, es);
}

std::vector<int> balanced_sizes(int n, int parts) {
  if (parts < 1 || n < parts) throw InputError("balanced_sizes: need 1 <= parts <= n");
  std::vector<int> s(parts, n / parts);
  for (int i = 0; i < n % parts; ++i) ++s[i];
  return s;
}

std::vector<VertexSet> blowup_parts(const std::vector<int>& part_sizes) {
  const int n = std::accumulate(part_sizes.begin(), part_sizes.end(), 0);
  std::vector<VertexSet> parts;
  int start = 0;
  for (int s : part_sizes) {
    parts.push_back(VertexSet::range(n, start, start + s));
    start += s;
  }
  return parts;
}

Digraph gen_blowup_tt(const std::vector<int>& part_sizes, double intra, double forward_noise, std::uint64_t seed) {
  if (part_sizes.empty()) throw InputError("blow-up needs at least one part");
  for (int s : part_sizes)
    if (s < 1) throw InputError("blow-up part sizes must be positive");
  if (intra < 0 || intra > 1 || forward_noise < 0 || forward_noise > 1)
    throw InputError("blow-up densities must lie in [0,1]");
  const int n = std::accumulate(part_sizes.begin(), part_sizes.end(), 0);
  std::vector<int> part(n);
  for (int i = 0, v = 0; i < static_cast<int>(part_sizes.size()); ++i)
    for (int k = 0; k < part_sizes[i]; ++k) part[v++] = i;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep_intra(intra), keep_noise(forward_noise);
  std::vector<Edge> es;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (part[u] == part[v]) {
        if (intra >= 1.0 || keep_intra(rng)) {
          es.emplace_back(u, v);
          es.emplace_back(v, u);
        }
      } else {
        es.emplace_back(v, u);  // later part to earlier part
        if (forward_noise > 0 && keep_noise(rng)) es.emplace_back(u, v);
      }
    }
  }
  return Digraph::from_edge_list(n, es);
}

RandomMinDegree gen_random_min_degree(int n, int delta_target, std::uint64_t seed) {
  if (n < 1) throw InputError("random digraph needs n >= 1");
  if (delta_target < 0 || delta_target > 2 * (n - 1))
    throw InputError("delta_target must lie in [0, 2(n-1)]");
  std::mt19937_64 rng(seed);
  const double p = delta_target == 0 ? 0.5 : static_cast<double>(delta_target) / (2.0 * (n - 1));
  std::bernoulli_distribution coin(std::min(p, 1.0));
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  std::vector<int> deg(n, 0);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v && coin(rng)) {
        adj[u][v] = 1;
        ++deg[u];
        ++deg[v];
      }
  RandomMinDegree out;
  // Repeatedly give the first deficient vertex a random missing edge,
  // preferring partners that are deficient as well.
  while (true) {
    Vertex v = -1;
    for (Vertex x = 0; x < n; ++x)
      if (deg[x] < delta_target) {
        v = x;
        break;
      }
    if (v < 0) break;
    std::vector<std::pair<Vertex, bool>> preferred, other;  // (w, v→w?)
    for (Vertex w = 0; w < n; ++w) {
      if (w == v) continue;
      auto& bucket = deg[w] < delta_target ? preferred : other;
      if (!adj[v][w]) bucket.emplace_back(w, true);
      if (!adj[w][v]) bucket.emplace_back(w, false);
    }
    auto& pool = preferred.empty() ? other : preferred;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    auto [w, outward] = pool[pick(rng)];
    if (outward) adj[v][w] = 1;
    else adj[w][v] = 1;
    ++deg[v];
    ++deg[w];
    ++out.augmentations;
  }
  std::vector<Edge> es;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (adj[u][v]) es.emplace_back(u, v);
  out.graph = Digraph::from_edge_list(n, es);
  return out;
}

Digraph gen_tournament(int n, TournamentKind kind, std::uint64_t seed) {
  if (n < 1) throw InputError("tournament needs n >= 1");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<Edge> es;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      if (kind == TournamentKind::Transitive || coin(rng)) es.emplace_back(u, v);
      else es.emplace_back(v, u);
    }
  return Digraph::from_edge_list(n, es);
}

Digraph generate(const GenSpec& s) {
  if (s.family == "complete") return gen_complete_digraph(s.n);
  if (s.family == "bipartite") return gen_bipartite_extremal(s.n);
  if (s.family == "split") return gen_split_cliques(s.n);
  if (s.family == "g1") {
    if (s.sizes.empty()) throw InputError("family g1 needs --sizes");
    return gen_blowup_tt(s.sizes, s.intra, s.noise, s.seed);
  }
  if (s.family == "random") return gen_random_min_degree(s.n, s.delta, s.seed).graph;
  if (s.family == "tournament") return gen_tournament(s.n, TournamentKind::Random, s.seed);
  if (s.family == "transitive") return gen_tournament(s.n, TournamentKind::Transitive);
  throw InputError("unknown family '" + s.family + "'");
}

std::string describe(const GenSpec& s) {
  nlohmann::json j{{"family", s.family}, {"seed", s.seed}};
  if (s.n) j["n"] = s.n;
  if (!s.sizes.empty()) j["sizes"] = s.sizes;
  if (s.family == "g1") {
    j["intra"] = s.intra;
    j["noise"] = s.noise;
  }
  if (s.family == "random") j["delta"] = s.delta;
  return j.dump();
}

}  // namespace ohc
