#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "orienthc/embedding.hpp"
#include "orienthc/errors.hpp"
#include "orienthc/expansion.hpp"

namespace ohc {

SplitReport split_expander(const Digraph& g, const std::vector<int>& sizes, const std::optional<VertexSet>& w0,
                           const SplitParams& p) {
  const int n = g.order();
  if (sizes.size() < 2) throw PreconditionError("split_expander needs sizes m0, m1, ...");
  long long total = 0;
  for (int m : sizes) {
    if (m < 0) throw PreconditionError("negative part size");
    total += m;
  }
  if (total != n) throw PreconditionError("part sizes do not sum to n");
  if (w0 && w0->size() != sizes[0]) throw PreconditionError("|W0| differs from m0");
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] < 1) throw PreconditionError("parts W1.. must be non-empty");

  const int t = static_cast<int>(sizes.size()) - 1;
  SplitReport rep;
  rep.failures_per_class.assign(t + 1, 0);
  std::mt19937_64 rng(p.seed);
  std::vector<Vertex> pool;
  for (Vertex v = 0; v < n; ++v)
    if (!w0 || !w0->contains(v)) pool.push_back(v);

  for (int attempt = 0; attempt < p.retries; ++attempt) {
    ++rep.attempts;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<VertexSet> parts(t + 1, VertexSet(n));
    std::size_t next = 0;
    if (w0) {
      parts[0] = *w0;
    } else {
      for (int i = 0; i < sizes[0]; ++i) parts[0].insert(pool[next++]);
    }
    for (int i = 1; i <= t; ++i)
      for (int k = 0; k < sizes[i]; ++k) parts[i].insert(pool[next++]);

    bool ok = true;
    std::vector<double> ratio(t + 1, 0.0);
    for (int i = 1; i <= t; ++i) {
      const double need = p.eta * sizes[i] / 4.0;
      int worst = n;
      for (Vertex x = 0; x < n; ++x) worst = std::min({worst, g.out_degree(x, parts[i]), g.in_degree(x, parts[i])});
      ratio[i] = static_cast<double>(worst) / sizes[i];
      bool pass = worst >= need;
      if (pass) {
        ExpansionParams ep;
        ep.nu = p.nu;
        ep.tau = p.tau;
        ep.mode = CheckMode::Sampled;
        ep.seed = p.seed + static_cast<std::uint64_t>(attempt) * 131 + static_cast<std::uint64_t>(i);
        const auto verdict = certify_expander(g.induced(parts[i]), ep);
        pass = verdict.outcome != ExpansionVerdict::Outcome::Violator;
      }
      if (!pass) {
        ++rep.failures_per_class[i];
        ok = false;
      }
    }
    if (ok) {
      rep.parts = std::move(parts);
      rep.min_degree_ratio = std::move(ratio);
      return rep;
    }
  }
  std::string stats;
  for (int i = 1; i <= t; ++i) stats += (i > 1 ? "," : "") + std::to_string(rep.failures_per_class[i]);
  throw ResourceError("split_expander exhausted " + std::to_string(p.retries) + " resamples; failures per class: " +
                      stats);
}

TwoFactor two_factor(const Digraph& g, int k, const OracleOptions& o) {
  const int n = g.order();
  if (k < 1) throw PreconditionError("k must be positive");
  if (n < 2 * (k + 1)) throw PreconditionError("two_factor needs n >= 2(k+1)");
  const int bound = n + n / (k + 1) - 1;
  if (min_degree(g) < bound)
    throw PreconditionError("minimum degree " + std::to_string(min_degree(g)) + " below " + std::to_string(bound));

  TwoFactor out;
  out.components = strongly_connected_components(g);
  if (static_cast<int>(out.components.size()) > k)
    throw std::logic_error("more than k strong components under the degree condition");
  for (const auto& s : out.components) {
    if (s.size() <= n / (k + 1)) throw std::logic_error("strong component with at most n/(k+1) vertices");
    std::vector<Vertex> labels;
    const Digraph h = g.induced(s, &labels);
    if (min_degree(h) < h.order()) throw std::logic_error("strong component below the Ghouila-Houri bound");
    const auto r = exact_embed(h, CyclePattern::directed(h.order()), {}, o);
    if (r.status == SearchStatus::Timeout) throw ResourceError("Hamilton cycle search timed out");
    if (r.status == SearchStatus::None) throw std::logic_error("strong component without a Hamilton cycle");
    std::vector<Vertex> cycle;
    for (Vertex v : r.embedding.map) cycle.push_back(labels[v]);
    out.cycles.push_back(std::move(cycle));
  }
  return out;
}

int PancyclicReport::found() const {
  return static_cast<int>(std::count_if(cells.begin(), cells.end(), [](const auto& c) { return c.validated; }));
}
int PancyclicReport::missing() const {
  return static_cast<int>(
      std::count_if(cells.begin(), cells.end(), [](const auto& c) { return c.status == SearchStatus::None; }));
}
int PancyclicReport::timeouts() const {
  return static_cast<int>(
      std::count_if(cells.begin(), cells.end(), [](const auto& c) { return c.status == SearchStatus::Timeout; }));
}

namespace {

Digraph double_edge_digraph(const Digraph& g) {
  const auto adj = double_edge_graph(g);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < g.order(); ++u) adj[u].for_each([&](Vertex v) { edges.push_back({u, v}); });
  return Digraph::from_edge_list(g.order(), edges);
}

std::vector<CyclePattern> patterns_for(int len, const PancyclicParams& p, std::mt19937_64& rng) {
  if (p.patterns_per_length == 0) {
    if (len > 16) throw CapabilityError("enumerating every orientation class needs length <= 16");
    return cycle_patterns_up_to_rotation(len);
  }
  std::vector<CyclePattern> out{CyclePattern::directed(len)};
  if (len % 2 == 0) out.push_back(CyclePattern::antidirected(len));
  while (static_cast<int>(out.size()) < p.patterns_per_length) {
    std::vector<bool> f(len);
    for (int i = 0; i < len; ++i) f[i] = rng() & 1;
    out.push_back(canonical_rotation(CyclePattern(f)));
  }
  out.resize(std::min<std::size_t>(out.size(), p.patterns_per_length));
  return out;
}

}  // namespace

PancyclicReport pancyclic_suite(const Digraph& g, const PancyclicParams& p) {
  const int n = g.order();
  PancyclicReport rep;
  rep.degree_condition_met = min_degree(g) >= (1.0 + 1.0 / (p.k + 1) + p.gamma) * n - 1e-9;
  std::mt19937_64 rng(p.seed);
  const Digraph doubled = double_edge_digraph(g);
  OracleOptions quick;
  quick.seconds = std::min(1.0, p.seconds_per_cell);

  for (int len = 3; len <= n; ++len) {
    // One cycle of double edges carries every orientation of its length.
    std::vector<Vertex> carrier;
    const auto dc = exact_embed(doubled, CyclePattern::directed(len), {}, quick);
    if (dc.found()) carrier = dc.embedding.map;

    for (const auto& c : patterns_for(len, p, rng)) {
      PancyclicCell cell;
      cell.length = len;
      cell.pattern = c.to_string();
      std::vector<Vertex> map;
      if (!carrier.empty()) {
        cell.method = "double-edge";
        cell.status = SearchStatus::Found;
        map = carrier;
      } else if (len > 64) {
        cell.method = "subset";
        for (int tries = 0; tries < 3 && map.empty(); ++tries) {
          std::vector<Vertex> order(n);
          for (int i = 0; i < n; ++i) order[i] = i;
          std::shuffle(order.begin(), order.end(), rng);
          VertexSet keep(n);
          for (int i = 0; i < len; ++i) keep.insert(order[i]);
          std::vector<Vertex> labels;
          const Digraph h = g.induced(keep, &labels);
          EmbedParams ep;
          ep.seconds = p.seconds_per_cell;
          ep.seed = p.seed + tries;
          const auto r = embed_hamilton_orientation(h, std::vector<VertexSet>{h.all()}, c, ep);
          if (r.ok)
            for (Vertex v : r.embedding.map) map.push_back(labels[v]);
        }
        cell.status = map.empty() ? SearchStatus::Timeout : SearchStatus::Found;
      } else {
        cell.method = "oracle";
        OracleOptions o;
        o.seconds = p.seconds_per_cell;
        const auto r = exact_embed(g, c, {}, o);
        cell.status = r.status;
        if (r.found()) map = r.embedding.map;
      }
      if (!map.empty()) cell.validated = check_cycle_embedding(g, c, map, false).ok;
      rep.cells.push_back(std::move(cell));
    }
  }
  return rep;
}

}  // namespace ohc
