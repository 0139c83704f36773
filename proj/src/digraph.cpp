#include "orienthc/digraph.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

#include "orienthc/errors.hpp"

namespace ohc {

Digraph Digraph::from_edge_list(int n, const std::vector<Edge>& edges) {
  if (n < 0 || n > kMaxVertices)
    throw InputError("vertex count " + std::to_string(n) + " outside 0.." + std::to_string(kMaxVertices));
  Digraph g;
  g.n_ = n;
  g.out_.assign(n, VertexSet(n));
  g.in_.assign(n, VertexSet(n));
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n || u == v) {
      throw InputError("invalid edge (" + std::to_string(u) + "," + std::to_string(v) + ") for n=" +
                       std::to_string(n));
    }
    if (!g.out_[u].contains(v)) {
      g.out_[u].insert(v);
      g.in_[v].insert(u);
      ++g.m_;
    }
  }
  return g;
}

std::vector<Edge> Digraph::edges() const {
  std::vector<Edge> out;
  out.reserve(m_);
  for (Vertex u = 0; u < n_; ++u) out_[u].for_each([&](Vertex v) { out.emplace_back(u, v); });
  return out;
}

Digraph Digraph::induced(const VertexSet& keep, std::vector<Vertex>* labels) const {
  std::vector<Vertex> old = keep.members();
  std::vector<Vertex> index(n_, -1);
  for (std::size_t i = 0; i < old.size(); ++i) index[old[i]] = static_cast<Vertex>(i);
  std::vector<Edge> es;
  for (Vertex u : old)
    (out_[u] & keep).for_each([&](Vertex v) { es.emplace_back(index[u], index[v]); });
  if (labels) *labels = old;
  return from_edge_list(static_cast<int>(old.size()), es);
}

DegreeProfile degree_profile(const Digraph& g) {
  DegreeProfile p;
  const int n = g.order();
  p.out.resize(n);
  p.in.resize(n);
  p.total.resize(n);
  p.min_degree = n == 0 ? 0 : 2 * n;
  p.min_semidegree = n == 0 ? 0 : n;
  for (Vertex v = 0; v < n; ++v) {
    p.out[v] = g.out_degree(v);
    p.in[v] = g.in_degree(v);
    p.total[v] = p.out[v] + p.in[v];
    p.min_degree = std::min(p.min_degree, p.total[v]);
    p.min_semidegree = std::min({p.min_semidegree, p.out[v], p.in[v]});
  }
  return p;
}

int min_degree_within(const Digraph& g, const VertexSet& within) {
  int best = -1;
  within.for_each([&](Vertex v) {
    int d = g.degree(v, within);
    if (best < 0 || d < best) best = d;
  });
  return std::max(best, 0);
}

int min_semidegree_within(const Digraph& g, const VertexSet& within) {
  int best = -1;
  within.for_each([&](Vertex v) {
    int d = std::min(g.out_degree(v, within), g.in_degree(v, within));
    if (best < 0 || d < best) best = d;
  });
  return std::max(best, 0);
}

CrossCounts cross_counts(const Digraph& g, const VertexSet& a, const VertexSet& b) {
  CrossCounts c;
  a.for_each([&](Vertex v) { c.forward += g.out_degree(v, b); });
  b.for_each([&](Vertex v) { c.backward += g.out_degree(v, a); });
  return c;
}

std::vector<VertexSet> strongly_connected_components(const Digraph& g) {
  const int n = g.order();
  // Iterative Tarjan.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<Vertex> stack;
  std::vector<char> on_stack(n, 0);
  int counter = 0, ncomp = 0;
  struct Frame {
    Vertex v;
    Vertex next;
  };
  for (Vertex root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      Vertex w = g.out(f.v).next(f.next);
      if (w >= 0) {
        f.next = w + 1;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      Vertex v = f.v;
      if (low[v] == index[v]) {
        Vertex x;
        do {
          x = stack.back();
          stack.pop_back();
          on_stack[x] = 0;
          comp[x] = ncomp;
        } while (x != v);
        ++ncomp;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }

  std::vector<VertexSet> sets(ncomp, VertexSet(n));
  std::vector<Vertex> smallest(ncomp, n);
  for (Vertex v = 0; v < n; ++v) {
    sets[comp[v]].insert(v);
    smallest[comp[v]] = std::min(smallest[comp[v]], v);
  }
  std::vector<std::vector<int>> succ(ncomp);
  std::vector<int> indeg(ncomp, 0);
  for (Vertex u = 0; u < n; ++u) {
    g.out(u).for_each([&](Vertex v) {
      if (comp[u] != comp[v]) succ[comp[u]].push_back(comp[v]);
    });
  }
  for (auto& s : succ) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int c : s) ++indeg[c];
  }
  using Item = std::pair<Vertex, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> ready;
  for (int c = 0; c < ncomp; ++c)
    if (indeg[c] == 0) ready.emplace(smallest[c], c);
  std::vector<VertexSet> ordered;
  ordered.reserve(ncomp);
  while (!ready.empty()) {
    int c = ready.top().second;
    ready.pop();
    ordered.push_back(sets[c]);
    for (int d : succ[c])
      if (--indeg[d] == 0) ready.emplace(smallest[d], d);
  }
  return ordered;
}

bool is_strongly_connected(const Digraph& g) {
  return g.order() > 0 && strongly_connected_components(g).size() == 1;
}

std::vector<VertexSet> double_edge_graph(const Digraph& g) {
  std::vector<VertexSet> adj;
  adj.reserve(g.order());
  for (Vertex v = 0; v < g.order(); ++v) adj.push_back(g.out(v) & g.in(v));
  return adj;
}

Digraph read_edge_list(std::istream& in) {
  std::vector<long long> nums;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        long long x = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        nums.push_back(x);
      } catch (const std::exception&) {
        throw InputError("line " + std::to_string(lineno) + ": not an integer: '" + tok + "'");
      }
    }
  }
  if (nums.size() < 2) throw InputError("edge list: missing header 'n m'");
  const long long n = nums[0], m = nums[1];
  if (n < 0 || m < 0) throw InputError("edge list: negative header value");
  if (static_cast<long long>(nums.size()) != 2 + 2 * m)
    throw InputError("edge list: header announces " + std::to_string(m) + " edges but found " +
                     std::to_string((nums.size() - 2) / 2) + (nums.size() % 2 ? " and a dangling value" : ""));
  std::vector<Edge> edges;
  edges.reserve(m);
  for (long long i = 0; i < m; ++i)
    edges.emplace_back(static_cast<Vertex>(nums[2 + 2 * i]), static_cast<Vertex>(nums[3 + 2 * i]));
  return Digraph::from_edge_list(static_cast<int>(n), edges);
}

Digraph read_edge_list_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  return read_edge_list(f);
}

void write_edge_list(std::ostream& out, const Digraph& g, const std::string& header_comment) {
  if (!header_comment.empty()) {
    std::istringstream hs(header_comment);
    std::string line;
    while (std::getline(hs, line)) out << "# " << line << '\n';
  }
  out << g.order() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

}  // namespace ohc
