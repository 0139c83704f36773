#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "orienthc/vertex_set.hpp"

namespace ohc {

using Edge = std::pair<Vertex, Vertex>;

/// Immutable loopless digraph with at most one edge per ordered pair.
///
/// Out- and in-neighbourhoods are stored as bitsets so that the counting
/// kernels used by the expansion and embedding code reduce to popcounts.
class Digraph {
 public:
  Digraph() = default;

  /// Throws InputError naming the first loop or out-of-range pair.
  static Digraph from_edge_list(int n, const std::vector<Edge>& edges);

  int order() const { return n_; }
  int edge_count() const { return m_; }

  bool has_edge(Vertex u, Vertex v) const { return out_[u].contains(v); }
  const VertexSet& out(Vertex v) const { return out_[v]; }
  const VertexSet& in(Vertex v) const { return in_[v]; }

  int out_degree(Vertex v) const { return out_[v].size(); }
  int in_degree(Vertex v) const { return in_[v].size(); }
  int degree(Vertex v) const { return out_degree(v) + in_degree(v); }

  int out_degree(Vertex v, const VertexSet& into) const { return out_[v].intersection_size(into); }
  int in_degree(Vertex v, const VertexSet& from) const { return in_[v].intersection_size(from); }
  int degree(Vertex v, const VertexSet& w) const { return out_degree(v, w) + in_degree(v, w); }

  std::vector<Edge> edges() const;

  /// G[keep], with vertices renumbered in increasing order. `labels`
  /// receives the original index of each new vertex when non-null.
  Digraph induced(const VertexSet& keep, std::vector<Vertex>* labels = nullptr) const;

  VertexSet all() const { return VertexSet::full(n_); }

 private:
  int n_ = 0;
  int m_ = 0;
  std::vector<VertexSet> out_;
  std::vector<VertexSet> in_;
};

struct DegreeProfile {
  std::vector<int> out;
  std::vector<int> in;
  std::vector<int> total;
  int min_degree = 0;       // δ(G)
  int min_semidegree = 0;   // δ⁰(G)
};

DegreeProfile degree_profile(const Digraph& g);

inline int min_degree(const Digraph& g) { return degree_profile(g).min_degree; }

/// δ(G[within]) computed without building the induced digraph.
int min_degree_within(const Digraph& g, const VertexSet& within);
int min_semidegree_within(const Digraph& g, const VertexSet& within);

struct CrossCounts {
  long long forward = 0;   // e⁺(A,B)
  long long backward = 0;  // e⁻(A,B) = e⁺(B,A)
  long long total() const { return forward + backward; }
};

/// A and B need not be disjoint.
CrossCounts cross_counts(const Digraph& g, const VertexSet& a, const VertexSet& b);

/// Components in topological order of the condensation; among components
/// that are simultaneously available the one holding the smallest vertex
/// comes first.
std::vector<VertexSet> strongly_connected_components(const Digraph& g);

bool is_strongly_connected(const Digraph& g);

/// Undirected graph of the double edges of g, as symmetric adjacency sets.
std::vector<VertexSet> double_edge_graph(const Digraph& g);

// Edge-list text format: "n m" then m lines "u v"; '#' starts a comment.
Digraph read_edge_list(std::istream& in);
Digraph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Digraph& g, const std::string& header_comment = {});

}  // namespace ohc
