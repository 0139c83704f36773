#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orienthc/digraph.hpp"

namespace ohc {

Digraph gen_complete_digraph(int n);

/// Complete bipartite digraph with parts of sizes ⌈n/2⌉-1 (vertices
/// 0..) and ⌊n/2⌋+1, all edges in both directions across, none inside.
Digraph gen_bipartite_extremal(int n);

/// Disjoint complete digraphs on ⌊n/2⌋ and ⌈n/2⌉ vertices.
Digraph gen_split_cliques(int n);

/// Blow-up of a transitive tournament. Parts are consecutive vertex ranges
/// in the given order; for parts i < j every edge j→i is present and each
/// i→j edge appears independently with probability `forward_noise`. Inside
/// a part every pair carries a double edge with probability `intra`.
Digraph gen_blowup_tt(const std::vector<int>& part_sizes, double intra, double forward_noise, std::uint64_t seed);

/// Vertex ranges of the parts produced by gen_blowup_tt.
std::vector<VertexSet> blowup_parts(const std::vector<int>& part_sizes);

/// Balanced part sizes for n vertices split into `parts` parts (larger first).
std::vector<int> balanced_sizes(int n, int parts);

struct RandomMinDegree {
  Digraph graph;
  int augmentations = 0;
};

/// Random digraph (each ordered pair kept with probability
/// target/(2(n-1)), or 1/2 when target is 0) followed by greedy random
/// augmentation of vertices whose degree is below `delta_target`.
RandomMinDegree gen_random_min_degree(int n, int delta_target, std::uint64_t seed);

enum class TournamentKind { Random, Transitive };
Digraph gen_tournament(int n, TournamentKind kind, std::uint64_t seed = 0);

/// Family tag plus parameters, as accepted by the `generate` subcommand.
struct GenSpec {
  std::string family;  // complete | bipartite | split | g1 | random | tournament | transitive
  int n = 0;
  std::vector<int> sizes;
  double intra = 1.0;
  double noise = 0.0;
  int delta = 0;
  std::uint64_t seed = 0;
};

/// Throws InputError for unknown families or invalid parameters.
Digraph generate(const GenSpec& spec);
std::string describe(const GenSpec& spec);  // JSON, for provenance headers

}  // namespace ohc
