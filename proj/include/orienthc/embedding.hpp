#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orienthc/decomposition.hpp"
#include "orienthc/digraph.hpp"
#include "orienthc/pattern.hpp"
#include "orienthc/search.hpp"

namespace ohc {

/// Position → vertex map of a pattern into a host digraph.
struct Embedding {
  std::vector<Vertex> map;
};

struct CheckReport {
  bool ok = true;
  std::string reason;
};

/// Independent validity checks. `spanning` additionally requires the image
/// to be all of V(G).
CheckReport check_cycle_embedding(const Digraph& g, const CyclePattern& c, const std::vector<Vertex>& map,
                                  bool spanning);
CheckReport check_path_embedding(const Digraph& g, const PathPattern& p, const std::vector<Vertex>& map,
                                 std::optional<Vertex> start = std::nullopt, std::optional<Vertex> end = std::nullopt);

using Pins = std::vector<std::pair<int, Vertex>>;  // (position, vertex)

struct OracleOptions {
  double seconds = 10.0;
  long long node_limit = -1;
  int workers = 1;
  std::uint64_t value_seed = 0;
  std::optional<VertexSet> allowed;  // restrict images to this set
};

struct EmbedOutcome {
  SearchStatus status = SearchStatus::None;
  Embedding embedding;
  long long nodes = 0;
  bool found() const { return status == SearchStatus::Found; }
};

/// Exhaustive search for a copy of the pattern extending the pins. `None`
/// is a proof of non-existence; `Timeout` means the budget ran out.
EmbedOutcome exact_embed(const Digraph& g, const CyclePattern& c, const Pins& pins = {}, const OracleOptions& o = {});
EmbedOutcome exact_embed(const Digraph& g, const PathPattern& p, const Pins& pins = {}, const OracleOptions& o = {});

/// Copy of `path` from u to v avoiding `forbidden`.
EmbedOutcome embed_path_between(const Digraph& g, const PathPattern& path, Vertex u, Vertex v,
                                const VertexSet& forbidden, const OracleOptions& o = {});

/// Ranks 0..size-1 for the vertices of `path` such that a forward edge goes
/// from the lower to the higher rank.
std::vector<int> tt_embed_path(const PathPattern& path, int size);

struct Connector {
  Vertex from = -1;
  Vertex to = -1;
  friend bool operator==(const Connector&, const Connector&) = default;
};

enum class ConnectorDirection { XToY, YToX };

/// Greedy pairwise-disjoint edges between X and Y avoiding `excluded`.
/// Throws PreconditionError when no usable edge exists and ResourceError
/// when fewer than `count` can be found.
std::vector<Connector> select_connectors(const Digraph& g, const VertexSet& x, const VertexSet& y, int count,
                                         ConnectorDirection direction = ConnectorDirection::XToY,
                                         const VertexSet* excluded = nullptr);

struct EmbedParams {
  double beta = 0.1;
  double rho = 0.0025;
  double eta = 0.3;
  int block_size = 0;         // 0: max(2, ⌊ρn⌋)
  int gadget_cap = -1;        // -1: max(1, ⌊η/(12β)⌋)
  int retries = 16;           // alternative connector selections
  double seconds = 10.0;      // overall budget
  double fill_seconds = 2.0;  // per class fill
  int oracle_cap = 64;        // fallback to exact_embed when n <= cap
  std::uint64_t seed = 1;

  /// Throws ConfigError unless 0 < ρ ≤ β²/4 and β, η in (0,1).
  void validate() const;
  int resolved_block_size(int n) const;
  int resolved_gadget_cap() const;
};

struct Gadget {
  int boundary = 0;      // s (0-based): sink moved from class s to s+1
  int sink = 0;          // position of the sink
  Vertex image = -1;     // its vertex in class s+1
};

struct HandOff {
  int boundary = 0;
  int first = 0;  // first moved position (the sink end)
  int count = 0;  // moved positions first..first+count-1
};

struct EmbedPlan {
  std::string kind;  // "t=1", "1a", "1b", "2", "oracle"
  int t = 0;
  int run_length = 0;
  std::vector<int> class_sizes;
  std::vector<int> budgets;              // unpinned positions per class
  std::vector<int> position_class;       // per original position
  Pins pins;                             // original position → vertex
  std::vector<Connector> connectors;     // cross-class edges used
  std::vector<Gadget> gadgets;
  std::vector<HandOff> handoffs;
  std::vector<int> overshoot;            // d_s per boundary (Case 2)
  std::vector<int> blueprint;            // class per block (Case 1b)
  bool spacing_relaxed = false;          // (D1)-(D3) margins relaxed
  std::vector<std::string> notes;
  int attempts = 0;
  bool fallback = false;
  std::string failed_step;
};

struct PipelineResult {
  bool ok = false;
  Embedding embedding;
  EmbedPlan plan;
  CheckReport check;
};

/// Hamilton cycle of orientation `c` in G guided by the ordered partition
/// (classes with dense forward direction from earlier to later classes).
/// Throws PreconditionError for the directed cycle when t ≥ 2 and for a
/// malformed partition.
PipelineResult embed_hamilton_orientation(const Digraph& g, const std::vector<VertexSet>& classes,
                                          const CyclePattern& c, const EmbedParams& p = {});
PipelineResult embed_hamilton_orientation(const Digraph& g, const StructurePartition& sp, const CyclePattern& c,
                                          const EmbedParams& p = {});

struct SplitReport {
  std::vector<VertexSet> parts;  // W₀ … W_t
  int attempts = 0;
  std::vector<int> failures_per_class;  // resamples rejected because of class i
  std::vector<double> min_degree_ratio;  // min over x of min(d⁺, d⁻)(x, W_i) / m_i
};

struct SplitParams {
  double nu = 0.05;
  double tau = 0.25;
  double eta = 0.3;
  int retries = 32;
  std::uint64_t seed = 1;
};

/// Random partition with prescribed sizes (W₀ fixed when given) such that
/// every part W_i, i ≥ 1, passes a sampled expansion check and every vertex
/// has at least η m_i/4 in- and out-neighbours in W_i.
SplitReport split_expander(const Digraph& g, const std::vector<int>& sizes, const std::optional<VertexSet>& w0,
                           const SplitParams& p = {});

struct TwoFactor {
  std::vector<std::vector<Vertex>> cycles;
  std::vector<VertexSet> components;
};

/// Directed 2-factor with at most k cycles, one per strong component.
TwoFactor two_factor(const Digraph& g, int k, const OracleOptions& o = {});

struct PancyclicCell {
  int length = 0;
  std::string pattern;
  std::string method;  // "double-edge", "subset" or "oracle"
  SearchStatus status = SearchStatus::None;
  bool validated = false;
};

struct PancyclicParams {
  int k = 1;
  double gamma = 0.0;
  int patterns_per_length = 0;  // 0: all necklace classes (n ≤ 16 only)
  std::uint64_t seed = 1;
  double seconds_per_cell = 5.0;
};

struct PancyclicReport {
  bool degree_condition_met = false;
  std::vector<PancyclicCell> cells;
  int found() const;
  int missing() const;
  int timeouts() const;
};

PancyclicReport pancyclic_suite(const Digraph& g, const PancyclicParams& p);

}  // namespace ohc
