#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ohc {

/// Orientation of an n-vertex cycle. Edge i joins positions i and i+1 (mod n)
/// and is forward when it points from i to i+1.
class CyclePattern {
 public:
  CyclePattern() = default;
  /// Throws InputError when fewer than 3 positions are given.
  explicit CyclePattern(std::vector<bool> forward);

  static CyclePattern directed(int n);
  /// Throws InputError for odd n.
  static CyclePattern antidirected(int n);
  /// Parses a string over {+,-} (the Unicode minus sign is accepted too) or
  /// one of the aliases "directed" / "antidirected", which need `n`.
  static CyclePattern parse(std::string_view text, std::optional<int> n = std::nullopt);

  int size() const { return static_cast<int>(forward_.size()); }
  bool forward(int edge) const { return forward_[wrap(edge)]; }
  const std::vector<bool>& orientation() const { return forward_; }

  bool is_source(int pos) const { return forward(pos) && !forward(pos - 1); }
  bool is_sink(int pos) const { return !forward(pos) && forward(pos - 1); }
  bool is_switch(int pos) const { return forward(pos) != forward(pos - 1); }
  bool is_directed() const;

  int wrap(int pos) const {
    const int n = size();
    return ((pos % n) + n) % n;
  }

  /// Pattern read starting at `start`: new position i is old position start+i.
  CyclePattern rotated(int start) const;
  /// Same cycle traversed the other way: new position i is old position -i.
  CyclePattern reflected() const;
  /// Every edge reversed.
  CyclePattern converse() const;

  std::string to_string() const;
  friend bool operator==(const CyclePattern&, const CyclePattern&) = default;

 private:
  std::vector<bool> forward_;
};

/// Orientation of a path on `length` vertices; edge i joins i and i+1.
class PathPattern {
 public:
  PathPattern() : forward_{} {}
  explicit PathPattern(std::vector<bool> forward) : forward_(std::move(forward)) {}

  static PathPattern directed(int length);
  static PathPattern antidirected(int length);
  static PathPattern parse(std::string_view text);

  int length() const { return static_cast<int>(forward_.size()) + 1; }
  bool forward(int edge) const { return forward_[edge]; }
  const std::vector<bool>& orientation() const { return forward_; }

  /// The path read from its last vertex back to its first.
  PathPattern reversed() const;
  std::string to_string() const;
  friend bool operator==(const PathPattern&, const PathPattern&) = default;

 private:
  std::vector<bool> forward_;
};

/// Segment of a cycle pattern: `count` consecutive positions from `start`.
PathPattern segment(const CyclePattern& c, int start, int count);

/// Sorted positions that are sources or sinks.
std::vector<int> switches(const CyclePattern& c);

struct DirectedRun {
  int start = 0;           // first position of the run in traversal order
  int vertex_count = 0;    // ℓ, counted in vertices
  bool forward = true;     // edges point from start towards start+ℓ-1
};

/// Longest maximal run of equally oriented edges, wrap-around included.
/// A directed cycle yields {0, n, forward}. Ties go to the smallest start.
DirectedRun longest_directed_segment(const CyclePattern& c);

/// ⌊βn⌋ with a small tolerance so that e.g. 0.3·10 floors to 3.
int floor_fraction(double beta, int n);

struct CaseSplit {
  bool case1 = false;
  DirectedRun run;  // longest directed segment (valid in both cases)
  int window = 0;   // ⌊βn⌋
};

/// Case 1: a directed segment on ⌊βn⌋ vertices exists; Case 2: every
/// ⌊βn⌋-vertex segment has an interior switch.
CaseSplit classify_case(const CyclePattern& c, double beta);

/// True iff every segment on `window` vertices has an interior switch.
bool every_window_has_switch(const CyclePattern& c, int window);

struct PlannedSegment {
  int start = 0;
  int length = 0;
  int target_class = 0;
};

struct SegmentPlan {
  std::vector<PlannedSegment> segments;
  std::vector<int> overshoot;  // d_s for s = 1..t-1 (index s-1)
};

/// Splits a Case-2 cycle (position 0 a source when more than one class is
/// requested) into consecutive segments P_1..P_t where each P_s, s<t, is the
/// shortest one whose final edge is forward and whose cumulative length
/// reaches m_1+…+m_s. Throws PreconditionError when the pattern is not in
/// Case 2 for β, sizes do not sum to n, or some m_i < 3βn.
SegmentPlan partition_case2(const CyclePattern& c, const std::vector<int>& class_sizes, double beta);

struct RunBlock {
  int start = 0;         // absolute position of the block's first vertex
  int size = 0;
  bool next_forward = false;  // orientation of the edge to the next block
};

/// Splits the non-directed part P' = positions 1..n-ℓ of a cycle whose
/// longest directed run occupies positions 0, n-1, …, n-ℓ+1 into
/// q = ⌈(n-ℓ)/D⌉ nearly equal blocks (larger blocks first).
std::vector<RunBlock> directed_run_decomposition_case1b(const CyclePattern& c, int ell, int block_size);

/// Lexicographically least rotation, reading '+' before '-'. When the
/// pattern has a switch this puts a source at position 0.
CyclePattern canonical_rotation(const CyclePattern& c);

/// One representative per rotation class of orientations of an n-cycle.
/// With `include_directed` false the two directed cycles are dropped.
std::vector<CyclePattern> cycle_patterns_up_to_rotation(int n, bool include_directed = true);

/// Every orientation of a path on `length` vertices.
std::vector<PathPattern> all_path_patterns(int length);

}  // namespace ohc
