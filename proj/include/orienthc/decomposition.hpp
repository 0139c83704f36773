#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orienthc/digraph.hpp"
#include "orienthc/expansion.hpp"

namespace ohc {

/// How the sparsity level changes from round to round.
///  Literal: α_b = α^(2^(k-b)), cleaning round b at α_{b+1}.
///  Flat:    every round searches for α-sparse cuts and cleans at α.
enum class AlphaSchedule { Literal, Flat };

struct DecompositionParams {
  int k = 2;
  double zeta = 0.2;
  double alpha = 0.0;  // 0 selects ζ/(25(k+1))
  double tau = 0.0;    // 0 selects α/10
  double nu = 0.0;     // 0 selects ατζ/16
  int exact_threshold = 20;
  AlphaSchedule schedule = AlphaSchedule::Literal;
  bool enforce_degree = true;  // reject δ(G) < (1 + 1/(k+1) + ζ)n
  std::uint64_t seed = 1;
  int restarts = 32;  // heuristic cut search
  int workers = 1;

  /// Fills zero-valued constants with their defaults.
  DecompositionParams resolved() const;
  /// Throws ConfigError unless ν ≤ ατζ/16, τ ≤ α/8, α ≤ ζ/(24(k+1)).
  void validate() const;
  /// Sparsity threshold for the cut search in round b (0-based).
  double cut_alpha(int round) const;
  /// α handed to the cleaning step in round b.
  double clean_alpha(int round) const;
};

struct Check {
  std::string name;
  bool pass = true;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

struct CleanedCut {
  VertexSet first, second;             // V₁, V₂
  VertexSet moved1, moved2;            // X′₁, X′₂
  VertexSet reassigned1, reassigned2;  // X″₁, X″₂
  double alpha_achieved = 0.0;
  std::vector<Check> hypotheses;   // δ(G), (a), (b), (c), input sparsity, α range
  std::vector<Check> conclusions;  // (i), (ii), (iii) per side, α-sparsity
  bool hypotheses_hold() const;
  bool conclusions_hold() const;
};

/// Cleans the cut (cut.first, cut.second) of G[X]. Both sides are given as
/// vertex sets of G and must partition X. Never throws on hypothesis
/// failure; the failed checks are listed in `hypotheses`.
CleanedCut clean_cut(const Digraph& g, const VertexSet& x, const CutCertificate& cut, int k, double zeta,
                     double alpha);

struct AuditEntry {
  int round = 0;
  VertexSet parent;
  VertexSet raw_first, raw_second;  // cut as found
  VertexSet first, second;          // sides actually used
  double search_alpha = 0.0;
  double raw_alpha = 0.0;
  double used_alpha = 0.0;
  bool cleaned = false;  // false: raw cut kept after a hypothesis or sparsity failure
  bool exhaustive = false;
  std::vector<Check> checks;
  std::string note;
};

struct ClassVerdict {
  ExpansionVerdict verdict;
  bool sampled = false;
  bool frozen_unsplit = false;  // left whole because the class budget k was reached
  std::string note;
};

struct StructurePartition {
  int n = 0;
  std::vector<VertexSet> classes;
  std::vector<ClassVerdict> verdicts;
  std::vector<std::vector<CrossCounts>> pairs;  // pairs[i][j] = (e⁺(V_i,V_j), e⁻(V_i,V_j))
  std::vector<AuditEntry> audit;
  std::vector<std::string> diagnostics;
  int rounds = 0;
  bool reversed = false;

  int size() const { return static_cast<int>(classes.size()); }
  /// Class index of every vertex.
  std::vector<int> class_of() const;
};

StructurePartition decompose(const Digraph& g, const DecompositionParams& p);

struct PartitionReport {
  std::vector<Check> clauses;  // clause 1..4 in order
  std::vector<Check> extras;   // partition validity, class count
  std::vector<ExpansionVerdict> expansion;
  bool valid_partition = true;
  bool clause(int i) const { return clauses.at(i - 1).pass; }
  bool all_pass() const;
};

/// Recomputes every numeric claim for an arbitrary list of classes.
PartitionReport verify_partition(const Digraph& g, const std::vector<VertexSet>& classes, const DecompositionParams& p);
PartitionReport verify_partition(const Digraph& g, const StructurePartition& sp, const DecompositionParams& p);

StructurePartition reverse_for_embedding(const StructurePartition& sp);

/// Recomputes per-pair (e⁺, e⁻) counts for the given class order.
std::vector<std::vector<CrossCounts>> pair_counts(const Digraph& g, const std::vector<VertexSet>& classes);

}  // namespace ohc
