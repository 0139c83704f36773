#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "orienthc/digraph.hpp"

namespace ohc {

/// Largest n for which the exact 2^n subset sweeps are allowed.
inline constexpr int kExactSweepCap = 24;

enum class CheckMode { Exact, Sampled };

struct ExpansionParams {
  double nu = 0.05;
  double tau = 0.25;
  CheckMode mode = CheckMode::Exact;
  int samples_per_decile = 64;  // sampled mode: random sets per size decile
  std::uint64_t seed = 1;
  std::vector<VertexSet> hints;  // sampled mode: extra candidate sets
  int workers = 1;               // exact mode: parallel sweep chunks
};

struct ExpansionVerdict {
  enum class Outcome { Expander, Violator, Inconclusive };
  Outcome outcome = Outcome::Inconclusive;
  VertexSet set;        // violating S when outcome == Violator
  int rn_size = 0;      // |RN⁺_ν(S)| for the violator
  long long checked_sets = 0;
  CheckMode mode = CheckMode::Exact;

  bool expander() const { return outcome == Outcome::Expander; }
};

struct CutCertificate {
  VertexSet first;   // X₁
  VertexSet second;  // X₂
  long long forward_edges = 0;  // e⁺(X₁, X₂)
  double alpha_achieved = 0.0;  // e⁺(X₁,X₂) / (|X₁||X₂|)
};

struct CutSearch {
  std::optional<CutCertificate> best;  // best cut seen, even above α
  bool found = false;                  // best exists and is α-sparse
  bool exhaustive = false;             // absence of a cut is proved
};

struct CutBudget {
  int exact_cap = kExactSweepCap;
  int restarts = 32;
  std::uint64_t seed = 1;
  std::vector<VertexSet> hints;  // extra starting sides X₁
};

/// {v : d⁻(v, S) ≥ ⌈νn⌉}; vertices of S are not excluded.
VertexSet robust_out_neighborhood(const Digraph& g, const VertexSet& s, double nu);

/// Integral size window ⌈τn⌉ ≤ |S| ≤ ⌊(1-τ)n⌋ and the threshold ⌈|S|+νn⌉.
int expansion_min_size(int n, double tau);
int expansion_max_size(int n, double tau);
int expansion_required(int set_size, int n, double nu);
int robust_threshold(int n, double nu);

/// Exact mode throws CapabilityError above kExactSweepCap.
ExpansionVerdict certify_expander(const Digraph& g, const ExpansionParams& p);

/// e⁺(X₁,X₂)/(|X₁||X₂|) for the cut (x1, complement).
CutCertificate make_cut(const Digraph& g, const VertexSet& x1);

CutSearch find_sparse_cut(const Digraph& g, double alpha, const CutBudget& budget = {});

struct Dichotomy {
  enum class Kind { SparseCut, Expander, Neither, Inconclusive };
  Kind kind = Kind::Inconclusive;
  CutSearch cut;
  std::optional<ExpansionVerdict> verdict;
  double nu = 0.0;
  bool exact = false;
};

/// Sparse cut at α, otherwise an expander certificate for (nu, tau); exact
/// below budget.exact_cap, heuristic cut search plus sampled check above.
Dichotomy sparse_cut_or_expander(const Digraph& g, double alpha, double nu, double tau, const CutBudget& budget = {});

/// The dichotomy with ν := ατη/4. Throws PreconditionError unless
/// δ(G) ≥ (1+η)n and τ < 1/2. In exact mode Kind::Neither cannot occur
/// for a correct implementation.
Dichotomy sparse_or_expander(const Digraph& g, double eta, double alpha, double tau, const CutBudget& budget = {});

}  // namespace ohc
