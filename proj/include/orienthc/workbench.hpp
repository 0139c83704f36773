#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "orienthc/decomposition.hpp"
#include "orienthc/embedding.hpp"
#include "orienthc/expansion.hpp"

namespace ohc {

using json = nlohmann::json;

// ---- serialization -------------------------------------------------------

json to_json(const VertexSet& s);
json to_json(const ExpansionVerdict& v, double nu, double tau);
json to_json(const CutCertificate& c);
json to_json(const Check& c);
json to_json(const PartitionReport& r);
json to_json(const StructurePartition& sp);
json to_json(const EmbedPlan& plan);
json embedding_json(const CyclePattern& c, const PipelineResult& r);

/// Ordered classes from a partition document ({"classes": [[...], ...]}).
/// Throws InputError when the document is malformed.
std::vector<VertexSet> classes_from_json(const json& doc, int n);

// ---- trial records -------------------------------------------------------

enum class Outcome { Pass, Fail, Inconclusive, Timeout };
const char* to_string(Outcome o);

struct TrialRecord {
  std::string suite;
  int n = 0;
  json params = json::object();
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::Pass;
  double millis = 0.0;
  std::string artifact;    // path of a certificate or reproducer input
  std::string reproducer;  // command line, set for every failure
};

/// Trials run concurrently; records come back in trial order.
struct SuiteContext {
  int workers = 1;
  std::string artifact_dir;  // failing inputs are written here when non-empty
};

struct GhouilaHouriConfig {
  int n = 5;
  bool exhaustive = true;  // every labelled digraph (n ≤ 5)
  int trials = 2000;       // sampled mode
  std::uint64_t seed = 1;
};
std::vector<TrialRecord> suite_ghouila_houri(const GhouilaHouriConfig& c, const SuiteContext& ctx = {});

/// Decomposition settings used for planted instances with t classes.
DecompositionParams planted_params(int t, double zeta, std::uint64_t seed);

struct MainTheoremConfig {
  std::vector<int> n_grid{60};
  std::vector<int> classes{2};  // planted class counts
  int instances = 2;
  int patterns = 10;
  double intra = 0.95;
  double noise = 0.001;
  double zeta = 0.3;
  std::uint64_t seed = 1;
  EmbedParams embed;
};
std::vector<TrialRecord> suite_main_theorem(const MainTheoremConfig& c, const SuiteContext& ctx = {});

struct DichotomyConfig {
  int n = 12;
  int trials = 1000;
  double eta = 0.3;
  double alpha = 0.3;
  double tau = 0.25;
  bool break_degree = false;  // negative control: skip the δ-condition
  std::uint64_t seed = 1;
};
std::vector<TrialRecord> suite_dichotomy(const DichotomyConfig& c, const SuiteContext& ctx = {});

struct PancyclicityConfig {
  std::vector<int> n_grid{10};
  std::vector<int> k_grid{1};
  double gamma = 0.0;
  int instances = 5;
  bool moreover = true;    // δ ≥ ⌊3n/2⌋-1 instead of the k-condition
  bool g1_absence = true;  // also check the G₁ witnesses
  int patterns_per_length = 0;
  std::uint64_t seed = 1;
};
std::vector<TrialRecord> suite_pancyclicity(const PancyclicityConfig& c, const SuiteContext& ctx = {});

struct TwoFactorConfig {
  std::vector<int> n_grid{12};
  std::vector<int> k_grid{2};
  int trials = 100;
  std::uint64_t seed = 1;
};
std::vector<TrialRecord> suite_two_factor(const TwoFactorConfig& c, const SuiteContext& ctx = {});

// ---- experiments ---------------------------------------------------------

struct SuiteEntry {
  std::string name;  // ghouila_houri | main_theorem | dichotomy | pancyclicity | two_factor
  json params = json::object();
};

struct ExperimentConfig {
  std::vector<SuiteEntry> suites;
  int workers = 1;

  /// Throws ConfigError naming the offending path and field.
  static ExperimentConfig from_json(const json& doc);
};

struct SuiteSummary {
  std::string name;
  int pass = 0, fail = 0, inconclusive = 0, timeout = 0;
  bool asserting = true;  // failures count against the exit status
};

struct RunSummary {
  std::vector<SuiteSummary> suites;
  bool any_failure() const;
  json to_json() const;
};

/// Runs every suite, writing <suite>.csv, artifacts and summary.json into
/// `out_dir`.
RunSummary run(const ExperimentConfig& config, const std::string& out_dir);

/// CSV row: suite, n, params-json, seed, outcome, millis, artifact-path.
std::string csv_header();
std::string csv_row(const TrialRecord& r);

/// Worker count from OHC_WORKERS, falling back to `fallback`.
int workers_from_env(int fallback = 1);

}  // namespace ohc
