#include "orienthc/workbench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "orienthc/errors.hpp"
#include "orienthc/generators.hpp"

namespace ohc {

namespace fs = std::filesystem;

// ---- serialization -------------------------------------------------------

json to_json(const VertexSet& s) { return s.members(); }

namespace {

const char* outcome_name(ExpansionVerdict::Outcome o) {
  switch (o) {
    case ExpansionVerdict::Outcome::Expander: return "expander";
    case ExpansionVerdict::Outcome::Violator: return "violator";
    case ExpansionVerdict::Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* mode_name(CheckMode m) { return m == CheckMode::Exact ? "exact" : "sampled"; }

}  // namespace

json to_json(const ExpansionVerdict& v, double nu, double tau) {
  json j{{"outcome", outcome_name(v.outcome)},
         {"params", {{"nu", nu}, {"tau", tau}}},
         {"counts", {{"checked_sets", v.checked_sets}, {"rn_size", v.rn_size}}},
         {"mode", mode_name(v.mode)}};
  if (v.outcome == ExpansionVerdict::Outcome::Violator) j["set"] = to_json(v.set);
  return j;
}

json to_json(const CutCertificate& c) {
  return {{"outcome", "sparse_cut"},
          {"cut", {to_json(c.first), to_json(c.second)}},
          {"counts", {{"forward_edges", c.forward_edges}}},
          {"alpha_achieved", c.alpha_achieved}};
}

json to_json(const Check& c) {
  return {{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}, {"bound", c.bound}, {"detail", c.detail}};
}

namespace {

json checks_json(const std::vector<Check>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back(to_json(c));
  return a;
}

}  // namespace

json to_json(const PartitionReport& r) {
  json exp = json::array();
  for (const auto& v : r.expansion)
    exp.push_back({{"outcome", outcome_name(v.outcome)}, {"mode", mode_name(v.mode)}, {"checked_sets", v.checked_sets}});
  return {{"clauses", checks_json(r.clauses)},
          {"extras", checks_json(r.extras)},
          {"expansion", exp},
          {"valid_partition", r.valid_partition},
          {"all_pass", r.all_pass()}};
}

json to_json(const StructurePartition& sp) {
  json classes = json::array();
  for (const auto& c : sp.classes) classes.push_back(to_json(c));
  json verdicts = json::array();
  for (const auto& v : sp.verdicts)
    verdicts.push_back({{"outcome", outcome_name(v.verdict.outcome)},
                        {"mode", mode_name(v.verdict.mode)},
                        {"sampled", v.sampled},
                        {"frozen_unsplit", v.frozen_unsplit},
                        {"note", v.note}});
  json pairs = json::array();
  for (const auto& row : sp.pairs) {
    json r = json::array();
    for (const auto& cc : row) r.push_back({{"forward", cc.forward}, {"backward", cc.backward}});
    pairs.push_back(r);
  }
  json audit = json::array();
  for (const auto& a : sp.audit)
    audit.push_back({{"round", a.round},
                     {"parent", to_json(a.parent)},
                     {"raw_cut", {to_json(a.raw_first), to_json(a.raw_second)}},
                     {"cut", {to_json(a.first), to_json(a.second)}},
                     {"search_alpha", a.search_alpha},
                     {"raw_alpha", a.raw_alpha},
                     {"used_alpha", a.used_alpha},
                     {"cleaned", a.cleaned},
                     {"exhaustive", a.exhaustive},
                     {"checks", checks_json(a.checks)},
                     {"note", a.note}});
  return {{"n", sp.n},         {"classes", classes}, {"verdicts", verdicts},       {"pairs", pairs},
          {"audit", audit},    {"rounds", sp.rounds}, {"diagnostics", sp.diagnostics}, {"reversed", sp.reversed}};
}

json to_json(const EmbedPlan& plan) {
  json pins = json::array();
  for (const auto& [pos, v] : plan.pins) pins.push_back({pos, v});
  json connectors = json::array();
  for (const auto& c : plan.connectors) connectors.push_back({c.from, c.to});
  json gadgets = json::array();
  for (const auto& g : plan.gadgets) gadgets.push_back({{"boundary", g.boundary + 1}, {"sink", g.sink}, {"image", g.image}});
  json handoffs = json::array();
  for (const auto& h : plan.handoffs)
    handoffs.push_back({{"boundary", h.boundary + 1}, {"first", h.first}, {"count", h.count}});
  return {{"case", plan.kind},
          {"t", plan.t},
          {"run_length", plan.run_length},
          {"class_sizes", plan.class_sizes},
          {"budgets", plan.budgets},
          {"pins", pins},
          {"connectors", connectors},
          {"gadgets", gadgets},
          {"handoffs", handoffs},
          {"overshoot", plan.overshoot},
          {"blueprint", plan.blueprint},
          {"spacing_relaxed", plan.spacing_relaxed},
          {"attempts", plan.attempts},
          {"fallback", plan.fallback},
          {"failed_step", plan.failed_step},
          {"notes", plan.notes}};
}

json embedding_json(const CyclePattern& c, const PipelineResult& r) {
  json map = json::array();
  for (std::size_t i = 0; i < r.embedding.map.size(); ++i) map.push_back({static_cast<int>(i), r.embedding.map[i]});
  return {{"pattern", c.to_string()},
          {"n", c.size()},
          {"ok", r.ok},
          {"checker", {{"valid", r.check.ok}, {"reason", r.check.reason}}},
          {"map", map},
          {"plan", to_json(r.plan)}};
}

std::vector<VertexSet> classes_from_json(const json& doc, int n) {
  if (!doc.is_object() || !doc.contains("classes") || !doc["classes"].is_array())
    throw InputError("partition document needs a \"classes\" array");
  std::vector<VertexSet> out;
  for (const auto& cls : doc["classes"]) {
    if (!cls.is_array()) throw InputError("partition class must be an array of vertices");
    VertexSet s(n);
    for (const auto& v : cls) {
      if (!v.is_number_integer()) throw InputError("partition vertex must be an integer");
      const int x = v.get<int>();
      if (x < 0 || x >= n) throw InputError("partition vertex " + std::to_string(x) + " out of range");
      s.insert(x);
    }
    out.push_back(s);
  }
  return out;
}

// ---- trial records -------------------------------------------------------

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Inconclusive: return "inconclusive";
    case Outcome::Timeout: return "timeout";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32 | out[1]) % 1000000007ULL + 1;
}

template <class F>
std::vector<TrialRecord> parallel_trials(int count, int workers, F&& f) {
  std::vector<TrialRecord> out(count);
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::future<void>> pool;
  for (int w = 0; w < std::min(workers, count); ++w)
    pool.push_back(std::async(std::launch::async, [&] {
      for (int i = next++; i < count; i = next++) out[i] = f(i);
    }));
  for (auto& p : pool) p.get();
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string save_artifact(const SuiteContext& ctx, const std::string& name, const Digraph& g, const std::string& note) {
  if (ctx.artifact_dir.empty()) return {};
  fs::create_directories(ctx.artifact_dir);
  const std::string path = (fs::path(ctx.artifact_dir) / name).string();
  std::ofstream out(path);
  write_edge_list(out, g, note);
  return path;
}

Digraph from_mask(int n, const std::vector<Edge>& pairs, std::uint32_t mask) {
  std::vector<Edge> edges;
  for (std::size_t b = 0; b < pairs.size(); ++b)
    if (mask >> b & 1U) edges.push_back(pairs[b]);
  return Digraph::from_edge_list(n, edges);
}

Outcome outcome_of(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return Outcome::Pass;
    case SearchStatus::None: return Outcome::Fail;
    case SearchStatus::Timeout: return Outcome::Timeout;
  }
  return Outcome::Fail;
}

CyclePattern random_nondirected(int n, std::mt19937_64& rng) {
  while (true) {
    std::vector<bool> f(n);
    for (int i = 0; i < n; ++i) f[i] = rng() & 1;
    CyclePattern c(f);
    if (!c.is_directed()) return c;
  }
}

}  // namespace

std::vector<TrialRecord> suite_ghouila_houri(const GhouilaHouriConfig& c, const SuiteContext& ctx) {
  std::vector<TrialRecord> out;
  const int n = c.n;
  if (c.exhaustive) {
    if (n > 5) throw ConfigError("ghouila_houri: exhaustive mode needs n <= 5");
    std::vector<Edge> pairs;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v) pairs.push_back({u, v});
    const auto t0 = Clock::now();
    long long cycle_checked = 0, path_checked = 0, cycle_bad = 0, path_bad = 0, timeouts = 0;
    std::vector<TrialRecord> failures;
    const std::uint32_t total = 1U << pairs.size();
    for (std::uint32_t mask = 0; mask < total; ++mask) {
      int deg[8] = {0};
      for (std::size_t b = 0; b < pairs.size(); ++b)
        if (mask >> b & 1U) ++deg[pairs[b].first], ++deg[pairs[b].second];
      const int delta = *std::min_element(deg, deg + n);
      if (delta < n - 1) continue;
      const Digraph g = from_mask(n, pairs, mask);
      std::vector<std::pair<std::string, SearchStatus>> claims;
      ++path_checked;
      claims.push_back({"path", exact_embed(g, PathPattern::directed(n)).status});
      if (delta >= n && is_strongly_connected(g)) {
        ++cycle_checked;
        claims.push_back({"cycle", exact_embed(g, CyclePattern::directed(n)).status});
      }
      for (const auto& [claim, st] : claims) {
        if (st == SearchStatus::Found) continue;
        if (st == SearchStatus::Timeout) {
          ++timeouts;
          continue;
        }
        (claim == "cycle" ? cycle_bad : path_bad) += 1;
        TrialRecord r;
        r.suite = "ghouila_houri";
        r.n = n;
        r.params = {{"claim", claim}, {"mask", mask}};
        r.outcome = Outcome::Fail;
        r.artifact = save_artifact(ctx, "gh_" + std::to_string(mask) + ".edges", g, "ghouila_houri counterexample");
        r.reproducer = "ohc embed --input " + (r.artifact.empty() ? std::string("G.edges") : r.artifact) +
                       " --pattern directed --mode oracle" + (claim == "path" ? std::string(" --path") : "");
        failures.push_back(r);
      }
    }
    const double ms = millis_since(t0);
    for (const auto& [claim, checked, bad] : {std::tuple{"cycle", cycle_checked, cycle_bad},
                                              std::tuple{"path", path_checked, path_bad}}) {
      TrialRecord r;
      r.suite = "ghouila_houri";
      r.n = n;
      r.params = {{"claim", claim}, {"mode", "exhaustive"}, {"checked", checked}, {"violations", bad},
                  {"timeouts", timeouts}};
      r.outcome = bad ? Outcome::Fail : Outcome::Pass;
      r.millis = ms;
      if (bad) r.reproducer = "ohc experiment --config <ghouila_houri exhaustive n=" + std::to_string(n) + ">";
      out.push_back(r);
    }
    out.insert(out.end(), failures.begin(), failures.end());
    return out;
  }
  return parallel_trials(c.trials, 1, [&](int i) {
    TrialRecord r;
    r.suite = "ghouila_houri";
    r.n = n;
    r.seed = derive_seed(c.seed, i);
    const bool cycle = i % 2 == 1;
    r.params = {{"claim", cycle ? "cycle" : "path"}, {"mode", "sampled"}};
    const auto t0 = Clock::now();
    const Digraph g = gen_random_min_degree(n, cycle ? n : n - 1, r.seed).graph;
    if (cycle && !is_strongly_connected(g)) {
      r.outcome = Outcome::Inconclusive;
      r.params["note"] = "not strongly connected";
    } else {
      const auto st = cycle ? exact_embed(g, CyclePattern::directed(n)).status
                            : exact_embed(g, PathPattern::directed(n)).status;
      r.outcome = outcome_of(st);
    }
    r.millis = millis_since(t0);
    if (r.outcome == Outcome::Fail)
      r.reproducer = "ohc generate --family random --n " + std::to_string(n) + " --delta " +
                     std::to_string(cycle ? n : n - 1) + " --seed " + std::to_string(r.seed) +
                     " --out G.edges && ohc embed --input G.edges --pattern directed --mode oracle";
    return r;
  });
}

DecompositionParams planted_params(int t, double zeta, std::uint64_t seed) {
  DecompositionParams p;
  p.k = t <= 2 ? 2 : 2 * t - 1;
  p.zeta = zeta;
  p.alpha = zeta / (24.0 * (p.k + 1));
  p.schedule = AlphaSchedule::Flat;
  p.enforce_degree = false;
  p.seed = seed;
  return p;
}

std::vector<TrialRecord> suite_main_theorem(const MainTheoremConfig& c, const SuiteContext& ctx) {
  struct Cell {
    int n, t, instance, pattern;
  };
  std::vector<Cell> cells;
  for (int n : c.n_grid)
    for (int t : c.classes)
      for (int i = 0; i < c.instances; ++i)
        for (int k = 0; k < c.patterns; ++k) cells.push_back({n, t, i, k});

  return parallel_trials(static_cast<int>(cells.size()), ctx.workers, [&](int idx) {
    const Cell& cell = cells[idx];
    TrialRecord r;
    r.suite = "main_theorem";
    r.n = cell.n;
    r.seed = derive_seed(c.seed, static_cast<std::uint64_t>(cell.n) * 1000 + cell.t * 100 + cell.instance);
    const auto sizes = balanced_sizes(cell.n, cell.t);
    const Digraph g = gen_blowup_tt(sizes, c.intra, c.noise, r.seed);
    std::mt19937_64 rng(derive_seed(r.seed, cell.pattern));
    const CyclePattern pattern = random_nondirected(cell.n, rng);
    r.params = {{"t", cell.t}, {"intra", c.intra}, {"noise", c.noise}, {"pattern", pattern.to_string()}};
    const auto t0 = Clock::now();
    const auto sp = decompose(g, planted_params(cell.t, c.zeta, r.seed));
    EmbedParams ep = c.embed;
    ep.seed = r.seed;
    const auto res = embed_hamilton_orientation(g, sp, pattern, ep);
    r.params["case"] = res.plan.kind;
    r.params["classes_found"] = sp.size();
    r.params["degree_ok"] = min_degree(g) >= 1.3 * cell.n;
    r.outcome = res.ok ? Outcome::Pass : Outcome::Fail;
    if (!res.ok) r.params["failed_step"] = res.plan.failed_step;
    if (!res.ok && cell.n <= 14) {
      const auto o = exact_embed(g, pattern);
      r.params["oracle"] = to_string(o.status);
      if (o.status == SearchStatus::None) r.outcome = Outcome::Inconclusive;
      if (o.status == SearchStatus::Timeout) r.outcome = Outcome::Timeout;
    }
    r.millis = millis_since(t0);
    if (r.outcome == Outcome::Fail) {
      r.artifact = save_artifact(ctx, "main_" + std::to_string(r.seed) + ".edges", g, "main_theorem failure");
      const auto p = planted_params(cell.t, c.zeta, r.seed);
      r.reproducer = "ohc generate --family g1 --sizes " + join(sizes) + " --intra " + std::to_string(c.intra) +
                     " --noise " + std::to_string(c.noise) + " --seed " + std::to_string(r.seed) +
                     " --out G.edges && ohc partition --input G.edges --k " + std::to_string(p.k) + " --zeta " +
                     std::to_string(c.zeta) + " --alpha " + std::to_string(p.alpha) +
                     " --schedule flat --no-degree-check --seed " + std::to_string(r.seed) +
                     " --out P.json && ohc embed --input G.edges --partition P.json --pattern " + pattern.to_string() +
                     " --seed " + std::to_string(r.seed) + " --out E.json";
    }
    return r;
  });
}

std::vector<TrialRecord> suite_dichotomy(const DichotomyConfig& c, const SuiteContext& ctx) {
  if (c.n > 14) throw ConfigError("dichotomy: exact mode needs n <= 14");
  const int delta = c.break_degree ? c.n : static_cast<int>(std::ceil((1 + c.eta) * c.n - 1e-9));
  return parallel_trials(c.trials, ctx.workers, [&](int i) {
    TrialRecord r;
    r.suite = "dichotomy";
    r.n = c.n;
    r.seed = derive_seed(c.seed, i);
    r.params = {{"eta", c.eta}, {"alpha", c.alpha}, {"tau", c.tau}, {"delta", delta}, {"control", c.break_degree}};
    const auto t0 = Clock::now();
    const Digraph g = gen_random_min_degree(c.n, delta, r.seed).graph;
    const Dichotomy d = c.break_degree ? sparse_cut_or_expander(g, c.alpha, c.alpha * c.tau * c.eta / 4, c.tau)
                                       : sparse_or_expander(g, c.eta, c.alpha, c.tau);
    r.millis = millis_since(t0);
    const char* kind = d.kind == Dichotomy::Kind::SparseCut  ? "sparse_cut"
                       : d.kind == Dichotomy::Kind::Expander ? "expander"
                       : d.kind == Dichotomy::Kind::Neither  ? "neither"
                                                             : "inconclusive";
    r.params["result"] = kind;
    if (d.kind == Dichotomy::Kind::SparseCut || d.kind == Dichotomy::Kind::Expander)
      r.outcome = Outcome::Pass;
    else if (d.kind == Dichotomy::Kind::Neither && !c.break_degree)
      r.outcome = Outcome::Fail;
    else
      r.outcome = Outcome::Inconclusive;
    if (r.outcome == Outcome::Fail) {
      r.artifact = save_artifact(ctx, "dichotomy_" + std::to_string(r.seed) + ".edges", g, "dichotomy neither");
      r.reproducer = "ohc generate --family random --n " + std::to_string(c.n) + " --delta " + std::to_string(delta) +
                     " --seed " + std::to_string(r.seed) + " --out G.edges && ohc verify --input G.edges --alpha " +
                     std::to_string(c.alpha) + " --tau " + std::to_string(c.tau) + " --eta " + std::to_string(c.eta);
    }
    return r;
  });
}

std::vector<TrialRecord> suite_pancyclicity(const PancyclicityConfig& c, const SuiteContext& ctx) {
  struct Cell {
    int n, k, instance;
  };
  std::vector<Cell> cells;
  for (int n : c.n_grid)
    for (int k : c.k_grid)
      for (int i = 0; i < c.instances; ++i) cells.push_back({n, k, i});
  auto out = parallel_trials(static_cast<int>(cells.size()), ctx.workers, [&](int idx) {
    const Cell& cell = cells[idx];
    TrialRecord r;
    r.suite = "pancyclicity";
    r.n = cell.n;
    r.seed = derive_seed(c.seed, idx);
    const int delta = c.moreover ? 3 * cell.n / 2 - 1
                                 : static_cast<int>(std::ceil((1.0 + 1.0 / (cell.k + 1) + c.gamma) * cell.n - 1e-9));
    const auto t0 = Clock::now();
    const Digraph g = gen_random_min_degree(cell.n, delta, r.seed).graph;
    PancyclicParams pp;
    pp.k = cell.k;
    pp.gamma = c.gamma;
    pp.patterns_per_length = c.patterns_per_length;
    pp.seed = r.seed;
    const auto rep = pancyclic_suite(g, pp);
    r.millis = millis_since(t0);
    r.params = {{"k", cell.k},
                {"delta", delta},
                {"moreover", c.moreover},
                {"cells", rep.cells.size()},
                {"found", rep.found()},
                {"missing", rep.missing()},
                {"timeouts", rep.timeouts()}};
    const bool asserted = c.moreover || rep.degree_condition_met;
    if (rep.found() == static_cast<int>(rep.cells.size()))
      r.outcome = Outcome::Pass;
    else if (rep.missing() > 0)
      r.outcome = asserted ? Outcome::Fail : Outcome::Inconclusive;
    else
      r.outcome = Outcome::Timeout;
    if (r.outcome == Outcome::Fail) {
      r.artifact = save_artifact(ctx, "pancyclic_" + std::to_string(r.seed) + ".edges", g, "pancyclicity gap");
      r.reproducer = "ohc generate --family random --n " + std::to_string(cell.n) + " --delta " +
                     std::to_string(delta) + " --seed " + std::to_string(r.seed) + " --out G.edges";
    }
    return r;
  });
  if (!c.g1_absence) return out;
  for (int n : c.n_grid)
    for (int k : c.k_grid) {
      const auto sizes = balanced_sizes(n, k + 1);
      const Digraph g1 = gen_blowup_tt(sizes, 1.0, 0.0, 0);
      const int longest = (n + k) / (k + 1);
      for (int len = longest + 1; len <= n; ++len) {
        TrialRecord r;
        r.suite = "pancyclicity";
        r.n = n;
        r.params = {{"k", k}, {"witness", "g1"}, {"sizes", sizes}, {"directed_length", len}};
        const auto t0 = Clock::now();
        const auto st = exact_embed(g1, CyclePattern::directed(len)).status;
        r.millis = millis_since(t0);
        r.outcome = st == SearchStatus::None ? Outcome::Pass : st == SearchStatus::Timeout ? Outcome::Timeout : Outcome::Fail;
        if (r.outcome == Outcome::Fail)
          r.reproducer = "ohc generate --family g1 --sizes " + join(sizes) + " --out G.edges";
        out.push_back(r);
      }
    }
  return out;
}

std::vector<TrialRecord> suite_two_factor(const TwoFactorConfig& c, const SuiteContext& ctx) {
  struct Cell {
    int n, k, trial;
  };
  std::vector<Cell> cells;
  for (int n : c.n_grid)
    for (int k : c.k_grid)
      for (int i = 0; i < c.trials; ++i) cells.push_back({n, k, i});
  auto out = parallel_trials(static_cast<int>(cells.size()), ctx.workers, [&](int idx) {
    const Cell& cell = cells[idx];
    TrialRecord r;
    r.suite = "two_factor";
    r.n = cell.n;
    r.seed = derive_seed(c.seed, idx);
    const int delta = cell.n + cell.n / (cell.k + 1) - 1;
    r.params = {{"k", cell.k}, {"delta", delta}};
    const auto t0 = Clock::now();
    const Digraph g = gen_random_min_degree(cell.n, delta, r.seed).graph;
    try {
      const auto f = two_factor(g, cell.k);
      int covered = 0;
      bool sizes_ok = true;
      for (const auto& cyc : f.cycles) {
        covered += static_cast<int>(cyc.size());
        sizes_ok = sizes_ok && static_cast<int>(cyc.size()) > cell.n / (cell.k + 1);
      }
      r.params["cycles"] = f.cycles.size();
      r.outcome = covered == cell.n && static_cast<int>(f.cycles.size()) <= cell.k && sizes_ok ? Outcome::Pass
                                                                                             : Outcome::Fail;
    } catch (const ResourceError&) {
      r.outcome = Outcome::Timeout;
    } catch (const PreconditionError& e) {
      r.outcome = Outcome::Inconclusive;
      r.params["note"] = e.what();
    } catch (const std::logic_error& e) {
      r.outcome = Outcome::Fail;
      r.params["note"] = e.what();
    }
    r.millis = millis_since(t0);
    if (r.outcome == Outcome::Fail) {
      r.artifact = save_artifact(ctx, "two_factor_" + std::to_string(r.seed) + ".edges", g, "two_factor failure");
      r.reproducer = "ohc generate --family random --n " + std::to_string(cell.n) + " --delta " +
                     std::to_string(delta) + " --seed " + std::to_string(r.seed) + " --out G.edges";
    }
    return r;
  });
  // Tightness: G₁ sits one below the threshold and must be rejected.
  for (int n : c.n_grid)
    for (int k : c.k_grid) {
      if (n < 2 * (k + 1)) continue;
      TrialRecord r;
      r.suite = "two_factor";
      r.n = n;
      const auto sizes = balanced_sizes(n, k + 1);
      r.params = {{"k", k}, {"witness", "g1"}, {"sizes", sizes}};
      const Digraph g1 = gen_blowup_tt(sizes, 1.0, 0.0, 0);
      try {
        two_factor(g1, k);
        r.outcome = Outcome::Fail;
        r.reproducer = "ohc generate --family g1 --sizes " + join(sizes) + " --out G.edges";
      } catch (const PreconditionError&) {
        r.outcome = Outcome::Pass;
      }
      out.push_back(r);
    }
  return out;
}

// ---- experiments ---------------------------------------------------------

namespace {

template <class T>
T field(const json& obj, const std::string& path, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key + ": wrong type");
  }
}

std::vector<int> grid(const json& obj, const std::string& path, const char* key, std::vector<int> fallback) {
  auto g = field<std::vector<int>>(obj, path, key, std::move(fallback));
  if (g.empty()) throw ConfigError(path + "." + key + ": empty grid");
  return g;
}

void positive(const std::string& path, const char* key, long long v) {
  if (v <= 0) throw ConfigError(path + "." + key + ": must be positive");
}

GhouilaHouriConfig parse_gh(const json& p, const std::string& path) {
  GhouilaHouriConfig c;
  c.n = field(p, path, "n", c.n);
  c.exhaustive = field(p, path, "exhaustive", c.exhaustive);
  c.trials = field(p, path, "trials", c.trials);
  c.seed = field(p, path, "seed", c.seed);
  positive(path, "trials", c.trials);
  if (c.n < 2) throw ConfigError(path + ".n: must be at least 2");
  if (c.exhaustive && c.n > 5) throw ConfigError(path + ".n: exhaustive mode needs n <= 5");
  return c;
}

MainTheoremConfig parse_main(const json& p, const std::string& path) {
  MainTheoremConfig c;
  c.n_grid = grid(p, path, "n_grid", c.n_grid);
  c.classes = grid(p, path, "classes", c.classes);
  c.instances = field(p, path, "instances", c.instances);
  c.patterns = field(p, path, "patterns", c.patterns);
  c.intra = field(p, path, "intra", c.intra);
  c.noise = field(p, path, "noise", c.noise);
  c.zeta = field(p, path, "zeta", c.zeta);
  c.seed = field(p, path, "seed", c.seed);
  c.embed.seconds = field(p, path, "seconds", c.embed.seconds);
  positive(path, "instances", c.instances);
  positive(path, "patterns", c.patterns);
  return c;
}

DichotomyConfig parse_dichotomy(const json& p, const std::string& path) {
  DichotomyConfig c;
  c.n = field(p, path, "n", c.n);
  c.trials = field(p, path, "trials", c.trials);
  c.eta = field(p, path, "eta", c.eta);
  c.alpha = field(p, path, "alpha", c.alpha);
  c.tau = field(p, path, "tau", c.tau);
  c.break_degree = field(p, path, "break_degree", c.break_degree);
  c.seed = field(p, path, "seed", c.seed);
  positive(path, "trials", c.trials);
  if (c.n > 14) throw ConfigError(path + ".n: exact mode needs n <= 14");
  return c;
}

PancyclicityConfig parse_pancyclicity(const json& p, const std::string& path) {
  PancyclicityConfig c;
  c.n_grid = grid(p, path, "n_grid", c.n_grid);
  c.k_grid = grid(p, path, "k_grid", c.k_grid);
  c.gamma = field(p, path, "gamma", c.gamma);
  c.instances = field(p, path, "instances", c.instances);
  c.moreover = field(p, path, "moreover", c.moreover);
  c.g1_absence = field(p, path, "g1_absence", c.g1_absence);
  c.patterns_per_length = field(p, path, "patterns_per_length", c.patterns_per_length);
  c.seed = field(p, path, "seed", c.seed);
  positive(path, "instances", c.instances);
  return c;
}

TwoFactorConfig parse_two_factor(const json& p, const std::string& path) {
  TwoFactorConfig c;
  c.n_grid = grid(p, path, "n_grid", c.n_grid);
  c.k_grid = grid(p, path, "k_grid", c.k_grid);
  c.trials = field(p, path, "trials", c.trials);
  c.seed = field(p, path, "seed", c.seed);
  positive(path, "trials", c.trials);
  return c;
}

std::vector<TrialRecord> dispatch(const SuiteEntry& s, const std::string& path, const SuiteContext& ctx) {
  if (s.name == "ghouila_houri") return suite_ghouila_houri(parse_gh(s.params, path), ctx);
  if (s.name == "main_theorem") return suite_main_theorem(parse_main(s.params, path), ctx);
  if (s.name == "dichotomy") return suite_dichotomy(parse_dichotomy(s.params, path), ctx);
  if (s.name == "pancyclicity") return suite_pancyclicity(parse_pancyclicity(s.params, path), ctx);
  if (s.name == "two_factor") return suite_two_factor(parse_two_factor(s.params, path), ctx);
  throw ConfigError(path + ".name: unknown suite '" + s.name + "'");
}

void validate_entry(const SuiteEntry& s, const std::string& path) {
  if (s.name == "ghouila_houri") parse_gh(s.params, path);
  else if (s.name == "main_theorem") parse_main(s.params, path);
  else if (s.name == "dichotomy") parse_dichotomy(s.params, path);
  else if (s.name == "pancyclicity") parse_pancyclicity(s.params, path);
  else if (s.name == "two_factor") parse_two_factor(s.params, path);
  else throw ConfigError(path + ".name: unknown suite '" + s.name + "'");
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("$: config must be an object");
  ExperimentConfig c;
  c.workers = field(doc, "$", "workers", 1);
  if (c.workers < 1) throw ConfigError("$.workers: must be positive");
  if (!doc.contains("suites") || !doc["suites"].is_array()) throw ConfigError("$.suites: missing array");
  if (doc["suites"].empty()) throw ConfigError("$.suites: empty grid");
  for (std::size_t i = 0; i < doc["suites"].size(); ++i) {
    const std::string path = "$.suites[" + std::to_string(i) + "]";
    const json& s = doc["suites"][i];
    if (!s.is_object() || !s.contains("name") || !s["name"].is_string()) throw ConfigError(path + ".name: missing");
    SuiteEntry e{s["name"].get<std::string>(), s.value("params", json::object())};
    if (!e.params.is_object()) throw ConfigError(path + ".params: must be an object");
    validate_entry(e, path + ".params");
    c.suites.push_back(std::move(e));
  }
  return c;
}

bool RunSummary::any_failure() const {
  return std::any_of(suites.begin(), suites.end(), [](const auto& s) { return s.asserting && s.fail > 0; });
}

json RunSummary::to_json() const {
  json a = json::array();
  for (const auto& s : suites)
    a.push_back({{"suite", s.name},
                 {"pass", s.pass},
                 {"fail", s.fail},
                 {"inconclusive", s.inconclusive},
                 {"timeout", s.timeout},
                 {"asserting", s.asserting}});
  return {{"suites", a}, {"failed", any_failure()}};
}

std::string csv_header() { return "suite,n,params,seed,outcome,millis,artifact"; }

std::string csv_row(const TrialRecord& r) {
  std::ostringstream out;
  out << r.suite << ',' << r.n << ',' << csv_quote(r.params.dump()) << ',' << r.seed << ',' << to_string(r.outcome)
      << ',' << static_cast<long long>(std::llround(r.millis)) << ',' << csv_quote(r.artifact);
  return out.str();
}

RunSummary run(const ExperimentConfig& config, const std::string& out_dir) {
  fs::create_directories(out_dir);
  RunSummary summary;
  for (std::size_t i = 0; i < config.suites.size(); ++i) {
    const auto& entry = config.suites[i];
    SuiteContext ctx{config.workers, (fs::path(out_dir) / "artifacts").string()};
    const auto records = dispatch(entry, "$.suites[" + std::to_string(i) + "].params", ctx);
    SuiteSummary s;
    s.name = entry.name;
    s.asserting = !(entry.params.value("measure_only", false));
    std::ofstream csv(fs::path(out_dir) / (entry.name + (config.suites.size() > 1 ? "_" + std::to_string(i) : "") + ".csv"));
    csv << csv_header() << '\n';
    std::ofstream repro;
    for (const auto& r : records) {
      csv << csv_row(r) << '\n';
      switch (r.outcome) {
        case Outcome::Pass: ++s.pass; break;
        case Outcome::Fail: ++s.fail; break;
        case Outcome::Inconclusive: ++s.inconclusive; break;
        case Outcome::Timeout: ++s.timeout; break;
      }
      if (!r.reproducer.empty()) {
        if (!repro.is_open()) repro.open(fs::path(out_dir) / (entry.name + "_reproducers.txt"));
        repro << r.reproducer << '\n';
      }
    }
    summary.suites.push_back(s);
  }
  std::ofstream(fs::path(out_dir) / "summary.json") << summary.to_json().dump(2) << '\n';
  return summary;
}

int workers_from_env(int fallback) {
  if (const char* v = std::getenv("OHC_WORKERS")) {
    char* end = nullptr;
    const long w = std::strtol(v, &end, 10);
    if (end != v && *end == '\0' && w >= 1 && w <= 256) return static_cast<int>(w);
    throw ConfigError("OHC_WORKERS must be an integer in 1..256");
  }
  return fallback;
}

}  // namespace ohc
