#include "orienthc/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "orienthc/errors.hpp"

namespace ohc {

namespace {

constexpr double kEps = 1e-9;

Check make_check(std::string name, bool pass, double measured, double bound, std::string detail = {}) {
  return Check{std::move(name), pass, measured, bound, std::move(detail)};
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

VertexSet lift(const VertexSet& local, const std::vector<Vertex>& labels, int n) {
  VertexSet out(n);
  local.for_each([&](Vertex v) { out.insert(labels[v]); });
  return out;
}

}  // namespace

DecompositionParams DecompositionParams::resolved() const {
  DecompositionParams p = *this;
  if (p.alpha <= 0) p.alpha = p.zeta / (25.0 * (p.k + 1));
  if (p.tau <= 0) p.tau = p.alpha / 10.0;
  if (p.nu <= 0) p.nu = p.alpha * p.tau * p.zeta / 16.0;
  return p;
}

void DecompositionParams::validate() const {
  if (k < 1) throw ConfigError("decomposition: k must be at least 1");
  if (!(zeta > 0 && zeta < 1.0 - 1.0 / (k + 1) + kEps)) throw ConfigError("decomposition: need 0 < ζ < 1 - 1/(k+1)");
  if (!(alpha > 0 && alpha <= zeta / (24.0 * (k + 1)) + kEps))
    throw ConfigError("decomposition: need 0 < α ≤ ζ/(24(k+1)), got α=" + fmt(alpha));
  if (!(tau > 0 && tau <= alpha / 8.0 + kEps)) throw ConfigError("decomposition: need 0 < τ ≤ α/8, got τ=" + fmt(tau));
  if (!(nu > 0 && nu <= alpha * tau * zeta / 16.0 + kEps))
    throw ConfigError("decomposition: need 0 < ν ≤ ατζ/16, got ν=" + fmt(nu));
  if (exact_threshold < 0 || exact_threshold > kExactSweepCap)
    throw ConfigError("decomposition: exact_threshold must lie in [0," + std::to_string(kExactSweepCap) + "]");
}

double DecompositionParams::cut_alpha(int round) const {
  if (schedule == AlphaSchedule::Flat) return alpha;
  return std::pow(alpha, std::pow(2.0, k - round));
}

double DecompositionParams::clean_alpha(int round) const {
  if (schedule == AlphaSchedule::Flat) return alpha;
  return std::pow(alpha, std::pow(2.0, k - round - 1));
}

bool CleanedCut::hypotheses_hold() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(), [](const Check& c) { return c.pass; });
}

bool CleanedCut::conclusions_hold() const {
  return std::all_of(conclusions.begin(), conclusions.end(), [](const Check& c) { return c.pass; });
}

CleanedCut clean_cut(const Digraph& g, const VertexSet& x, const CutCertificate& cut, int k, double zeta,
                     double alpha) {
  const int n = g.order();
  const double inv = 1.0 / (k + 1);
  const VertexSet& x1 = cut.first;
  const VertexSet& x2 = cut.second;
  if ((x1 | x2) != x || x1.intersects(x2))
    throw PreconditionError("clean_cut: cut sides must partition X");
  CleanedCut out;
  const int sx = x.size();

  out.hypotheses.push_back(make_check("min degree of G", min_degree(g) + kEps >= (1 + inv + zeta) * n, min_degree(g),
                                      (1 + inv + zeta) * n));
  out.hypotheses.push_back(make_check("alpha range", alpha > 0 && alpha < zeta / (24.0 * (k + 1)), alpha,
                                      zeta / (24.0 * (k + 1))));
  out.hypotheses.push_back(make_check("(a) |X|", sx > (inv + zeta / 2) * n, sx, (inv + zeta / 2) * n));
  const int dx = min_degree_within(g, x);
  out.hypotheses.push_back(
      make_check("(b) min degree of G[X]", dx + kEps >= (1 + inv + zeta - alpha) * sx, dx, (1 + inv + zeta - alpha) * sx));
  int exceptions = 0;
  x.for_each([&](Vertex v) {
    if (g.degree(v, x) + kEps < sx + (inv + zeta - alpha) * n) ++exceptions;
  });
  out.hypotheses.push_back(make_check("(c) low-degree vertices in X", exceptions <= alpha * alpha * n + kEps,
                                      exceptions, alpha * alpha * n));
  const double e12 = static_cast<double>(cross_counts(g, x1, x2).forward);
  const double prod = static_cast<double>(x1.size()) * x2.size();
  out.hypotheses.push_back(make_check("input cut is alpha^2-sparse", prod > 0 && e12 <= alpha * alpha * prod + kEps,
                                      e12, alpha * alpha * prod));

  const double slack = inv + zeta - 9.0 * (k + 1) * alpha;
  out.moved1 = VertexSet(n);
  out.moved2 = VertexSet(n);
  x1.for_each([&](Vertex v) {
    if (g.degree(v, x1) <= x1.size() + slack * n + kEps) out.moved1.insert(v);
  });
  x2.for_each([&](Vertex v) {
    if (g.degree(v, x2) <= x2.size() + slack * n + kEps) out.moved2.insert(v);
  });
  const VertexSet moved = out.moved1 | out.moved2;
  const VertexSet rest2 = x2 - moved;
  const double reassign_bound = (1 + inv + zeta - alpha) * x2.size() - alpha * n / (6.0 * (k + 1));
  out.reassigned2 = VertexSet(n);
  moved.for_each([&](Vertex v) {
    if (g.degree(v, rest2) + kEps >= reassign_bound) out.reassigned2.insert(v);
  });
  out.reassigned1 = moved - out.reassigned2;
  out.first = (x1 - out.moved1) | out.reassigned1;
  out.second = (x2 - out.moved2) | out.reassigned2;

  const double lim = inv + zeta - 10.0 * (k + 1) * alpha;
  const VertexSet* sides[2] = {&out.first, &out.second};
  for (int i = 0; i < 2; ++i) {
    const VertexSet& vi = *sides[i];
    const std::string tag = " V" + std::to_string(i + 1);
    const int sz = vi.size();
    out.conclusions.push_back(make_check("(i)" + tag, sz > (inv + zeta / 2) * n, sz, (inv + zeta / 2) * n));
    const int dv = sz ? min_degree_within(g, vi) : 0;
    out.conclusions.push_back(make_check("(ii)" + tag, sz > 0 && dv + kEps >= (1 + lim) * sz, dv, (1 + lim) * sz));
    int bad = 0;
    vi.for_each([&](Vertex v) {
      if (g.degree(v, vi) + kEps < sz + lim * n) ++bad;
    });
    out.conclusions.push_back(make_check("(iii)" + tag, bad <= alpha * n + kEps, bad, alpha * n));
  }
  const double f = static_cast<double>(cross_counts(g, out.first, out.second).forward);
  const double p2 = static_cast<double>(out.first.size()) * out.second.size();
  out.alpha_achieved = p2 > 0 ? f / p2 : 1.0;
  out.conclusions.push_back(make_check("alpha-sparse", p2 > 0 && f <= alpha * p2 + kEps, f, alpha * p2));
  return out;
}

std::vector<int> StructurePartition::class_of() const {
  std::vector<int> c(n, -1);
  for (int i = 0; i < size(); ++i) classes[i].for_each([&](Vertex v) { c[v] = i; });
  return c;
}

std::vector<std::vector<CrossCounts>> pair_counts(const Digraph& g, const std::vector<VertexSet>& classes) {
  const int t = static_cast<int>(classes.size());
  std::vector<std::vector<CrossCounts>> m(t, std::vector<CrossCounts>(t));
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) m[i][j] = cross_counts(g, classes[i], classes[j]);
  return m;
}

namespace {

ExpansionParams class_expansion_params(const DecompositionParams& p, int size, std::uint64_t seed) {
  ExpansionParams e;
  e.nu = p.nu;
  e.tau = p.tau;
  e.mode = size <= p.exact_threshold ? CheckMode::Exact : CheckMode::Sampled;
  e.seed = seed;
  return e;
}

std::uint64_t class_seed(std::uint64_t base, int round, const VertexSet& s) {
  std::uint64_t h = base * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(round) * 0xBF58476D1CE4E5B9ULL;
  h ^= static_cast<std::uint64_t>(s.first() + 1) * 0x94D049BB133111EBULL;
  h ^= static_cast<std::uint64_t>(s.size());
  return h;
}

struct Step {
  bool candidate = false;  // a cut was found (possibly above the local α)
  bool local_sparse = false;
  AuditEntry entry;
  ClassVerdict verdict;  // set when no locally sparse cut exists
  long long used_forward = 0;
  double used_product = 0.0;
};

Step process_class(const Digraph& g, const VertexSet& x, int round, const DecompositionParams& p) {
  const int n = g.order();
  Step step;
  const std::uint64_t seed = class_seed(p.seed, round, x);
  if (x.size() < 2) {
    step.verdict.verdict.outcome = ExpansionVerdict::Outcome::Expander;
    step.verdict.note = "single vertex";
    return step;
  }
  std::vector<Vertex> labels;
  const Digraph h = g.induced(x, &labels);
  CutBudget budget;
  budget.exact_cap = p.exact_threshold;
  budget.restarts = p.restarts;
  budget.seed = seed;
  const double search_alpha = std::min(p.cut_alpha(round), 1.0 - kEps);
  const CutSearch search = find_sparse_cut(h, search_alpha, budget);
  const bool exact = h.order() <= p.exact_threshold;
  step.local_sparse = search.found;

  if (!search.found) {
    const auto ep = class_expansion_params(p, h.order(), seed);
    step.verdict.verdict = certify_expander(h, ep);
    step.verdict.sampled = !exact;
    if (step.verdict.verdict.outcome == ExpansionVerdict::Outcome::Violator)
      step.verdict.note = exact ? "no sparse cut but expansion fails (exact)" : "no sparse cut found; expansion violator seen";
    else if (!exact)
      step.verdict.note = "expander (sampled)";
  }
  if (!search.best) return step;

  AuditEntry& e = step.entry;
  e.round = round;
  e.parent = x;
  e.search_alpha = search_alpha;
  e.exhaustive = search.exhaustive;
  CutCertificate cut;
  cut.first = lift(search.best->first, labels, n);
  cut.second = lift(search.best->second, labels, n);
  const CrossCounts cc = cross_counts(g, cut.first, cut.second);
  if (cc.backward < cc.forward) std::swap(cut.first, cut.second);
  cut.forward_edges = std::min(cc.forward, cc.backward);
  cut.alpha_achieved = static_cast<double>(cut.forward_edges) / (static_cast<double>(cut.first.size()) * cut.second.size());
  e.raw_first = cut.first;
  e.raw_second = cut.second;
  e.raw_alpha = cut.alpha_achieved;

  const CleanedCut cleaned = clean_cut(g, x, cut, p.k, p.zeta, p.clean_alpha(round));
  e.checks = cleaned.hypotheses;
  e.checks.insert(e.checks.end(), cleaned.conclusions.begin(), cleaned.conclusions.end());
  if (cleaned.hypotheses_hold() && cleaned.conclusions_hold()) {
    e.first = cleaned.first;
    e.second = cleaned.second;
    e.used_alpha = cleaned.alpha_achieved;
    e.cleaned = true;
  } else {
    e.first = cut.first;
    e.second = cut.second;
    e.used_alpha = cut.alpha_achieved;
    std::string failed;
    for (const auto& c : cleaned.hypotheses_hold() ? cleaned.conclusions : cleaned.hypotheses)
      if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
    e.note = (cleaned.hypotheses_hold() ? "cleaning conclusions failed (" : "cleaning hypotheses failed (") + failed +
             "); raw cut kept";
  }
  step.used_forward = cross_counts(g, e.first, e.second).forward;
  step.used_product = static_cast<double>(e.first.size()) * e.second.size();
  step.candidate = true;
  return step;
}

struct Node {
  VertexSet set;
  bool open = true;
  ClassVerdict verdict;
};

}  // namespace

StructurePartition decompose(const Digraph& g, const DecompositionParams& params) {
  const DecompositionParams p = params.resolved();
  p.validate();
  const int n = g.order();
  if (n < 1) throw InputError("decompose: empty digraph");
  const double need = (1 + 1.0 / (p.k + 1) + p.zeta) * n;
  StructurePartition sp;
  sp.n = n;
  if (min_degree(g) + kEps < need) {
    if (p.enforce_degree)
      throw PreconditionError("decompose: δ(G)=" + std::to_string(min_degree(g)) + " < (1+1/(k+1)+ζ)n=" + fmt(need));
    sp.diagnostics.push_back("degree precondition relaxed: δ(G)=" + std::to_string(min_degree(g)) + " < " + fmt(need));
  }
  if (p.schedule == AlphaSchedule::Flat) sp.diagnostics.push_back("flat alpha schedule with global forward budget");

  // Running Σ e⁺(V_i,V_j) and Σ |V_i||V_j| over the current class order.
  long long forward_sum = 0;
  double product_sum = 0.0;

  std::vector<Node> nodes{Node{g.all(), true, {}}};
  int round = 0;
  while (std::any_of(nodes.begin(), nodes.end(), [](const Node& x) { return x.open; })) {
    std::vector<int> todo;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
      if (nodes[i].open) todo.push_back(i);
    std::vector<Step> steps(todo.size());
    auto work = [&](std::size_t j) { return process_class(g, nodes[todo[j]].set, round, p); };
    if (p.workers > 1 && todo.size() > 1) {
      std::vector<std::future<Step>> futs;
      for (std::size_t j = 0; j < todo.size(); ++j) futs.push_back(std::async(std::launch::async, work, j));
      for (std::size_t j = 0; j < todo.size(); ++j) steps[j] = futs[j].get();
    } else {
      for (std::size_t j = 0; j < todo.size(); ++j) steps[j] = work(j);
    }

    std::vector<Node> next;
    int budget = p.k - static_cast<int>(nodes.size());  // further classes allowed
    bool any_split = false;
    for (int i = 0, j = 0; i < static_cast<int>(nodes.size()); ++i) {
      if (!nodes[i].open) {
        next.push_back(nodes[i]);
        continue;
      }
      Step& s = steps[j++];
      bool accept = s.candidate && s.local_sparse;
      if (s.candidate && !s.local_sparse && p.schedule == AlphaSchedule::Flat) {
        accept = forward_sum + s.used_forward <= p.alpha * (product_sum + s.used_product) + kEps;
        if (accept) s.entry.note += (s.entry.note.empty() ? "" : "; ") + std::string("accepted under global forward budget");
      }
      if (accept && budget > 0) {
        --budget;
        any_split = true;
        forward_sum += s.used_forward;
        product_sum += s.used_product;
        next.push_back(Node{s.entry.first, true, {}});
        next.push_back(Node{s.entry.second, true, {}});
        sp.audit.push_back(std::move(s.entry));
      } else if (accept) {
        Node keep{nodes[i].set, false, {}};
        keep.verdict.frozen_unsplit = true;
        keep.verdict.note = "sparse cut found but class budget k reached";
        const auto ep = class_expansion_params(p, nodes[i].set.size(), class_seed(p.seed, round + 1, nodes[i].set));
        keep.verdict.verdict = certify_expander(g.induced(nodes[i].set), ep);
        keep.verdict.sampled = ep.mode == CheckMode::Sampled;
        sp.diagnostics.push_back("class of size " + std::to_string(nodes[i].set.size()) +
                                 " left unsplit: class budget k reached");
        next.push_back(std::move(keep));
      } else {
        Node done{nodes[i].set, false, std::move(s.verdict)};
        if (!done.verdict.note.empty())
          sp.diagnostics.push_back("class of size " + std::to_string(done.set.size()) + ": " + done.verdict.note);
        next.push_back(std::move(done));
      }
    }
    nodes = std::move(next);
    if (any_split) ++round;
  }

  for (auto& node : nodes) {
    sp.classes.push_back(node.set);
    sp.verdicts.push_back(std::move(node.verdict));
  }
  sp.rounds = round;
  sp.pairs = pair_counts(g, sp.classes);
  return sp;
}

bool PartitionReport::all_pass() const {
  return valid_partition && std::all_of(clauses.begin(), clauses.end(), [](const Check& c) { return c.pass; }) &&
         std::all_of(extras.begin(), extras.end(), [](const Check& c) { return c.pass; });
}

PartitionReport verify_partition(const Digraph& g, const std::vector<VertexSet>& classes,
                                 const DecompositionParams& params) {
  const DecompositionParams p = params.resolved();
  const int n = g.order();
  const int t = static_cast<int>(classes.size());
  const double inv = 1.0 / (p.k + 1);
  PartitionReport r;

  VertexSet seen(n);
  bool disjoint = true, nonempty = true;
  for (const auto& c : classes) {
    if (c.universe() != n) throw InputError("verify_partition: class universe does not match the digraph");
    if (seen.intersects(c)) disjoint = false;
    if (c.empty()) nonempty = false;
    seen |= c;
  }
  r.valid_partition = disjoint && nonempty && seen.size() == n && t > 0;
  r.extras.push_back(make_check("partition", r.valid_partition, seen.size(), n,
                                disjoint ? (nonempty ? "" : "empty class") : "classes overlap"));
  r.extras.push_back(make_check("t <= k", t <= p.k, t, p.k));

  int smallest = n;
  for (const auto& c : classes) smallest = std::min(smallest, c.size());
  r.clauses.push_back(make_check("(1) class sizes", t > 0 && smallest + kEps >= (inv + p.zeta / 2) * n, smallest,
                                 (inv + p.zeta / 2) * n));

  bool ok2 = true;
  std::string detail;
  double worst_margin = 0.0;
  for (int i = 0; i < t; ++i) {
    const VertexSet& c = classes[i];
    if (c.empty()) {
      ok2 = false;
      continue;
    }
    const auto ep = class_expansion_params(p, c.size(), class_seed(p.seed ^ 0x5bd1e995ULL, 0, c));
    const ExpansionVerdict v = certify_expander(g.induced(c), ep);
    const bool expands = v.outcome != ExpansionVerdict::Outcome::Violator;
    const int dv = min_degree_within(g, c);
    const double need = (1 + inv + p.zeta / 2) * c.size();
    const bool deg = dv + kEps >= need;
    if (!expands || !deg) {
      ok2 = false;
      detail += "class " + std::to_string(i + 1) + (expands ? "" : " expansion violator") +
                (deg ? "" : " degree " + std::to_string(dv) + " < " + fmt(need)) + "; ";
    }
    if (ep.mode == CheckMode::Sampled) detail += "class " + std::to_string(i + 1) + " sampled; ";
    worst_margin = i == 0 ? dv - need : std::min(worst_margin, dv - need);
    r.expansion.push_back(v);
  }
  r.clauses.push_back(make_check("(2) expander and degree", ok2 && t > 0, worst_margin, 0.0, detail));

  if (t < 2) {
    r.clauses.push_back(make_check("(3) backward density", true, 0, 0, "vacuous (t=1)"));
    r.clauses.push_back(make_check("(4) forward sparsity", true, 0, 0, "vacuous (t=1)"));
    return r;
  }
  const auto pairs = pair_counts(g, classes);
  long long min_back = -1;
  long long sum_forward = 0;
  double sum_prod = 0.0;
  for (int i = 0; i < t; ++i)
    for (int j = i + 1; j < t; ++j) {
      const long long b = pairs[i][j].backward;
      min_back = min_back < 0 ? b : std::min(min_back, b);
      sum_forward += pairs[i][j].forward;
      sum_prod += static_cast<double>(classes[i].size()) * classes[j].size();
    }
  const double bound3 = static_cast<double>(n) * n * inv * inv;
  r.clauses.push_back(make_check("(3) backward density", min_back > bound3, min_back, bound3));
  r.clauses.push_back(
      make_check("(4) forward sparsity", sum_forward <= p.alpha * sum_prod + kEps, sum_forward, p.alpha * sum_prod));
  return r;
}

PartitionReport verify_partition(const Digraph& g, const StructurePartition& sp, const DecompositionParams& p) {
  return verify_partition(g, sp.classes, p);
}

StructurePartition reverse_for_embedding(const StructurePartition& sp) {
  StructurePartition r = sp;
  std::reverse(r.classes.begin(), r.classes.end());
  std::reverse(r.verdicts.begin(), r.verdicts.end());
  const int t = sp.size();
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) r.pairs[i][j] = sp.pairs[t - 1 - i][t - 1 - j];
  r.reversed = !sp.reversed;
  return r;
}

}  // namespace ohc
