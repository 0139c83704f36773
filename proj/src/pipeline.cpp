#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "orienthc/embedding.hpp"
#include "orienthc/errors.hpp"

namespace ohc {

void EmbedParams::validate() const {
  if (!(beta > 0 && beta < 1)) throw ConfigError("beta must lie in (0,1)");
  if (!(eta > 0 && eta < 1)) throw ConfigError("eta must lie in (0,1)");
  if (!(rho > 0) || rho > beta * beta / 4 + 1e-12) throw ConfigError("rho must satisfy 0 < rho <= beta^2/4");
  if (block_size == 1 || block_size < 0) throw ConfigError("block size must be 0 (auto) or at least 2");
  if (retries < 0) throw ConfigError("retries must be non-negative");
}

int EmbedParams::resolved_block_size(int n) const {
  return block_size > 0 ? block_size : std::max(2, floor_fraction(rho, n));
}

int EmbedParams::resolved_gadget_cap() const {
  return gadget_cap >= 0 ? std::max(1, gadget_cap) : std::max(1, static_cast<int>(std::floor(eta / (12 * beta) + 1e-9)));
}

namespace {

using Clock = std::chrono::steady_clock;

// The pattern re-read from another starting point and direction; orig[i] is
// the original position of frame position i.
struct Frame {
  CyclePattern c;
  std::vector<int> orig;

  static Frame identity(const CyclePattern& c) {
    Frame f{c, std::vector<int>(c.size())};
    std::iota(f.orig.begin(), f.orig.end(), 0);
    return f;
  }
  Frame rotated(int start) const {
    const int n = c.size();
    Frame f{c.rotated(start), std::vector<int>(n)};
    for (int i = 0; i < n; ++i) f.orig[i] = orig[((start + i) % n + n) % n];
    return f;
  }
  Frame reflected() const {
    const int n = c.size();
    Frame f{c.reflected(), std::vector<int>(n)};
    for (int i = 0; i < n; ++i) f.orig[i] = orig[(n - i) % n];
    return f;
  }
};

// Frame in which the longest run is 0 → 1 → … → ℓ-1.
Frame forward_run_frame(const CyclePattern& c) {
  const int n = c.size();
  const DirectedRun run = longest_directed_segment(c);
  Frame f = Frame::identity(c);
  if (run.forward) {
    f = f.rotated(run.start);
  } else {
    f = f.reflected();
    f = f.rotated(((n - (run.start + run.vertex_count - 1)) % n + n) % n);
  }
  for (int i = 0; i + 1 < run.vertex_count; ++i)
    if (!f.c.forward(i)) throw std::logic_error("run frame misaligned");
  return f;
}

struct Assignment {
  Frame frame;
  std::vector<int> cls;  // per frame position
};

struct StepFailure {
  std::string step;
  std::string detail;
};

std::vector<int> prefix(const std::vector<int>& sizes) {
  std::vector<int> p(sizes.size() + 1, 0);
  for (std::size_t j = 0; j < sizes.size(); ++j) p[j + 1] = p[j] + sizes[j];
  return p;
}

std::optional<Assignment> assign_case1a(const CyclePattern& c, const std::vector<int>& sizes, int ell,
                                        EmbedPlan& plan, StepFailure& why) {
  Frame f = forward_run_frame(c);
  const int t = static_cast<int>(sizes.size());
  const auto cum = prefix(sizes);
  if (cum[t - 1] > ell - 1) {
    why = {"1a-split", "class boundaries do not fit inside the directed run"};
    return std::nullopt;
  }
  Assignment a{f, std::vector<int>(c.size())};
  for (int j = 0; j < t; ++j)
    for (int i = cum[j]; i < cum[j + 1]; ++i) a.cls[i] = j;
  plan.notes.push_back("run split at cumulative class sizes");
  return a;
}

std::optional<Assignment> assign_case1b(const CyclePattern& c, const std::vector<int>& sizes, int ell,
                                        const EmbedParams& p, EmbedPlan& plan, StepFailure& why) {
  const int n = c.size();
  const int t = static_cast<int>(sizes.size());
  Frame f = forward_run_frame(c).reflected();
  const int d = p.resolved_block_size(n);
  const auto blocks = directed_run_decomposition_case1b(f.c, ell, d);
  const int q = static_cast<int>(blocks.size());

  std::vector<bool> q_forward;
  for (int i = 0; i + 1 < q; ++i) q_forward.push_back(blocks[i].next_forward);
  std::vector<int> u(t);
  int total = 0;
  for (int j = 0; j < t; ++j) {
    u[j] = std::max(0, static_cast<int>(std::floor((sizes[j] - p.rho * n) / d + 1e-9)));
    total += u[j];
  }
  if (total < q) {
    why = {"1b-blueprint", "blueprint tournament has " + std::to_string(total) + " vertices for " +
                               std::to_string(q) + " blocks"};
    return std::nullopt;
  }
  const auto ranks = tt_embed_path(PathPattern(q_forward), total);
  const auto ucum = prefix(u);
  Assignment a{f, std::vector<int>(n, -1)};
  std::vector<int> used(t, 0);
  plan.blueprint.clear();
  for (int i = 0; i < q; ++i) {
    const int j = static_cast<int>(std::upper_bound(ucum.begin(), ucum.end(), ranks[i]) - ucum.begin()) - 1;
    plan.blueprint.push_back(j);
    for (int k = 0; k < blocks[i].size; ++k) a.cls[blocks[i].start + k] = j;
    used[j] += blocks[i].size;
  }
  std::vector<int> residual(t);
  for (int j = 0; j < t; ++j) residual[j] = sizes[j] - used[j];
  if (residual.front() < 1 || residual.back() < 1 ||
      std::any_of(residual.begin(), residual.end(), [](int r) { return r < 0; })) {
    why = {"1b-residual", "long run cannot cover the class residuals"};
    return std::nullopt;
  }
  // The long run 0 → n-1 → … → n-ℓ+1 visits the classes in order.
  int j = 0;
  for (int k = 0; k < ell; ++k) {
    while (residual[j] == 0) ++j;
    a.cls[(n - k) % n] = j;
    --residual[j];
  }
  plan.notes.push_back("blocks: " + std::to_string(q) + " of size <= " + std::to_string(d));
  return a;
}

std::optional<Assignment> assign_case2(const CyclePattern& c, const std::vector<int>& sizes, const EmbedParams& p,
                                       EmbedPlan& plan, StepFailure& why) {
  const int n = c.size();
  const int t = static_cast<int>(sizes.size());
  int src = 0;
  while (src < n && !c.is_source(src)) ++src;
  Frame f = Frame::identity(c).rotated(src);
  SegmentPlan seg;
  try {
    seg = partition_case2(f.c, sizes, p.beta);
  } catch (const PreconditionError& e) {
    why = {"2-segments", e.what()};
    return std::nullopt;
  }
  plan.overshoot = seg.overshoot;
  Assignment a{f, std::vector<int>(n)};
  for (int s = 0; s < t; ++s)
    for (int i = 0; i < seg.segments[s].length; ++i) a.cls[seg.segments[s].start + i] = s;

  const double bn = p.beta * n;
  const double small = p.eta / (6 * p.beta);
  const int cap = p.resolved_gadget_cap();
  for (int s = 0; s + 1 < t; ++s) {
    const int d = seg.overshoot[s];
    if (d <= 0) continue;
    const int st = seg.segments[s].start;
    const int en = st + seg.segments[s].length;
    const int gadgets = d <= small ? d : std::min(d, cap);
    const int hand = d - gadgets;

    // P*: maximal directed segment x_{n_s} → … → x_{a+1} ending at a sink.
    int a_pos = en - 1;
    while (a_pos - 1 >= st && !f.c.forward(a_pos - 1)) --a_pos;
    if (en - 1 - a_pos < d) {
      why = {"2-handoff", "directed segment before boundary " + std::to_string(s + 1) + " is too short"};
      return std::nullopt;
    }
    if (hand > 0) {
      if (a_pos - 1 < st) {
        why = {"2-handoff", "hand-off segment touches the previous boundary"};
        return std::nullopt;
      }
      for (int i = 0; i < hand; ++i) a.cls[a_pos + i] = s + 1;
      plan.handoffs.push_back({s, f.orig[a_pos], hand});
    }
    const int limit = hand > 0 ? a_pos - 2 : a_pos - 1;  // largest admissible sink (k+1 stays in class s)

    // Candidate sinks, tried with the literal margins first.
    struct Margins {
      double edge, spacing;
    };
    const std::vector<Margins> tiers = {{2 * bn, bn}, {bn, bn / 2}, {bn / 2, 3}, {1, 3}};
    std::vector<int> chosen;
    bool literal = true;
    for (const auto& m : tiers) {
      chosen.clear();
      for (int k = st + 2; k <= std::min(limit, en - 3); ++k) {
        if (!f.c.is_sink(k)) continue;
        if (!(st + m.edge < k + 1 && k + 1 < en - m.edge)) continue;
        if (!chosen.empty() && k - chosen.back() < std::max(3.0, m.spacing)) continue;
        chosen.push_back(k);
        if (static_cast<int>(chosen.size()) == gadgets) break;
      }
      if (static_cast<int>(chosen.size()) == gadgets) break;
      literal = false;
    }
    if (static_cast<int>(chosen.size()) < gadgets) {
      why = {"2-gadgets", "only " + std::to_string(chosen.size()) + " of " + std::to_string(gadgets) +
                              " sinks available on segment " + std::to_string(s + 1)};
      return std::nullopt;
    }
    if (!literal) plan.spacing_relaxed = true;
    for (int k : chosen) {
      a.cls[k] = s + 1;
      plan.gadgets.push_back({s, f.orig[k], -1});
    }
  }
  return a;
}

// Every cross-class pattern edge must run from a lower to a higher class and
// class counts must match the partition.
bool assignment_consistent(const CyclePattern& c, const std::vector<int>& cls, const std::vector<int>& sizes,
                           std::string& detail) {
  const int n = c.size();
  std::vector<int> count(sizes.size(), 0);
  for (int i = 0; i < n; ++i) {
    if (cls[i] < 0 || cls[i] >= static_cast<int>(sizes.size())) {
      detail = "position " + std::to_string(i) + " unassigned";
      return false;
    }
    ++count[cls[i]];
  }
  if (count != sizes) {
    detail = "class counts differ from class sizes";
    return false;
  }
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const int tail = c.forward(i) ? i : j;
    const int head = c.forward(i) ? j : i;
    if (cls[tail] > cls[head]) {
      detail = "edge " + std::to_string(i) + " runs against the class order";
      return false;
    }
  }
  return true;
}

struct Attempt {
  std::vector<Vertex> map;
  std::vector<Connector> connectors;
  std::string failed_step;
};

double remaining(Clock::time_point deadline) {
  return std::chrono::duration<double>(deadline - Clock::now()).count();
}

Attempt attempt(const Digraph& g, const CyclePattern& c, const std::vector<int>& cls,
                const std::vector<VertexSet>& classes, const EmbedParams& p, int round, Clock::time_point deadline) {
  const int n = c.size();
  Attempt out;
  out.map.assign(n, -1);
  auto tail_of = [&](int e) { return c.forward(e) ? e : (e + 1) % n; };
  auto head_of = [&](int e) { return c.forward(e) ? (e + 1) % n : e; };

  // Pinned positions are the ends of cross-class edges; they are grouped into
  // components along pattern edges between pinned positions.
  std::vector<bool> pinned(n, false);
  for (int e = 0; e < n; ++e)
    if (cls[e] != cls[(e + 1) % n]) pinned[e] = pinned[(e + 1) % n] = true;
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < n; ++i) {
    if (!pinned[i] || comp[i] >= 0) continue;
    std::vector<int> group;
    int start = i;
    while (pinned[(start - 1 + n) % n] && (start - 1 + n) % n != i) start = (start - 1 + n) % n;
    for (int k = start; pinned[k] && comp[k] < 0; k = (k + 1) % n) {
      comp[k] = static_cast<int>(groups.size());
      group.push_back(k);
    }
    groups.push_back(std::move(group));
  }

  VertexSet used(g.order());
  for (const auto& group : groups) {
    if (group.size() == 2 && round == 0) {
      const int e = group[0];
      const int tl = tail_of(e), hd = head_of(e);
      try {
        const auto con = select_connectors(g, classes[cls[tl]], classes[cls[hd]], 1, ConnectorDirection::XToY, &used);
        out.map[tl] = con[0].from;
        out.map[hd] = con[0].to;
        used.insert(con[0].from);
        used.insert(con[0].to);
        continue;
      } catch (const std::runtime_error&) {
        out.failed_step = "connectors";
        return out;
      }
    }
    SearchProblem sub;
    sub.positions = static_cast<int>(group.size());
    for (int k : group) sub.domains.push_back(classes[cls[k]] - used);
    for (std::size_t a = 0; a + 1 < group.size(); ++a) {
      const int e = group[a];
      sub.arcs.push_back(c.forward(e) ? std::pair<int, int>{static_cast<int>(a), static_cast<int>(a + 1)}
                                      : std::pair<int, int>{static_cast<int>(a + 1), static_cast<int>(a)});
    }
    if (group.size() == static_cast<std::size_t>(n)) {
      // Every position is pinned: the component closes up into the cycle.
      const int e = group.back();
      sub.arcs.push_back(c.forward(e) ? std::pair<int, int>{n - 1, 0} : std::pair<int, int>{0, n - 1});
    }
    SearchOptions so;
    so.seconds = std::min(1.0, std::max(0.05, remaining(deadline)));
    so.value_seed = round == 0 ? 0 : p.seed * 1000003ULL + static_cast<std::uint64_t>(round);
    const auto r = solve(g, sub, so);
    if (r.status != SearchStatus::Found) {
      out.failed_step = "connectors";
      return out;
    }
    for (std::size_t a = 0; a < group.size(); ++a) {
      out.map[group[a]] = r.assignment[a];
      used.insert(r.assignment[a]);
    }
  }
  for (int e = 0; e < n; ++e)
    if (cls[e] != cls[(e + 1) % n]) out.connectors.push_back({out.map[tail_of(e)], out.map[head_of(e)]});

  // Fill every class with the pinned vertices fixed.
  for (std::size_t j = 0; j < classes.size(); ++j) {
    std::vector<int> local(n, -1);
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (cls[i] == static_cast<int>(j)) local[i] = static_cast<int>(members.size()), members.push_back(i);
    SearchProblem fill;
    fill.positions = static_cast<int>(members.size());
    const VertexSet free_part = classes[j] - used;
    for (int i : members) {
      if (out.map[i] >= 0) {
        VertexSet one(g.order());
        one.insert(out.map[i]);
        fill.domains.push_back(one);
      } else {
        fill.domains.push_back(free_part);
      }
    }
    for (int e = 0; e < n; ++e) {
      const int tl = tail_of(e), hd = head_of(e);
      if (local[tl] >= 0 && local[hd] >= 0) fill.arcs.push_back({local[tl], local[hd]});
    }
    SearchOptions so;
    so.seconds = std::min(p.fill_seconds, std::max(0.05, remaining(deadline)));
    so.value_seed = round == 0 ? 0 : p.seed * 7919ULL + static_cast<std::uint64_t>(round);
    const auto r = solve(g, fill, so);
    if (r.status != SearchStatus::Found) {
      out.failed_step = std::string("fill class ") + std::to_string(j + 1) + " (" + to_string(r.status) + ")";
      return out;
    }
    for (std::size_t a = 0; a < members.size(); ++a) out.map[members[a]] = r.assignment[a];
  }
  return out;
}

void check_partition(const Digraph& g, const std::vector<VertexSet>& classes) {
  if (classes.empty()) throw PreconditionError("partition has no classes");
  VertexSet seen(g.order());
  for (const auto& v : classes) {
    if (v.universe() != g.order()) throw PreconditionError("partition class has the wrong universe");
    if (v.empty()) throw PreconditionError("partition has an empty class");
    if (seen.intersects(v)) throw PreconditionError("partition classes overlap");
    seen |= v;
  }
  if (seen.size() != g.order()) throw PreconditionError("partition does not cover V(G)");
}

}  // namespace

PipelineResult embed_hamilton_orientation(const Digraph& g, const std::vector<VertexSet>& classes,
                                          const CyclePattern& c, const EmbedParams& p) {
  p.validate();
  const int n = g.order();
  if (c.size() != n) throw PreconditionError("pattern length differs from the host order");
  check_partition(g, classes);
  const int t = static_cast<int>(classes.size());
  if (t >= 2 && c.is_directed()) throw PreconditionError("directed Hamilton cycle requested with t >= 2 classes");

  const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(p.seconds));
  PipelineResult res;
  EmbedPlan& plan = res.plan;
  plan.t = t;
  for (const auto& v : classes) plan.class_sizes.push_back(v.size());

  for (int i = 0; i + 1 < t; ++i) {
    const auto cc = cross_counts(g, classes[i], classes[i + 1]);
    if (cc.forward < cc.backward)
      plan.notes.push_back("classes " + std::to_string(i + 1) + "," + std::to_string(i + 2) +
                           " are denser backwards; the partition may need reversing");
  }

  std::optional<Assignment> assignment;
  StepFailure why;
  const CaseSplit split = classify_case(c, p.beta);
  plan.run_length = split.run.vertex_count;
  if (t == 1) {
    plan.kind = "t=1";
    assignment = Assignment{Frame::identity(c), std::vector<int>(n, 0)};
  } else if (split.case1) {
    const int ell = split.run.vertex_count;
    if (n - ell <= p.eta * n / 2) {
      plan.kind = "1a";
      assignment = assign_case1a(c, plan.class_sizes, ell, plan, why);
    }
    if (!assignment) {
      if (plan.kind == "1a") plan.notes.push_back("1a unavailable: " + why.detail);
      plan.kind = "1b";
      assignment = assign_case1b(c, plan.class_sizes, ell, p, plan, why);
    }
  } else {
    plan.kind = "2";
    assignment = assign_case2(c, plan.class_sizes, p, plan, why);
  }

  if (assignment) {
    std::vector<int> cls(n);
    for (int i = 0; i < n; ++i) cls[assignment->frame.orig[i]] = assignment->cls[i];
    std::string detail;
    if (!assignment_consistent(c, cls, plan.class_sizes, detail)) {
      why = {"assignment", detail};
      assignment.reset();
    } else {
      plan.position_class = cls;
      for (int round = 0; round <= p.retries && remaining(deadline) > 0; ++round) {
        ++plan.attempts;
        Attempt at = attempt(g, c, cls, classes, p, round, deadline);
        if (at.failed_step.empty()) {
          res.embedding.map = at.map;
          plan.connectors = at.connectors;
          break;
        }
        why = {at.failed_step, "attempt " + std::to_string(round + 1)};
      }
    }
  }

  if (!res.embedding.map.empty()) {
    for (int i = 0; i < n; ++i)
      if (plan.position_class[i] != plan.position_class[(i + 1) % n] ||
          plan.position_class[i] != plan.position_class[(i + n - 1) % n])
        plan.pins.push_back({i, res.embedding.map[i]});
    for (auto& gd : plan.gadgets) gd.image = res.embedding.map[gd.sink];
  } else if (n <= p.oracle_cap && remaining(deadline) > 0) {
    plan.fallback = true;
    plan.notes.push_back("pipeline failed at " + why.step + "; exact search fallback");
    OracleOptions o;
    o.seconds = std::max(0.05, remaining(deadline));
    const auto r = exact_embed(g, c, {}, o);
    if (r.found()) {
      res.embedding = r.embedding;
    } else {
      why = {"oracle", std::string("fallback returned ") + to_string(r.status)};
    }
  }

  plan.budgets.assign(t, 0);
  if (!plan.position_class.empty()) {
    for (int j = 0; j < t; ++j) plan.budgets[j] = plan.class_sizes[j];
    for (const auto& [pos, v] : plan.pins) --plan.budgets[plan.position_class[pos]];
  }

  if (res.embedding.map.empty()) {
    plan.failed_step = why.step.empty() ? "unknown" : why.step;
    if (!why.detail.empty()) plan.notes.push_back(why.step + ": " + why.detail);
    res.check = {false, "no embedding"};
    return res;
  }
  res.check = check_cycle_embedding(g, c, res.embedding.map, true);
  res.ok = res.check.ok;
  if (!res.ok) plan.failed_step = "checker";
  return res;
}

PipelineResult embed_hamilton_orientation(const Digraph& g, const StructurePartition& sp, const CyclePattern& c,
                                          const EmbedParams& p) {
  const StructurePartition& use = sp.reversed ? sp : reverse_for_embedding(sp);
  auto r = embed_hamilton_orientation(g, use.classes, c, p);
  if (!sp.reversed) r.plan.notes.push_back("partition reversed before embedding");
  return r;
}

}  // namespace ohc
