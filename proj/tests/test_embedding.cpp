#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "orienthc/embedding.hpp"
#include "orienthc/errors.hpp"
#include "orienthc/generators.hpp"
#include "orienthc/workbench.hpp"

using namespace ohc;

namespace {

CyclePattern random_nondirected(int n, std::mt19937_64& rng) {
  while (true) {
    CyclePattern c(oracle::random_bits(n, rng));
    if (!c.is_directed()) return c;
  }
}

struct Planted {
  Digraph g;
  StructurePartition sp;
};

Planted planted(int n, int t, std::uint64_t seed) {
  const auto g = gen_blowup_tt(balanced_sizes(n, t), 0.95, 0.001, seed);
  return {g, decompose(g, planted_params(t, 0.3, seed))};
}

// Plan invariants that hold for every successful non-fallback run.
void check_plan(const Digraph& g, const std::vector<VertexSet>& classes, const CyclePattern& c,
                const PipelineResult& r, const EmbedParams& p) {
  const EmbedPlan& plan = r.plan;
  const int n = g.order();
  const int t = static_cast<int>(classes.size());
  REQUIRE(r.ok);
  CHECK(check_cycle_embedding(g, c, r.embedding.map, true).ok);
  if (plan.fallback) return;

  REQUIRE(static_cast<int>(plan.position_class.size()) == n);
  std::vector<int> count(t, 0);
  for (int i = 0; i < n; ++i) {
    const int j = plan.position_class[i];
    ++count[j];
    CHECK(classes[j].contains(r.embedding.map[i]));
  }
  for (int j = 0; j < t; ++j) CHECK(count[j] == classes[j].size());

  int budget_total = 0;
  for (int b : plan.budgets) budget_total += b;
  CHECK(budget_total + static_cast<int>(plan.pins.size()) == n);
  std::set<Vertex> pinned;
  for (const auto& [pos, v] : plan.pins) {
    CHECK(r.embedding.map[pos] == v);
    pinned.insert(v);
  }
  CHECK(pinned.size() == plan.pins.size());

  std::set<Vertex> ends;
  for (const auto& e : plan.connectors) {
    CHECK(g.has_edge(e.from, e.to));
    ends.insert(e.from);
    ends.insert(e.to);
  }
  // Consecutive connectors may share a single pinned vertex but never an edge.
  std::set<std::pair<Vertex, Vertex>> distinct;
  for (const auto& e : plan.connectors) distinct.insert({e.from, e.to});
  CHECK(distinct.size() == plan.connectors.size());

  if (plan.kind != "2") return;
  std::map<int, int> moved;
  for (const auto& gd : plan.gadgets) {
    CHECK(c.is_sink(gd.sink));
    CHECK(plan.position_class[gd.sink] == gd.boundary + 1);
    CHECK(classes[gd.boundary + 1].contains(gd.image));
    ++moved[gd.boundary];
  }
  for (const auto& h : plan.handoffs) moved[h.boundary] += h.count;
  const double small = p.eta / (6 * p.beta);
  for (int s = 0; s < static_cast<int>(plan.overshoot.size()); ++s) {
    const int d = plan.overshoot[s];
    CHECK(moved[s] == d);
    int gadgets = 0;
    std::vector<int> sinks;
    for (const auto& gd : plan.gadgets)
      if (gd.boundary == s) ++gadgets, sinks.push_back(gd.sink);
    CHECK(gadgets == (d <= small ? d : std::min(d, p.resolved_gadget_cap())));
    if (!plan.spacing_relaxed)
      for (std::size_t i = 1; i < sinks.size(); ++i) CHECK(c.wrap(sinks[i] - sinks[i - 1]) >= p.beta * n - 1e-9);
  }
}

}  // namespace

TEST_SUITE("embedding") {
  TEST_CASE("checkers") {
    const auto k4 = gen_complete_digraph(4);
    const auto c = CyclePattern::parse("++-+");
    CHECK(check_cycle_embedding(k4, c, {0, 1, 2, 3}, true).ok);
    CHECK_FALSE(check_cycle_embedding(k4, c, {0, 1, 1, 3}, true).ok);
    CHECK_FALSE(check_cycle_embedding(k4, c, {0, 1, 2}, true).ok);
    const auto tt = gen_tournament(4, TournamentKind::Transitive);
    CHECK(check_cycle_embedding(tt, CyclePattern::parse("++--"), {0, 1, 3, 2}, true).ok);
    CHECK(check_cycle_embedding(tt, CyclePattern::parse("++--"), {0, 1, 2, 3}, true).ok == false);
    CHECK(check_cycle_embedding(tt, CyclePattern::parse("++--"), {0, 2, 3, 1}, true).ok);
    const auto k5 = gen_complete_digraph(5);
    CHECK_FALSE(check_cycle_embedding(k5, c, {0, 1, 2, 3}, true).ok);
    CHECK(check_cycle_embedding(k5, c, {0, 1, 2, 3}, false).ok);
    CHECK(check_path_embedding(tt, PathPattern::parse("++"), {0, 1, 3}).ok);
    CHECK_FALSE(check_path_embedding(tt, PathPattern::parse("++"), {0, 1, 3}, Vertex{1}).ok);
    CHECK_FALSE(check_path_embedding(tt, PathPattern::parse("+-"), {0, 3, 2}, std::nullopt, Vertex{1}).ok);
  }

  TEST_CASE("exact_embed examples") {
    const auto k8 = gen_complete_digraph(8);
    CHECK(exact_embed(k8, CyclePattern::directed(8)).found());

    const auto bip = gen_bipartite_extremal(10);
    for (const auto& c : {CyclePattern::directed(10), CyclePattern::antidirected(10), CyclePattern::parse("+++-++--+-")})
      CHECK(exact_embed(bip, c).status == SearchStatus::None);

    // No tournament on 8 vertices is an exception for antidirected paths.
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      const auto t = gen_tournament(8, TournamentKind::Random, seed);
      const auto r = exact_embed(t, PathPattern::antidirected(8));
      REQUIRE(r.found());
      CHECK(check_path_embedding(t, PathPattern::antidirected(8), r.embedding.map).ok);
    }
  }

  TEST_CASE("exact_embed agrees with the permutation oracle") {
    std::mt19937_64 rng(99);
    int found = 0, none = 0;
    for (int it = 0; it < 400; ++it) {
      const int n = 3 + static_cast<int>(rng() % 5);
      const auto g = oracle::random_digraph(n, 0.35 + 0.05 * (it % 6), rng);
      if (it % 2 == 0) {
        const int len = 3 + static_cast<int>(rng() % (n - 2));
        const CyclePattern c(oracle::random_bits(len, rng));
        const auto r = exact_embed(g, c);
        REQUIRE(r.status != SearchStatus::Timeout);
        CHECK(r.found() == oracle::has_cycle(g, c));
        if (r.found()) CHECK(check_cycle_embedding(g, c, r.embedding.map, len == n).ok);
        (r.found() ? found : none)++;
      } else {
        const int len = 1 + static_cast<int>(rng() % n);
        const PathPattern p(oracle::random_bits(len - 1, rng));
        const auto r = exact_embed(g, p);
        REQUIRE(r.status != SearchStatus::Timeout);
        CHECK(r.found() == oracle::has_path(g, p));
        if (r.found()) CHECK(check_path_embedding(g, p, r.embedding.map).ok);
        (r.found() ? found : none)++;
      }
    }
    CHECK(found > 50);
    CHECK(none > 50);
  }

  TEST_CASE("pins are honoured and validated") {
    const auto k6 = gen_complete_digraph(6);
    const auto c = CyclePattern::antidirected(6);
    const auto r = exact_embed(k6, c, {{0, 5}, {3, 2}});
    REQUIRE(r.found());
    CHECK(r.embedding.map[0] == 5);
    CHECK(r.embedding.map[3] == 2);
    CHECK_THROWS_AS(exact_embed(k6, c, {{0, 5}, {1, 5}}), PreconditionError);
    CHECK_THROWS_AS(exact_embed(k6, c, {{6, 1}}), InputError);
    CHECK_THROWS_AS(exact_embed(k6, c, {{0, 9}}), InputError);

    OracleOptions o;
    o.allowed = VertexSet::range(8, 0, 6);
    CHECK(exact_embed(gen_complete_digraph(8), c, {}, o).found());
    o.allowed = VertexSet::range(8, 0, 5);
    CHECK(exact_embed(gen_complete_digraph(8), c, {}, o).status == SearchStatus::None);
  }

  TEST_CASE("embed_path_between examples") {
    const auto k6 = gen_complete_digraph(6);
    const VertexSet none(6);
    const auto r = embed_path_between(k6, PathPattern::directed(4), 2, 5, none);
    REQUIRE(r.found());
    CHECK(check_path_embedding(k6, PathPattern::directed(4), r.embedding.map, Vertex{2}, Vertex{5}).ok);

    const auto g1 = gen_blowup_tt({4, 4}, 1.0, 0.0, 0);
    // Edges only enter the first part, so a directed path cannot leave it.
    const auto back = embed_path_between(g1, PathPattern::directed(3), 0, 5, VertexSet(8));
    CHECK(back.status == SearchStatus::None);
    CHECK(embed_path_between(g1, PathPattern::directed(3), 5, 0, VertexSet(8)).found());

    const auto k9 = gen_complete_digraph(9);
    const auto span = embed_path_between(k9, PathPattern::parse("+-+-++-+"), 3, 7, VertexSet(9));
    REQUIRE(span.found());
    CHECK(check_path_embedding(k9, PathPattern::parse("+-+-++-+"), span.embedding.map, Vertex{3}, Vertex{7}).ok);

    const auto blocked = embed_path_between(k6, PathPattern::directed(4), 0, 1, VertexSet(6, {2, 3, 4}));
    CHECK(blocked.status == SearchStatus::None);
  }

  TEST_CASE("embed_path_between matches the oracle on random hosts") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 100; ++it) {
      const int n = 5 + static_cast<int>(rng() % 3);
      const auto g = oracle::random_digraph(n, 0.5, rng);
      const int len = 2 + static_cast<int>(rng() % (n - 1));
      const PathPattern p(oracle::random_bits(len - 1, rng));
      const Vertex u = static_cast<Vertex>(rng() % n);
      const Vertex v = static_cast<Vertex>((u + 1 + rng() % (n - 1)) % n);
      const auto r = embed_path_between(g, p, u, v, VertexSet(n));
      // Oracle: a copy with prescribed ends, via a directed shadow copy of p
      // plus the endpoint constraint checked on every tuple.
      bool expected = false;
      std::vector<Vertex> perm(n);
      for (int i = 0; i < n; ++i) perm[i] = i;
      std::sort(perm.begin(), perm.end());
      do {
        if (perm[0] != u || perm[len - 1] != v) continue;
        bool ok = true;
        for (int i = 0; i + 1 < len && ok; ++i)
          ok = p.forward(i) ? g.has_edge(perm[i], perm[i + 1]) : g.has_edge(perm[i + 1], perm[i]);
        if (ok) expected = true;
      } while (!expected && std::next_permutation(perm.begin(), perm.end()));
      CHECK(r.found() == expected);
      if (r.found()) CHECK(check_path_embedding(g, p, r.embedding.map, u, v).ok);
    }
  }

  TEST_CASE("select_connectors") {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < 10; ++u)
      for (Vertex v = 10; v < 20; ++v) edges.push_back({u, v});
    const auto g = Digraph::from_edge_list(20, edges);
    const auto x = VertexSet::range(20, 0, 10), y = VertexSet::range(20, 10, 20);
    const auto cs = select_connectors(g, x, y, 5);
    REQUIRE(cs.size() == 5);
    std::set<Vertex> seen;
    for (const auto& e : cs) {
      CHECK(g.has_edge(e.from, e.to));
      CHECK(x.contains(e.from));
      CHECK(y.contains(e.to));
      seen.insert(e.from);
      seen.insert(e.to);
    }
    CHECK(seen.size() == 10);
    CHECK(cs[0] == Connector{0, 10});  // ties go to the smallest index

    CHECK_THROWS_AS(select_connectors(g, y, x, 1), PreconditionError);
    const auto rev = select_connectors(g, y, x, 3, ConnectorDirection::YToX);
    for (const auto& e : rev) CHECK(g.has_edge(e.from, e.to));
    CHECK_THROWS_AS(select_connectors(g, x, y, 11), ResourceError);
  }

  TEST_CASE("repeated connector calls stay disjoint") {
    const auto g = gen_blowup_tt({30, 30}, 0.9, 0.0, 2);
    const auto parts = blowup_parts({30, 30});
    VertexSet used(60);
    for (int round = 0; round < 6; ++round) {
      const auto cs = select_connectors(g, parts[1], parts[0], 4, ConnectorDirection::XToY, &used);
      REQUIRE(cs.size() == 4);
      for (const auto& e : cs) {
        CHECK(g.has_edge(e.from, e.to));
        CHECK_FALSE(used.contains(e.from));
        CHECK_FALSE(used.contains(e.to));
        used.insert(e.from);
        used.insert(e.to);
      }
    }
    CHECK(used.size() == 48);
  }

  TEST_CASE("embed params validation") {
    EmbedParams p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.resolved_gadget_cap() == 1);
    CHECK(p.resolved_block_size(100) == 2);
    CHECK(p.resolved_block_size(2000) == 5);
    p.rho = 0.01;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = EmbedParams{};
    p.beta = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
  }

  TEST_CASE("pipeline: antidirected cycle on a two-class instance goes through Case 2") {
    const auto inst = planted(60, 2, 11);
    REQUIRE(inst.sp.size() == 2);
    const auto c = CyclePattern::antidirected(60);
    EmbedParams p;
    const auto r = embed_hamilton_orientation(inst.g, inst.sp, c, p);
    CHECK(r.plan.kind == "2");
    check_plan(inst.g, reverse_for_embedding(inst.sp).classes, c, r, p);
  }

  TEST_CASE("pipeline: one backward edge on a three-class instance goes through Case 1a") {
    const auto inst = planted(72, 3, 12);
    REQUIRE(inst.sp.size() == 3);
    std::vector<bool> f(72, true);
    f[40] = false;
    const CyclePattern c(f);
    EmbedParams p;
    const auto r = embed_hamilton_orientation(inst.g, inst.sp, c, p);
    CHECK(r.plan.kind == "1a");
    CHECK(r.plan.run_length == 72);  // vertices on the forward run
    check_plan(inst.g, reverse_for_embedding(inst.sp).classes, c, r, p);
  }

  TEST_CASE("pipeline rejects the directed cycle across several classes") {
    const auto inst = planted(60, 2, 13);
    CHECK_THROWS_AS(embed_hamilton_orientation(inst.g, inst.sp, CyclePattern::directed(60)), PreconditionError);
    CHECK_THROWS_AS(embed_hamilton_orientation(inst.g, inst.sp, CyclePattern::antidirected(58)), PreconditionError);
    const std::vector<VertexSet> bad{VertexSet::range(60, 0, 30)};
    CHECK_THROWS_AS(embed_hamilton_orientation(inst.g, bad, CyclePattern::antidirected(60)), PreconditionError);
  }

  TEST_CASE("pipeline plan invariants across cases") {
    std::mt19937_64 rng(31);
    std::map<std::string, int> kinds;
    for (int t : {2, 3}) {
      const auto inst = planted(t == 2 ? 60 : 72, t, 40 + t);
      REQUIRE(inst.sp.size() == t);
      const auto classes = reverse_for_embedding(inst.sp).classes;
      for (int k = 0; k < 25; ++k) {
        const int n = inst.g.order();
        CyclePattern c = random_nondirected(n, rng);
        if (k % 5 == 1) {
          // long directed stretch with a short mixed tail
          std::vector<bool> f(n, true);
          for (int i = n - 12; i < n; ++i) f[i] = rng() & 1;
          f[n - 1] = false;
          c = CyclePattern(f);
        }
        EmbedParams p;
        p.seed = static_cast<std::uint64_t>(k + 1);
        const auto r = embed_hamilton_orientation(inst.g, inst.sp, c, p);
        ++kinds[r.plan.kind];
        check_plan(inst.g, classes, c, r, p);
      }
    }
    CHECK(kinds["2"] > 0);
    CHECK(kinds["1a"] + kinds["1b"] > 0);
  }

  TEST_CASE("single class uses the whole digraph") {
    const auto g = gen_random_min_degree(30, 45, 3).graph;
    const std::vector<VertexSet> one{g.all()};
    const auto c = CyclePattern::parse(std::string(15, '+') + std::string(15, '-'));
    const auto r = embed_hamilton_orientation(g, one, c);
    CHECK(r.plan.kind == "t=1");
    CHECK(r.ok);
    const auto d = embed_hamilton_orientation(g, one, CyclePattern::directed(30));
    CHECK(d.ok);
  }

  TEST_CASE("split_expander") {
    const auto k24 = gen_complete_digraph(24);
    const auto r = split_expander(k24, {0, 12, 12}, std::nullopt);
    CHECK(r.attempts == 1);
    REQUIRE(r.parts.size() == 3);
    CHECK(r.parts[0].empty());
    CHECK(r.parts[1].size() == 12);
    CHECK(r.parts[2].size() == 12);
    CHECK_FALSE(r.parts[1].intersects(r.parts[2]));

    const auto g = gen_random_min_degree(40, 64, 8).graph;
    const VertexSet w0(40, {0, 1, 2, 3});
    SplitParams sp;
    sp.seed = 4;
    const auto s = split_expander(g, {4, 18, 18}, w0, sp);
    CHECK(s.parts[0] == w0);
    CHECK(s.attempts <= 32);
    for (int i = 1; i <= 2; ++i)
      g.all().for_each([&](Vertex x) {
        CHECK(g.out_degree(x, s.parts[i]) >= sp.eta * 18 / 4);
        CHECK(g.in_degree(x, s.parts[i]) >= sp.eta * 18 / 4);
      });
    CHECK_THROWS_AS(split_expander(k24, {0, 12, 11}, std::nullopt), PreconditionError);
  }

  TEST_CASE("two_factor") {
    const auto k10 = gen_complete_digraph(10);
    const auto f = two_factor(k10, 1);
    REQUIRE(f.cycles.size() == 1);
    CHECK(f.cycles[0].size() == 10);

    const auto g1 = gen_blowup_tt({5, 5, 5}, 1.0, 0.0, 0);
    CHECK(min_degree(g1) == 18);
    CHECK_THROWS_AS(two_factor(g1, 2), PreconditionError);

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto g = gen_random_min_degree(12, 17, seed).graph;
      const auto r = two_factor(g, 2);
      CHECK(is_strongly_connected(g));
      REQUIRE(r.cycles.size() == 1);
      CHECK(check_cycle_embedding(g, CyclePattern::directed(12), r.cycles[0], true).ok);
    }
  }

  TEST_CASE("pancyclic suite") {
    PancyclicParams p;
    p.k = 1;
    const auto k14 = pancyclic_suite(gen_complete_digraph(14), p);
    CHECK(k14.degree_condition_met);
    CHECK(k14.missing() == 0);
    CHECK(k14.timeouts() == 0);
    CHECK(k14.found() == static_cast<int>(k14.cells.size()));
    for (const auto& cell : k14.cells) CHECK(cell.validated);

    const auto g1 = gen_blowup_tt({7, 7}, 1.0, 0.0, 0);
    for (int len = 8; len <= 14; ++len)
      CHECK(exact_embed(g1, CyclePattern::directed(len)).status == SearchStatus::None);
    CHECK(exact_embed(g1, CyclePattern::directed(7)).found());
  }
}
