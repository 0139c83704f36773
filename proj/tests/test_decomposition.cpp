#include <random>

#include "doctest.h"
#include "orienthc/decomposition.hpp"
#include "orienthc/errors.hpp"
#include "orienthc/generators.hpp"
#include "orienthc/workbench.hpp"

using namespace ohc;

namespace {

// Two complete blocks of 20; every cross pair carries the edge from the
// second block to the first. `loner` (when >= 0) is a vertex of the first
// block that keeps only double edges to the second block.
Digraph planted_two_blocks(Vertex loner) {
  const int n = 40;
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v) {
      if (u == v) continue;
      const bool same = (u < 20) == (v < 20);
      if (loner >= 0 && (u == loner || v == loner)) {
        const Vertex other = u == loner ? v : u;
        if (other >= 20) edges.push_back({u, v});
        continue;
      }
      if (same || (u >= 20 && v < 20)) edges.push_back({u, v});
    }
  return Digraph::from_edge_list(n, edges);
}

int symmetric_difference(const VertexSet& a, const VertexSet& b) { return (a - b).size() + (b - a).size(); }

}  // namespace

TEST_SUITE("decomposition") {
  TEST_CASE("parameter defaults and validation") {
    DecompositionParams p;
    p.k = 3;
    p.zeta = 0.2;
    const auto r = p.resolved();
    CHECK(r.alpha == doctest::Approx(0.2 / 100));
    CHECK(r.tau == doctest::Approx(r.alpha / 10));
    CHECK(r.nu == doctest::Approx(r.alpha * r.tau * r.zeta / 16));
    CHECK_NOTHROW(r.validate());

    auto bad = r;
    bad.alpha = 0.2 / 96 * 1.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = r;
    bad.tau = r.alpha;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = r;
    bad.nu = r.tau;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    DecompositionParams lit = r;
    lit.schedule = AlphaSchedule::Literal;
    CHECK(lit.cut_alpha(0) == doctest::Approx(std::pow(r.alpha, 8)));
    CHECK(lit.cut_alpha(2) == doctest::Approx(std::pow(r.alpha, 2)));
    CHECK(lit.clean_alpha(0) == doctest::Approx(std::pow(r.alpha, 4)));
    lit.schedule = AlphaSchedule::Flat;
    CHECK(lit.cut_alpha(0) == doctest::Approx(r.alpha));
  }

  TEST_CASE("clean_cut leaves a clean planted cut alone") {
    const auto g = planted_two_blocks(-1);
    const auto x1 = VertexSet::range(40, 0, 20), x2 = VertexSet::range(40, 20, 40);
    const auto cut = make_cut(g, x1);
    CHECK(cut.forward_edges == 0);
    const auto c = clean_cut(g, g.all(), cut, 3, 0.2, 0.002);
    CHECK(c.moved1.empty());
    CHECK(c.moved2.empty());
    CHECK(c.first == x1);
    CHECK(c.second == x2);
    CHECK(c.alpha_achieved == 0.0);
  }

  TEST_CASE("clean_cut moves a vertex whose edges all go to the other side") {
    const Vertex loner = 7;
    const auto g = planted_two_blocks(loner);
    const auto x1 = VertexSet::range(40, 0, 20);
    const auto c = clean_cut(g, g.all(), make_cut(g, x1), 3, 0.2, 0.002);
    CHECK(c.moved1 == VertexSet(40, {loner}));
    CHECK(c.moved2.empty());
    CHECK(c.reassigned2 == VertexSet(40, {loner}));
    CHECK(c.reassigned1.empty());
    CHECK(c.second.contains(loner));
    CHECK(c.first == x1 - VertexSet(40, {loner}));

    // Re-cleaning the output is a fixed point.
    const auto again = clean_cut(g, g.all(), make_cut(g, c.first), 3, 0.2, 0.002);
    CHECK(again.first == c.first);
    CHECK(again.second == c.second);
    CHECK(again.moved1.empty());
    CHECK(again.moved2.empty());
  }

  TEST_CASE("clean_cut reports failed hypotheses without throwing") {
    const auto g = gen_split_cliques(20);
    const auto c = clean_cut(g, g.all(), make_cut(g, VertexSet::range(20, 0, 10)), 2, 0.2, 0.002);
    CHECK_FALSE(c.hypotheses_hold());
    const CutCertificate overlapping{VertexSet::range(20, 0, 10), VertexSet::range(20, 5, 20)};
    CHECK_THROWS_AS(clean_cut(g, g.all(), overlapping, 2, 0.2, 0.002), PreconditionError);
  }

  TEST_CASE("complete digraph stays a single class") {
    DecompositionParams p;
    p.k = 2;
    const auto g = gen_complete_digraph(30);
    const auto sp = decompose(g, p);
    CHECK(sp.size() == 1);
    CHECK(sp.rounds == 0);
    CHECK(sp.verdicts[0].verdict.outcome != ExpansionVerdict::Outcome::Violator);
    const auto rep = verify_partition(g, sp, p);
    CHECK(rep.all_pass());
    CHECK(rep.clauses[2].detail == "vacuous (t=1)");
  }

  TEST_CASE("degree precondition rejects two disjoint blocks") {
    DecompositionParams p;
    p.k = 2;
    const auto g = gen_blowup_tt({25, 25}, 0.95, 0.0, 1);
    std::vector<Edge> inside;
    for (const auto& [u, v] : g.edges())
      if ((u < 25) == (v < 25)) inside.push_back({u, v});
    const auto split = Digraph::from_edge_list(50, inside);
    CHECK_THROWS_AS(decompose(split, p), PreconditionError);
    // Relaxed, the cut is found but backward density (3) fails.
    p.enforce_degree = false;
    const auto sp = decompose(split, p);
    REQUIRE(sp.size() == 2);
    const auto rep = verify_partition(split, sp, p);
    CHECK_FALSE(rep.clause(3));
  }

  TEST_CASE("planted classes are recovered in the dense-backward order") {
    for (int t : {2, 3}) {
      for (std::uint64_t seed : {3u, 4u}) {
        const int n = 60;
        const auto sizes = balanced_sizes(n, t);
        const auto g = gen_blowup_tt(sizes, 0.95, 0.001, seed);
        const auto p = planted_params(t, 0.3, seed);
        const auto sp = decompose(g, p);
        const auto parts = blowup_parts(sizes);
        REQUIRE(sp.size() == t);
        for (int i = 0; i < t; ++i) CHECK(symmetric_difference(sp.classes[i], parts[i]) <= 2);
        CHECK(sp.rounds <= p.k - 1);
        CHECK(sp.size() <= p.k);

        // Every audited cut has its first side entirely before its second.
        const auto cls = sp.class_of();
        for (const auto& a : sp.audit) {
          int last_first = -1, first_second = t;
          a.first.for_each([&](Vertex v) { last_first = std::max(last_first, cls[v]); });
          a.second.for_each([&](Vertex v) { first_second = std::min(first_second, cls[v]); });
          CHECK(last_first < first_second);
        }

        const auto rep = verify_partition(g, sp, p);
        CHECK(rep.valid_partition);
        CHECK(rep.clause(1));
        CHECK(rep.clause(3));
        CHECK(rep.clause(2));
      }
    }
  }

  TEST_CASE("verify_partition negative control: a split planted block") {
    const auto sizes = balanced_sizes(60, 2);
    const auto g = gen_blowup_tt(sizes, 0.95, 0.0, 9);
    const auto parts = blowup_parts(sizes);
    const auto p = planted_params(2, 0.3, 9);
    CHECK(verify_partition(g, parts, p).all_pass());
    const std::vector<VertexSet> wrong{parts[0], VertexSet::range(60, 30, 45), VertexSet::range(60, 45, 60)};
    const auto rep = verify_partition(g, wrong, p);
    CHECK_FALSE((rep.clause(1) && rep.clause(2)));

    const std::vector<VertexSet> overlap{parts[0], g.all()};
    CHECK_FALSE(verify_partition(g, overlap, p).valid_partition);
  }

  TEST_CASE("verify_partition is deterministic") {
    const auto g = gen_blowup_tt({20, 20}, 0.9, 0.01, 2);
    const auto p = planted_params(2, 0.3, 2);
    const std::vector<VertexSet> cls{VertexSet::range(40, 0, 17), VertexSet::range(40, 17, 40)};
    const auto a = verify_partition(g, cls, p);
    const auto b = verify_partition(g, cls, p);
    REQUIRE(a.clauses.size() == b.clauses.size());
    for (std::size_t i = 0; i < a.clauses.size(); ++i) {
      CHECK(a.clauses[i].pass == b.clauses[i].pass);
      CHECK(a.clauses[i].measured == b.clauses[i].measured);
    }
  }

  TEST_CASE("reverse_for_embedding") {
    const auto sizes = balanced_sizes(60, 3);
    const auto g = gen_blowup_tt(sizes, 0.95, 0.0, 5);
    const auto sp = decompose(g, planted_params(3, 0.3, 5));
    REQUIRE(sp.size() == 3);
    const auto r = reverse_for_embedding(sp);
    CHECK(r.reversed);
    for (int i = 0; i < 3; ++i) CHECK(r.classes[i] == sp.classes[2 - i]);
    const auto recount = pair_counts(g, r.classes);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        CHECK(r.pairs[i][j].forward == recount[i][j].forward);
        CHECK(r.pairs[i][j].backward == recount[i][j].backward);
        CHECK(recount[i][j].forward > recount[i][j].backward);
      }
    const auto twice = reverse_for_embedding(r);
    CHECK(twice.classes == sp.classes);
    CHECK_FALSE(twice.reversed);

    DecompositionParams p;
    const auto one = decompose(gen_complete_digraph(20), p);
    CHECK(reverse_for_embedding(one).classes == one.classes);
  }
}
