#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "orienthc/embedding.hpp"
#include "orienthc/errors.hpp"
#include "orienthc/generators.hpp"

using namespace ohc;

TEST_SUITE("generators") {
  TEST_CASE("complete digraph") {
    CHECK(gen_complete_digraph(3).edge_count() == 6);
    CHECK(gen_complete_digraph(1).edge_count() == 0);
    CHECK(min_degree(gen_complete_digraph(7)) == 12);
    CHECK_THROWS_AS(gen_complete_digraph(0), InputError);
  }

  TEST_CASE("bipartite extremal digraph") {
    const auto g = gen_bipartite_extremal(10);
    CHECK(min_degree(g) == 8);
    CHECK(g.out_degree(0, VertexSet::range(10, 0, 4)) == 0);
    CHECK(g.out_degree(0, VertexSet::range(10, 4, 10)) == 6);
    CHECK(g.out_degree(9, VertexSet::range(10, 4, 10)) == 0);
    const auto g4 = gen_bipartite_extremal(4);
    CHECK(g4.edge_count() == 2 * 1 * 3);
    for (int n = 4; n <= 40; ++n) CHECK(min_degree(gen_bipartite_extremal(n)) == 2 * ((n + 1) / 2 - 1));
    CHECK_THROWS_AS(gen_bipartite_extremal(3), InputError);
  }

  TEST_CASE("split cliques") {
    const auto g = gen_split_cliques(9);
    CHECK(min_degree(g) == 6);
    CHECK_FALSE(is_strongly_connected(g));
    const auto comps = strongly_connected_components(g);
    REQUIRE(comps.size() == 2);
    CHECK(std::min(comps[0].size(), comps[1].size()) == 4);
    CHECK(exact_embed(gen_split_cliques(8), PathPattern::directed(8)).status == SearchStatus::None);
    CHECK(exact_embed(gen_split_cliques(8), PathPattern::antidirected(8)).status == SearchStatus::None);
  }

  TEST_CASE("transitive tournament blow-up") {
    const auto g = gen_blowup_tt({4, 4, 4}, 1.0, 0.0, 0);
    CHECK(min_degree(g) == 14);
    CHECK(gen_blowup_tt({3}, 1.0, 0.0, 1).edges() == gen_complete_digraph(3).edges());

    const auto g55 = gen_blowup_tt({5, 5}, 1.0, 0.0, 0);
    CHECK(exact_embed(g55, CyclePattern::directed(5)).found());
    for (int len = 6; len <= 10; ++len) CHECK(exact_embed(g55, CyclePattern::directed(len)).status == SearchStatus::None);

    CHECK_THROWS_AS(gen_blowup_tt({}, 1.0, 0.0, 0), InputError);
    CHECK_THROWS_AS(gen_blowup_tt({3, 0}, 1.0, 0.0, 0), InputError);
    CHECK_THROWS_AS(gen_blowup_tt({3, 3}, 1.5, 0.0, 0), InputError);
    CHECK_THROWS_AS(gen_blowup_tt({3, 3}, 1.0, -0.1, 0), InputError);
  }

  TEST_CASE("blow-up degree formula over balanced sizes") {
    for (int k = 1; k <= 5; ++k)
      for (int n = k + 1; n <= 60; ++n) {
        const auto g = gen_blowup_tt(balanced_sizes(n, k + 1), 1.0, 0.0, 0);
        CHECK(min_degree(g) == n + n / (k + 1) - 2);
      }
  }

  TEST_CASE("blow-up edges follow the part order") {
    const std::vector<int> sizes{3, 4, 5};
    const auto g = gen_blowup_tt(sizes, 0.7, 0.2, 4);
    const auto parts = blowup_parts(sizes);
    int noise = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const auto c = cross_counts(g, parts[i], parts[j]);
        CHECK(c.backward == sizes[i] * sizes[j]);
        noise += c.forward;
      }
    CHECK(noise > 0);
    CHECK(noise < 47);
    // Inside a part every kept pair is a double edge.
    for (const auto& p : parts)
      for (const auto& [u, v] : g.edges())
        if (p.contains(u) && p.contains(v)) CHECK(g.has_edge(v, u));
  }

  TEST_CASE("balanced sizes") {
    CHECK(balanced_sizes(14, 3) == std::vector<int>{5, 5, 4});
    CHECK(balanced_sizes(12, 4) == std::vector<int>{3, 3, 3, 3});
    CHECK_THROWS_AS(balanced_sizes(2, 3), InputError);
  }

  TEST_CASE("random digraph meets its degree target") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto r = gen_random_min_degree(12, 16, seed);
      CHECK(min_degree(r.graph) >= 16);
    }
    CHECK(gen_random_min_degree(9, 16, 3).graph.edges() == gen_complete_digraph(9).edges());
    const auto plain = gen_random_min_degree(20, 0, 3);
    CHECK(plain.augmentations == 0);
    CHECK(plain.graph.edge_count() > 100);
    CHECK(plain.graph.edge_count() < 280);
    CHECK_THROWS_AS(gen_random_min_degree(5, 9, 1), InputError);
  }

  TEST_CASE("tournaments") {
    const auto t = gen_tournament(5, TournamentKind::Transitive);
    for (Vertex u = 0; u < 5; ++u)
      for (Vertex v = 0; v < 5; ++v)
        if (u != v) CHECK(t.has_edge(u, v) == (u < v));
    const auto r = gen_tournament(5, TournamentKind::Random, 8);
    CHECK(r.edge_count() == 10);
    for (const auto& s : double_edge_graph(r)) CHECK(s.empty());
    for (std::uint64_t seed = 1; seed <= 40; ++seed)
      CHECK(exact_embed(gen_tournament(7, TournamentKind::Random, seed), PathPattern::directed(7)).found());
  }

  TEST_CASE("seeded families are reproducible") {
    CHECK(gen_random_min_degree(15, 20, 77).graph.edges() == gen_random_min_degree(15, 20, 77).graph.edges());
    CHECK(gen_blowup_tt({6, 6}, 0.8, 0.1, 5).edges() == gen_blowup_tt({6, 6}, 0.8, 0.1, 5).edges());
    CHECK(gen_tournament(9, TournamentKind::Random, 2).edges() == gen_tournament(9, TournamentKind::Random, 2).edges());
    CHECK(gen_tournament(9, TournamentKind::Random, 2).edges() != gen_tournament(9, TournamentKind::Random, 3).edges());
  }

  TEST_CASE("generate dispatches families and rejects unknown ones") {
    GenSpec s;
    s.family = "g1";
    s.sizes = {2, 2};
    CHECK(generate(s).order() == 4);
    s.sizes.clear();
    CHECK_THROWS_AS(generate(s), InputError);
    s.family = "bipartite";
    s.n = 10;
    CHECK(min_degree(generate(s)) == 8);
    s.family = "nope";
    CHECK_THROWS_AS(generate(s), InputError);
    GenSpec r{"random", 12, {}, 1.0, 0.0, 16, 9};
    const auto d = nlohmann::json::parse(describe(r));
    CHECK(d["family"] == "random");
    CHECK(d["delta"] == 16);
    CHECK(d["seed"] == 9);
  }
}
