#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "orienthc/embedding.hpp"
#include "orienthc/errors.hpp"
#include "orienthc/pattern.hpp"

using namespace ohc;

namespace {

CyclePattern from_tf(const std::string& s) {
  std::vector<bool> f;
  for (char ch : s) f.push_back(ch == 'T');
  return CyclePattern(f);
}

CyclePattern from_mask(std::uint32_t mask, int n) {
  std::vector<bool> f(n);
  for (int i = 0; i < n; ++i) f[i] = (mask >> i) & 1U;
  return CyclePattern(f);
}

// Direct window scan: a window of w vertices starting at s has an interior
// switch iff its w-1 edges are not all equal.
bool window_oracle(const CyclePattern& c, int w) {
  const int n = c.size();
  if (w <= 2) return false;
  for (int s = 0; s < n; ++s) {
    bool mixed = false;
    for (int e = 1; e < w - 1 && !mixed; ++e) mixed = c.forward(s + e) != c.forward(s);
    if (!mixed) return false;
  }
  return true;
}

CyclePattern random_case2(int n, double beta, std::mt19937_64& rng) {
  while (true) {
    const auto c = CyclePattern(oracle::random_bits(n, rng));
    if (c.is_directed() || classify_case(c, beta).case1) continue;
    return canonical_rotation(c);
  }
}

}  // namespace

TEST_SUITE("pattern") {
  TEST_CASE("parse and aliases") {
    CHECK(CyclePattern::parse("++-").to_string() == "++-");
    CHECK(CyclePattern::parse("directed", 5) == CyclePattern::directed(5));
    CHECK(CyclePattern::parse("antidirected", 6) == CyclePattern::antidirected(6));
    CHECK(CyclePattern::parse("+−+−") == CyclePattern::antidirected(4));
    CHECK_THROWS_AS(CyclePattern::parse("+-"), InputError);
    CHECK_THROWS_AS(CyclePattern::parse("+-x"), InputError);
    CHECK_THROWS_AS(CyclePattern::antidirected(7), InputError);
    CHECK(PathPattern::parse("").length() == 1);
    CHECK(PathPattern::parse("+-+").length() == 4);
  }

  TEST_CASE("switches examples") {
    CHECK(switches(CyclePattern::directed(7)).empty());
    CHECK(switches(CyclePattern::antidirected(6)) == std::vector<int>{0, 1, 2, 3, 4, 5});
    const auto c = from_tf("TTFTFF");
    CHECK(switches(c) == std::vector<int>{0, 2, 3, 4});
    CHECK(switches(c) == oracle::switch_positions(c));
  }

  TEST_CASE("switch parity and oracle agreement for every pattern up to n=12") {
    for (int n = 3; n <= 12; ++n)
      for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        const auto c = from_mask(mask, n);
        const auto s = switches(c);
        REQUIRE(s == oracle::switch_positions(c));
        REQUIRE(s.size() % 2 == 0);
        REQUIRE(s.empty() == c.is_directed());
        for (int p : s) REQUIRE(c.is_source(p) != c.is_sink(p));
      }
  }

  TEST_CASE("longest directed segment examples") {
    CHECK(longest_directed_segment(CyclePattern::directed(9)).vertex_count == 9);
    const auto alt = longest_directed_segment(CyclePattern::antidirected(8));
    CHECK(alt.vertex_count == 2);
    CHECK(alt.start == 0);

    const auto c = from_tf("TTTFFTTTT");
    const auto r = longest_directed_segment(c);
    CHECK(r.vertex_count == oracle::longest_run(c));
    CHECK(r.vertex_count == 8);  // edges 5..8 and 0..2 form one wrapping run
    CHECK(r.start == 5);
    CHECK(r.forward);
  }

  TEST_CASE("longest directed segment against brute force") {
    for (int n = 3; n <= 12; ++n)
      for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        const auto c = from_mask(mask, n);
        const auto r = longest_directed_segment(c);
        REQUIRE(r.vertex_count == oracle::longest_run(c));
        if (c.is_directed()) continue;
        for (int e = 0; e + 1 < r.vertex_count; ++e) REQUIRE(c.forward(r.start + e) == r.forward);
        // maximal at both ends
        REQUIRE(c.forward(r.start - 1) != r.forward);
        REQUIRE(c.forward(r.start + r.vertex_count - 1) != r.forward);
      }
  }

  TEST_CASE("rotation, reflection and converse") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 200; ++it) {
      const int n = 3 + static_cast<int>(rng() % 14);
      const auto c = CyclePattern(oracle::random_bits(n, rng));
      const int s = static_cast<int>(rng() % n);
      const auto rot = c.rotated(s);
      const auto ref = c.reflected();
      const auto con = c.converse();
      for (int i = 0; i < n; ++i) {
        CHECK(rot.forward(i) == c.forward(s + i));
        CHECK(ref.forward(i) == !c.forward(-i - 1));
        CHECK(con.forward(i) == !c.forward(i));
      }
      CHECK(ref.reflected() == c);
      std::vector<int> mirrored;
      for (int p : switches(c)) mirrored.push_back(c.wrap(-p));
      std::sort(mirrored.begin(), mirrored.end());
      CHECK(switches(ref) == mirrored);
      CHECK(longest_directed_segment(con).vertex_count == longest_directed_segment(c).vertex_count);
      CHECK(longest_directed_segment(ref).vertex_count == longest_directed_segment(c).vertex_count);
    }
  }

  TEST_CASE("canonical rotation puts a source first") {
    std::mt19937_64 rng(8);
    for (int it = 0; it < 300; ++it) {
      const int n = 3 + static_cast<int>(rng() % 14);
      const auto c = CyclePattern(oracle::random_bits(n, rng));
      const auto k = canonical_rotation(c);
      CHECK(canonical_rotation(c.rotated(static_cast<int>(rng() % n))) == k);
      if (!c.is_directed()) CHECK(k.is_source(0));
    }
  }

  TEST_CASE("necklace enumeration") {
    // Binary necklace counts for n = 3..8.
    const int expected[] = {4, 6, 8, 14, 20, 36};
    for (int n = 3; n <= 8; ++n) {
      const auto all = cycle_patterns_up_to_rotation(n);
      CHECK(static_cast<int>(all.size()) == expected[n - 3]);
      CHECK(static_cast<int>(cycle_patterns_up_to_rotation(n, false).size()) == expected[n - 3] - 2);
      std::set<std::string> seen;
      for (const auto& c : all) seen.insert(canonical_rotation(c).to_string());
      CHECK(seen.size() == all.size());
    }
    CHECK(all_path_patterns(5).size() == 16);
    CHECK(all_path_patterns(1).size() == 1);
  }

  TEST_CASE("classify_case examples") {
    const auto d = classify_case(CyclePattern::directed(10), 0.3);
    CHECK(d.case1);
    CHECK(d.run.vertex_count == 10);
    const auto a = classify_case(CyclePattern::antidirected(10), 0.3);
    CHECK_FALSE(a.case1);
    CHECK(a.window == 3);
    CHECK(floor_fraction(0.3, 10) == 3);
  }

  TEST_CASE("classify_case matches the window scan") {
    for (double beta : {0.2, 0.25, 0.5}) {
      for (std::uint32_t mask = 0; mask < (1U << 12); ++mask) {
        const auto c = from_mask(mask, 12);
        const auto split = classify_case(c, beta);
        const int w = floor_fraction(beta, 12);
        REQUIRE(split.case1 == (oracle::longest_run(c) >= w));
        REQUIRE(every_window_has_switch(c, w) == window_oracle(c, w));
        if (!split.case1) REQUIRE(window_oracle(c, w));
      }
    }
  }

  TEST_CASE("partition_case2 trivial and constructed examples") {
    const auto c = CyclePattern::antidirected(12);
    const auto one = partition_case2(c, {12}, 0.25);
    REQUIRE(one.segments.size() == 1);
    CHECK(one.segments[0].start == 0);
    CHECK(one.segments[0].length == 12);
    CHECK(one.overshoot.empty());

    // At n = 12 no β makes the antidirected cycle Case 2 while 6 ≥ 3βn.
    CHECK_THROWS_AS(partition_case2(c, {6, 6}, 0.25), PreconditionError);
    CHECK_THROWS_AS(partition_case2(c, {6, 6}, 1.0 / 6), PreconditionError);

    const auto big = CyclePattern::antidirected(24);
    const auto plan = partition_case2(big, {12, 12}, 0.125);
    REQUIRE(plan.segments.size() == 2);
    CHECK(plan.segments[0].length == 13);
    CHECK(plan.overshoot == std::vector<int>{1});
    CHECK(plan.segments[1].length == 11);

    // Forward edge exactly at every cumulative boundary.
    std::vector<bool> f(40);
    for (int i = 0; i < 40; ++i) f[i] = (i % 2 == 0);
    f[13] = true;
    f[14] = false;
    f[27] = true;
    f[28] = false;
    const CyclePattern fitted(f);
    REQUIRE(fitted.is_source(0));
    const auto exact = partition_case2(fitted, {14, 14, 12}, 0.1);
    CHECK(exact.overshoot == std::vector<int>{0, 0});

    CHECK_THROWS_AS(partition_case2(c, {5, 6}, 0.25), PreconditionError);
    CHECK_THROWS_AS(partition_case2(CyclePattern::directed(12), {6, 6}, 0.25), PreconditionError);
  }

  TEST_CASE("partition_case2 invariants on random Case 2 patterns") {
    std::mt19937_64 rng(21);
    for (int it = 0; it < 400; ++it) {
      const int n = 40 + static_cast<int>(rng() % 41);
      const double beta = 0.1;
      const int t = 2 + static_cast<int>(rng() % 2);
      std::vector<int> sizes(t, n / t);
      sizes[0] += n - t * (n / t);
      const auto c = random_case2(n, beta, rng);
      const auto plan = partition_case2(c, sizes, beta);
      REQUIRE(static_cast<int>(plan.segments.size()) == t);
      int pos = 0, cum_len = 0, cum_size = 0;
      for (int s = 0; s < t; ++s) {
        const auto& seg = plan.segments[s];
        CHECK(seg.start == pos);
        CHECK(seg.target_class == s);
        CHECK(seg.length >= 1);
        pos += seg.length;
        cum_len += seg.length;
        cum_size += sizes[s];
        if (s + 1 < t) {
          const int end = seg.start + seg.length;  // n_s
          CHECK(c.forward(end - 1));
          const int d = cum_len - cum_size;
          CHECK(plan.overshoot[s] == d);
          CHECK(d >= 0);
          CHECK(d <= beta * n);
          // Minimality: no earlier admissible end with a forward final edge.
          for (int e = std::max(cum_size, seg.start + 1); e < end; ++e) CHECK_FALSE(c.forward(e - 1));
        } else {
          CHECK(seg.length <= sizes[s]);
        }
      }
      CHECK(pos == n);
    }
  }

  TEST_CASE("case 1b block decomposition") {
    const auto sizes_of = [](const std::vector<RunBlock>& bs) {
      std::vector<int> out;
      for (const auto& b : bs) out.push_back(b.size);
      return out;
    };
    const auto c14 = CyclePattern(std::vector<bool>(14, true));
    // n - ℓ = 10, D = 4
    CHECK(sizes_of(directed_run_decomposition_case1b(CyclePattern::antidirected(14), 4, 4)) ==
          std::vector<int>{4, 3, 3});
    CHECK(sizes_of(directed_run_decomposition_case1b(CyclePattern::antidirected(14), 10, 4)) ==
          std::vector<int>{4});
    CHECK(sizes_of(directed_run_decomposition_case1b(CyclePattern::antidirected(10), 3, 3)) ==
          std::vector<int>{3, 2, 2});
    CHECK_THROWS_AS(directed_run_decomposition_case1b(c14, 14, 4), PreconditionError);
    CHECK_THROWS_AS(directed_run_decomposition_case1b(CyclePattern::antidirected(14), 4, 1), PreconditionError);

    std::mt19937_64 rng(4);
    for (int it = 0; it < 300; ++it) {
      const int n = 10 + static_cast<int>(rng() % 60);
      const int ell = 1 + static_cast<int>(rng() % (n - 1));
      const int d = 2 + static_cast<int>(rng() % 9);
      const auto c = CyclePattern(oracle::random_bits(n, rng));
      const auto blocks = directed_run_decomposition_case1b(c, ell, d);
      const int rest = n - ell;
      CHECK(static_cast<int>(blocks.size()) == (rest + d - 1) / d);
      int pos = 1, lo = n, hi = 0;
      for (const auto& b : blocks) {
        CHECK(b.start == pos);
        CHECK(b.size <= d);
        CHECK(b.next_forward == c.forward(b.start + b.size - 1));
        lo = std::min(lo, b.size);
        hi = std::max(hi, b.size);
        pos += b.size;
      }
      CHECK(pos == rest + 1);
      CHECK(hi - lo <= 1);
      if (blocks.size() > 1) CHECK(2 * lo >= d);
    }
  }

  TEST_CASE("segment extraction") {
    const auto c = CyclePattern::parse("++-+-");
    CHECK(segment(c, 3, 4).to_string() == "+-+");
    CHECK(segment(c, 0, 1).length() == 1);
    CHECK(PathPattern::parse("++-").reversed().to_string() == "+--");
  }

  TEST_CASE("tt_embed_path examples") {
    CHECK(tt_embed_path(PathPattern::directed(5), 5) == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(tt_embed_path(PathPattern::parse(""), 1) == std::vector<int>{0});
    const auto zig = tt_embed_path(PathPattern::parse("+-+"), 4);
    REQUIRE(zig.size() == 4);
    CHECK(zig[0] < zig[1]);
    CHECK(zig[1] > zig[2]);
    CHECK(zig[2] < zig[3]);
    CHECK_THROWS_AS(tt_embed_path(PathPattern::directed(5), 4), PreconditionError);
  }

  TEST_CASE("tt_embed_path satisfies the tournament relation for every path up to 12 vertices") {
    for (int len = 1; len <= 12; ++len)
      for (const auto& p : all_path_patterns(len))
        for (int size : {len, len + 3}) {
          const auto r = tt_embed_path(p, size);
          REQUIRE(static_cast<int>(r.size()) == len);
          std::set<int> distinct(r.begin(), r.end());
          REQUIRE(static_cast<int>(distinct.size()) == len);
          for (int x : r) REQUIRE((x >= 0 && x < size));
          for (int i = 0; i + 1 < len; ++i) REQUIRE((r[i] < r[i + 1]) == p.forward(i));
        }
  }
}
