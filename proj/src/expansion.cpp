#include "orienthc/expansion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "orienthc/errors.hpp"

namespace ohc {

namespace {

constexpr double kEps = 1e-9;

std::vector<std::uint32_t> small_masks(const Digraph& g, bool out) {
  std::vector<std::uint32_t> m(g.order());
  for (Vertex v = 0; v < g.order(); ++v)
    m[v] = static_cast<std::uint32_t>((out ? g.out(v) : g.in(v)).word(0));
  return m;
}

VertexSet from_mask(int n, std::uint32_t mask) {
  VertexSet s(n);
  if (n > 0) s.word(0) = mask;
  return s;
}

// Runs f(chunk) for chunk = 0..chunks-1 on `workers` threads.
template <class Result, class F>
std::vector<Result> run_chunks(int chunks, int workers, F f) {
  std::vector<Result> results(chunks);
  workers = std::clamp(workers, 1, chunks);
  if (workers == 1) {
    for (int c = 0; c < chunks; ++c) results[c] = f(c);
    return results;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int c = w; c < chunks; c += workers) results[c] = f(c);
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

int chunk_bits_for(int n, int workers) {
  if (workers <= 1) return 0;
  return std::min(n - 1, 6);
}

}  // namespace

int robust_threshold(int n, double nu) {
  return std::max(1, static_cast<int>(std::ceil(nu * n - kEps)));
}

int expansion_min_size(int n, double tau) { return static_cast<int>(std::ceil(tau * n - kEps)); }
int expansion_max_size(int n, double tau) { return static_cast<int>(std::floor((1.0 - tau) * n + kEps)); }
int expansion_required(int set_size, int n, double nu) {
  return static_cast<int>(std::ceil(set_size + nu * n - kEps));
}

VertexSet robust_out_neighborhood(const Digraph& g, const VertexSet& s, double nu) {
  const int thr = robust_threshold(g.order(), nu);
  VertexSet rn(g.order());
  for (Vertex v = 0; v < g.order(); ++v)
    if (g.in_degree(v, s) >= thr) rn.insert(v);
  return rn;
}

namespace {

struct SweepHit {
  bool hit = false;
  std::uint32_t mask = 0;
  int rn = 0;
  long long checked = 0;
};

ExpansionVerdict certify_exact(const Digraph& g, const ExpansionParams& p) {
  const int n = g.order();
  ExpansionVerdict verdict;
  verdict.mode = CheckMode::Exact;
  const int lo = std::max(1, expansion_min_size(n, p.tau));
  const int hi = std::min(n, expansion_max_size(n, p.tau));
  if (n == 0 || lo > hi) {
    verdict.outcome = ExpansionVerdict::Outcome::Expander;
    return verdict;
  }
  const int thr = robust_threshold(n, p.nu);
  std::vector<int> required(n + 1);
  for (int s = 0; s <= n; ++s) required[s] = expansion_required(s, n, p.nu);
  const auto out = small_masks(g, true);

  const int cbits = chunk_bits_for(n, p.workers);
  const int low = n - cbits;
  auto sweep = [&](int chunk) {
    SweepHit h;
    std::uint32_t mask = static_cast<std::uint32_t>(chunk) << low;
    int cnt[32] = {};
    int rn = 0;
    int size = std::popcount(mask);
    for (Vertex u = low; u < n; ++u) {
      if (!((mask >> u) & 1U)) continue;
      for (std::uint32_t w = out[u]; w; w &= w - 1) ++cnt[std::countr_zero(w)];
    }
    for (int v = 0; v < n; ++v) rn += cnt[v] >= thr;
    auto check = [&] {
      if (size < lo || size > hi) return false;
      ++h.checked;
      if (rn < required[size]) {
        h.hit = true;
        h.mask = mask;
        h.rn = rn;
        return true;
      }
      return false;
    };
    if (check()) return h;
    const std::uint64_t steps = std::uint64_t{1} << low;
    for (std::uint64_t i = 1; i < steps; ++i) {
      const int u = std::countr_zero(i);
      const std::uint32_t bit = 1U << u;
      if (mask & bit) {
        mask &= ~bit;
        --size;
        for (std::uint32_t w = out[u]; w; w &= w - 1)
          if (cnt[std::countr_zero(w)]-- == thr) --rn;
      } else {
        mask |= bit;
        ++size;
        for (std::uint32_t w = out[u]; w; w &= w - 1)
          if (++cnt[std::countr_zero(w)] == thr) ++rn;
      }
      if (check()) return h;
    }
    return h;
  };
  auto hits = run_chunks<SweepHit>(1 << cbits, p.workers, sweep);
  for (const auto& h : hits) {
    verdict.checked_sets += h.checked;
    if (h.hit && verdict.outcome != ExpansionVerdict::Outcome::Violator) {
      verdict.outcome = ExpansionVerdict::Outcome::Violator;
      verdict.set = from_mask(n, h.mask);
      verdict.rn_size = h.rn;
    }
  }
  if (verdict.outcome != ExpansionVerdict::Outcome::Violator) verdict.outcome = ExpansionVerdict::Outcome::Expander;
  return verdict;
}

std::vector<Vertex> sorted_by(const Digraph& g, bool by_out, bool ascending) {
  std::vector<Vertex> order(g.order());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    const int da = by_out ? g.out_degree(a) : g.in_degree(a);
    const int db = by_out ? g.out_degree(b) : g.in_degree(b);
    return ascending ? da < db : da > db;
  });
  return order;
}

std::vector<VertexSet> prefix_sets(int n, const std::vector<Vertex>& order, int lo, int hi) {
  std::vector<VertexSet> out;
  if (lo > hi) return out;
  const int step = std::max(1, (hi - lo + 1) / 64);
  VertexSet acc(n);
  int taken = 0;
  for (int size = lo; size <= hi; size += step) {
    while (taken < size) acc.insert(order[taken++]);
    out.push_back(acc);
  }
  return out;
}

ExpansionVerdict certify_sampled(const Digraph& g, const ExpansionParams& p) {
  const int n = g.order();
  ExpansionVerdict verdict;
  verdict.mode = CheckMode::Sampled;
  verdict.outcome = ExpansionVerdict::Outcome::Inconclusive;
  const int lo = std::max(1, expansion_min_size(n, p.tau));
  const int hi = std::min(n, expansion_max_size(n, p.tau));
  if (n == 0 || lo > hi) {
    verdict.outcome = ExpansionVerdict::Outcome::Expander;
    return verdict;
  }
  auto test = [&](const VertexSet& s) {
    const int size = s.size();
    if (size < lo || size > hi) return false;
    ++verdict.checked_sets;
    const VertexSet rn = robust_out_neighborhood(g, s, p.nu);
    const int r = rn.size();
    if (r < expansion_required(size, n, p.nu)) {
      verdict.outcome = ExpansionVerdict::Outcome::Violator;
      verdict.set = s;
      verdict.rn_size = r;
      return true;
    }
    return false;
  };

  for (const auto& h : p.hints)
    if (test(h)) return verdict;

  const auto comps = strongly_connected_components(g);
  VertexSet acc(n);
  for (std::size_t i = 0; i + 1 < comps.size(); ++i) {
    acc |= comps[i];
    if (test(acc) || test(acc.complement())) return verdict;
  }
  for (bool by_out : {true, false}) {
    for (bool asc : {true, false}) {
      for (const auto& s : prefix_sets(n, sorted_by(g, by_out, asc), lo, hi))
        if (test(s)) return verdict;
    }
  }

  std::mt19937_64 rng(p.seed);
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const int span = hi - lo + 1;
  for (int decile = 0; decile < 10; ++decile) {
    const int a = lo + span * decile / 10;
    const int b = std::max(a, lo + span * (decile + 1) / 10 - 1);
    std::uniform_int_distribution<int> pick(a, std::min(b, hi));
    for (int trial = 0; trial < p.samples_per_decile; ++trial) {
      const int size = pick(rng);
      for (int i = 0; i < size; ++i) {
        std::uniform_int_distribution<int> j(i, n - 1);
        std::swap(perm[i], perm[j(rng)]);
      }
      VertexSet s(n);
      for (int i = 0; i < size; ++i) s.insert(perm[i]);
      if (test(s)) return verdict;
    }
  }
  return verdict;
}

}  // namespace

ExpansionVerdict certify_expander(const Digraph& g, const ExpansionParams& p) {
  if (!(p.nu > 0 && p.nu <= p.tau && p.tau < 0.5))
    throw PreconditionError("expansion parameters must satisfy 0 < nu <= tau < 1/2");
  if (p.mode == CheckMode::Exact) {
    if (g.order() > kExactSweepCap)
      throw CapabilityError("exact expander certification supports n <= " + std::to_string(kExactSweepCap) +
                            " (got " + std::to_string(g.order()) + "); use sampled mode");
    return certify_exact(g, p);
  }
  return certify_sampled(g, p);
}

CutCertificate make_cut(const Digraph& g, const VertexSet& x1) {
  CutCertificate c;
  c.first = x1;
  c.second = x1.complement();
  c.forward_edges = cross_counts(g, c.first, c.second).forward;
  const double denom = static_cast<double>(c.first.size()) * c.second.size();
  c.alpha_achieved = denom > 0 ? c.forward_edges / denom : 0.0;
  return c;
}

namespace {

struct CutHit {
  bool any = false;
  std::uint32_t mask = 0;
  long long e = 0;
  double ratio = 0.0;
};

CutSearch sparse_cut_exact(const Digraph& g, double alpha, int workers) {
  const int n = g.order();
  CutSearch result;
  result.exhaustive = true;
  if (n < 2) return result;
  const std::uint32_t full = n == 32 ? ~0U : ((1U << n) - 1);
  const auto out = small_masks(g, true);
  const auto in = small_masks(g, false);
  const int cbits = chunk_bits_for(n, workers);
  const int low = n - cbits;
  auto sweep = [&](int chunk) {
    CutHit best;
    std::uint32_t mask = static_cast<std::uint32_t>(chunk) << low;
    long long e = 0;
    for (int u = 0; u < n; ++u)
      if ((mask >> u) & 1U) e += std::popcount(out[u] & ~mask & full);
    int size = std::popcount(mask);
    auto consider = [&] {
      if (size == 0 || size == n) return;
      const double r = static_cast<double>(e) / (static_cast<double>(size) * (n - size));
      if (!best.any || r < best.ratio) best = {true, mask, e, r};
    };
    consider();
    const std::uint64_t steps = std::uint64_t{1} << low;
    for (std::uint64_t i = 1; i < steps; ++i) {
      const int u = std::countr_zero(i);
      const std::uint32_t bit = 1U << u;
      if (mask & bit) {
        mask &= ~bit;
        --size;
        e -= std::popcount(out[u] & ~mask & full);
        e += std::popcount(in[u] & mask);
      } else {
        e -= std::popcount(in[u] & mask);
        mask |= bit;
        ++size;
        e += std::popcount(out[u] & ~mask & full);
      }
      consider();
    }
    return best;
  };
  auto hits = run_chunks<CutHit>(1 << cbits, workers, sweep);
  CutHit best;
  for (const auto& h : hits)
    if (h.any && (!best.any || h.ratio < best.ratio)) best = h;
  if (best.any) {
    result.best = make_cut(g, from_mask(n, best.mask));
    result.found = result.best->alpha_achieved <= alpha + kEps;
  }
  return result;
}

// Best-improvement single-vertex moves on e⁺(X₁,X₂)/(|X₁||X₂|).
VertexSet hill_climb(const Digraph& g, VertexSet x1) {
  const int n = g.order();
  std::vector<char> side(n, 0);  // 1 = in X₁
  x1.for_each([&](Vertex v) { side[v] = 1; });
  std::vector<int> to_second(n, 0), from_first(n, 0);
  long long e = 0;
  int s1 = x1.size();
  const VertexSet x2 = x1.complement();
  for (Vertex v = 0; v < n; ++v) {
    to_second[v] = g.out_degree(v, x2);
    from_first[v] = g.in_degree(v, x1);
    if (side[v]) e += to_second[v];
  }
  auto ratio = [&](long long edges, int a) {
    return static_cast<double>(edges) / (static_cast<double>(a) * (n - a));
  };
  for (int iter = 0; iter < 4 * n; ++iter) {
    double current = ratio(e, s1);
    int best_v = -1;
    double best_r = current - 1e-12;
    long long best_e = e;
    for (Vertex v = 0; v < n; ++v) {
      if (side[v]) {
        if (s1 == 1) continue;
        const long long ne = e - to_second[v] + from_first[v];
        const double r = ratio(ne, s1 - 1);
        if (r < best_r) best_r = r, best_v = v, best_e = ne;
      } else {
        if (s1 == n - 1) continue;
        const long long ne = e - from_first[v] + to_second[v];
        const double r = ratio(ne, s1 + 1);
        if (r < best_r) best_r = r, best_v = v, best_e = ne;
      }
    }
    if (best_v < 0) break;
    const Vertex v = best_v;
    const int delta = side[v] ? -1 : 1;  // -1: X₁ → X₂
    if (side[v]) {
      g.in(v).for_each([&](Vertex w) { ++to_second[w]; });
      g.out(v).for_each([&](Vertex w) { --from_first[w]; });
    } else {
      g.in(v).for_each([&](Vertex w) { --to_second[w]; });
      g.out(v).for_each([&](Vertex w) { ++from_first[w]; });
    }
    side[v] = !side[v];
    s1 += delta;
    e = best_e;
  }
  VertexSet out(n);
  for (Vertex v = 0; v < n; ++v)
    if (side[v]) out.insert(v);
  return out;
}

CutSearch sparse_cut_heuristic(const Digraph& g, double alpha, const CutBudget& budget) {
  const int n = g.order();
  CutSearch result;
  if (n < 2) return result;
  std::vector<VertexSet> starts = budget.hints;
  const auto comps = strongly_connected_components(g);
  VertexSet acc(n);
  for (std::size_t i = 0; i + 1 < comps.size(); ++i) {
    acc |= comps[i];
    starts.push_back(acc);
    starts.push_back(acc.complement());
  }
  const int step = std::max(1, n / 24);
  for (bool by_out : {true, false}) {
    std::vector<Vertex> order = sorted_by(g, by_out, by_out);
    for (int size = step; size < n; size += step) {
      VertexSet s(n);
      for (int i = 0; i < size; ++i) s.insert(order[i]);
      starts.push_back(s);
    }
  }
  std::mt19937_64 rng(budget.seed);
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int r = 0; r < budget.restarts; ++r) {
    std::shuffle(perm.begin(), perm.end(), rng);
    VertexSet s(n);
    for (int i = 0; i < n / 2; ++i) s.insert(perm[i]);
    starts.push_back(s);
  }
  for (const auto& s0 : starts) {
    const int sz = s0.size();
    if (sz == 0 || sz == n) continue;
    const CutCertificate c = make_cut(g, hill_climb(g, s0));
    if (!result.best || c.alpha_achieved < result.best->alpha_achieved - 1e-15) result.best = c;
  }
  result.found = result.best && result.best->alpha_achieved <= alpha + kEps;
  return result;
}

}  // namespace

CutSearch find_sparse_cut(const Digraph& g, double alpha, const CutBudget& budget) {
  if (!(alpha > 0 && alpha < 1)) throw PreconditionError("find_sparse_cut: alpha must lie in (0,1)");
  if (g.order() <= budget.exact_cap && g.order() <= kExactSweepCap) return sparse_cut_exact(g, alpha, 1);
  return sparse_cut_heuristic(g, alpha, budget);
}

Dichotomy sparse_cut_or_expander(const Digraph& g, double alpha, double nu, double tau, const CutBudget& budget) {
  Dichotomy d;
  d.nu = nu;
  d.exact = g.order() <= budget.exact_cap && g.order() <= kExactSweepCap;
  d.cut = find_sparse_cut(g, alpha, budget);
  if (d.cut.found) {
    d.kind = Dichotomy::Kind::SparseCut;
    return d;
  }
  ExpansionParams p;
  p.nu = nu;
  p.tau = tau;
  p.mode = d.exact ? CheckMode::Exact : CheckMode::Sampled;
  p.seed = budget.seed;
  d.verdict = certify_expander(g, p);
  switch (d.verdict->outcome) {
    case ExpansionVerdict::Outcome::Expander:
      d.kind = Dichotomy::Kind::Expander;
      break;
    case ExpansionVerdict::Outcome::Violator:
      d.kind = Dichotomy::Kind::Neither;
      break;
    case ExpansionVerdict::Outcome::Inconclusive:
      d.kind = Dichotomy::Kind::Inconclusive;
      break;
  }
  return d;
}

Dichotomy sparse_or_expander(const Digraph& g, double eta, double alpha, double tau, const CutBudget& budget) {
  const int n = g.order();
  if (!(tau > 0 && tau < 0.5)) throw PreconditionError("sparse_or_expander: tau must lie in (0,1/2)");
  if (min_degree(g) < (1.0 + eta) * n - kEps)
    throw PreconditionError("sparse_or_expander: δ(G)=" + std::to_string(min_degree(g)) + " < (1+η)n");
  const double nu = alpha * tau * eta / 4.0;
  return sparse_cut_or_expander(g, alpha, nu, tau, budget);
}

}  // namespace ohc
