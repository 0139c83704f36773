#include "orienthc/search.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <random>
#include <thread>

#include "orienthc/errors.hpp"

namespace ohc {

SearchProblem SearchProblem::over(int positions, const VertexSet& allowed) {
  SearchProblem p;
  p.positions = positions;
  p.domains.assign(positions, allowed);
  return p;
}

void SearchProblem::pin(int position, Vertex v) {
  VertexSet s(domains.at(position).universe());
  s.insert(v);
  domains[position] = s;
}

const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found:
      return "found";
    case SearchStatus::None:
      return "none";
    case SearchStatus::Timeout:
      return "timeout";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

// Domains above this size are not used as propagation sources.
constexpr int kPropagationLimit = 64;

template <int W>
struct Bits {
  std::array<std::uint64_t, W> w{};

  bool test(int v) const { return (w[v >> 6] >> (v & 63)) & 1U; }
  void set(int v) { w[v >> 6] |= std::uint64_t{1} << (v & 63); }
  void reset(int v) { w[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
  int count() const {
    int c = 0;
    for (auto x : w) c += std::popcount(x);
    return c;
  }
  bool none() const {
    for (auto x : w)
      if (x) return false;
    return true;
  }
  int first() const {
    for (int i = 0; i < W; ++i)
      if (w[i]) return i * 64 + std::countr_zero(w[i]);
    return -1;
  }
  Bits& operator&=(const Bits& o) {
    for (int i = 0; i < W; ++i) w[i] &= o.w[i];
    return *this;
  }
  Bits& operator|=(const Bits& o) {
    for (int i = 0; i < W; ++i) w[i] |= o.w[i];
    return *this;
  }
  Bits and_not(const Bits& o) const {
    Bits r;
    for (int i = 0; i < W; ++i) r.w[i] = w[i] & ~o.w[i];
    return r;
  }
  bool operator==(const Bits& o) const { return w == o.w; }
  template <class F>
  void for_each(F&& f) const {
    for (int i = 0; i < W; ++i)
      for (std::uint64_t x = w[i]; x; x &= x - 1) f(i * 64 + std::countr_zero(x));
  }
  static Bits from(const VertexSet& s) {
    Bits b;
    for (std::size_t i = 0; i < s.word_count() && i < static_cast<std::size_t>(W); ++i) b.w[i] = s.word(i);
    return b;
  }
};

struct Neighbor {
  int position;
  bool out;  // f(position) must be an out-neighbour of f(self)
};

template <int W>
struct State {
  std::vector<Bits<W>> dom;
  std::vector<int> val;    // position → vertex, -1 when open
  std::vector<int> mpos;   // matching: position → vertex
  std::vector<int> mvert;  // matching: vertex → position
  int open = 0;
};

struct Shared {
  Clock::time_point deadline;
  bool has_deadline = false;
  long long node_limit = -1;
  std::atomic<bool> stop{false};
  std::atomic<bool>* cancel = nullptr;
};

template <int W>
class Engine {
 public:
  Engine(const Digraph& g, const SearchProblem& p, Shared& shared, std::uint64_t value_seed)
      : g_(g), n_(g.order()), L_(p.positions), shared_(shared), value_seed_(value_seed), rng_(value_seed) {
    out_.resize(n_);
    in_.resize(n_);
    for (Vertex v = 0; v < n_; ++v) {
      out_[v] = Bits<W>::from(g.out(v));
      in_[v] = Bits<W>::from(g.in(v));
    }
    adj_.resize(L_);
    for (auto [a, b] : p.arcs) {
      adj_[a].push_back({b, true});
      adj_[b].push_back({a, false});
    }
  }

  // Builds the root state; false when the problem is infeasible outright.
  bool root(const SearchProblem& p, State<W>& s) {
    s.dom.resize(L_);
    s.val.assign(L_, -1);
    s.mpos.assign(L_, -1);
    s.mvert.assign(n_, -1);
    s.open = L_;
    std::vector<int> queue;
    for (int i = 0; i < L_; ++i) {
      s.dom[i] = Bits<W>::from(p.domains[i]);
      if (s.dom[i].none()) return false;
      queue.push_back(i);
    }
    for (int i = 0; i < L_; ++i)
      if (s.val[i] < 0 && s.dom[i].count() == 1 && !assign(s, i, s.dom[i].first(), queue)) return false;
    return propagate(s, queue) && match(s);
  }

  int choose(const State<W>& s) const {
    int best = -1, best_size = 0;
    for (int i = 0; i < L_; ++i) {
      if (s.val[i] >= 0) continue;
      const int c = s.dom[i].count();
      if (best < 0 || c < best_size) best = i, best_size = c;
    }
    return best;
  }

  std::vector<int> values(const State<W>& s, int p) {
    std::vector<int> vs;
    s.dom[p].for_each([&](int v) { vs.push_back(v); });
    if (value_seed_ != 0) std::shuffle(vs.begin(), vs.end(), rng_);
    return vs;
  }

  // Tries value v at position p of s; fills `found` on success.
  bool branch(const State<W>& s, int p, int v, std::vector<int>& found) {
    if (!feasible(s, p, v)) return false;
    State<W> t = s;
    std::vector<int> queue;
    if (!assign(t, p, v, queue) || !propagate(t, queue) || !match(t)) return false;
    return dfs(t, found);
  }

  bool dfs(State<W>& s, std::vector<int>& found) {
    if (tick()) return false;
    if (s.open == 0) {
      found = s.val;
      return true;
    }
    const int p = choose(s);
    for (int v : values(s, p)) {
      if (branch(s, p, v, found)) return true;
      if (shared_.stop.load(std::memory_order_relaxed)) return false;
    }
    return false;
  }

  long long nodes() const { return nodes_; }
  bool timed_out() const { return timed_out_; }

 private:
  // Returns true when the search has to stop.
  bool tick() {
    ++nodes_;
    if ((nodes_ & 1023) == 0) {
      if (shared_.cancel && shared_.cancel->load(std::memory_order_relaxed)) shared_.stop = true;
      if (shared_.has_deadline && Clock::now() > shared_.deadline) {
        timed_out_ = true;
        shared_.stop = true;
      }
    }
    if (shared_.node_limit >= 0 && nodes_ > shared_.node_limit) {
      timed_out_ = true;
      shared_.stop = true;
    }
    return shared_.stop.load(std::memory_order_relaxed);
  }

  // Cheap degree filter: every open pattern neighbour keeps a candidate.
  bool feasible(const State<W>& s, int p, int v) const {
    int need_out = 0, need_in = 0;
    Bits<W> cand_out, cand_in;
    for (const auto& nb : adj_[p]) {
      if (s.val[nb.position] >= 0) continue;
      Bits<W> c = s.dom[nb.position];
      c &= nb.out ? out_[v] : in_[v];
      c.reset(v);
      if (c.none()) return false;
      if (nb.out) {
        ++need_out;
        cand_out |= c;
      } else {
        ++need_in;
        cand_in |= c;
      }
    }
    return cand_out.count() >= need_out && cand_in.count() >= need_in;
  }

  bool assign(State<W>& s, int p, int v, std::vector<int>& queue) {
    if (s.val[p] >= 0) return s.val[p] == v;
    if (!s.dom[p].test(v)) return false;
    s.val[p] = v;
    --s.open;
    s.dom[p] = Bits<W>{};
    s.dom[p].set(v);
    queue.push_back(p);
    for (int q = 0; q < L_; ++q) {
      if (q == p || s.val[q] >= 0 || !s.dom[q].test(v)) continue;
      s.dom[q].reset(v);
      const int c = s.dom[q].count();
      if (c == 0) return false;
      if (c <= kPropagationLimit) queue.push_back(q);
    }
    // Keep the matching consistent with the assignment.
    if (s.mpos[p] >= 0 && s.mpos[p] != v) s.mvert[s.mpos[p]] = -1;
    if (s.mvert[v] >= 0 && s.mvert[v] != p) s.mpos[s.mvert[v]] = -1;
    s.mpos[p] = v;
    s.mvert[v] = p;
    return true;
  }

  bool propagate(State<W>& s, std::vector<int>& queue) {
    while (!queue.empty()) {
      const int p = queue.back();
      queue.pop_back();
      if (s.dom[p].count() > kPropagationLimit) continue;
      for (const auto& nb : adj_[p]) {
        const int q = nb.position;
        if (s.val[q] >= 0) {
          // Both placed: the arc must exist.
          if (s.val[p] >= 0 && !(nb.out ? out_[s.val[p]] : in_[s.val[p]]).test(s.val[q])) return false;
          continue;
        }
        Bits<W> support;
        s.dom[p].for_each([&](int v) { support |= nb.out ? out_[v] : in_[v]; });
        Bits<W> nd = s.dom[q];
        nd &= support;
        if (nd == s.dom[q]) continue;
        s.dom[q] = nd;
        const int c = nd.count();
        if (c == 0) return false;
        if (c == 1) {
          if (!assign(s, q, nd.first(), queue)) return false;
        } else {
          queue.push_back(q);
        }
      }
    }
    return true;
  }

  bool augment(State<W>& s, int p, Bits<W>& visited) {
    Bits<W> cand = s.dom[p].and_not(visited);
    bool ok = false;
    cand.for_each([&](int v) {
      if (ok || visited.test(v)) return;
      visited.set(v);
      const int q = s.mvert[v];
      if (q < 0 || (s.val[q] < 0 && augment(s, q, visited))) {
        s.mpos[p] = v;
        s.mvert[v] = p;
        ok = true;
      }
    });
    return ok;
  }

  // All open positions can receive distinct vertices simultaneously.
  bool match(State<W>& s) {
    for (int p = 0; p < L_; ++p) {
      if (s.val[p] >= 0) continue;
      const int v = s.mpos[p];
      if (v >= 0 && (!s.dom[p].test(v) || s.mvert[v] != p)) {
        if (s.mvert[v] == p) s.mvert[v] = -1;
        s.mpos[p] = -1;
      }
    }
    for (int p = 0; p < L_; ++p) {
      if (s.val[p] >= 0 || s.mpos[p] >= 0) continue;
      Bits<W> visited;
      if (!augment(s, p, visited)) return false;
    }
    return true;
  }

  const Digraph& g_;
  int n_;
  int L_;
  Shared& shared_;
  std::uint64_t value_seed_;
  std::mt19937_64 rng_;
  std::vector<Bits<W>> out_, in_;
  std::vector<std::vector<Neighbor>> adj_;
  long long nodes_ = 0;
  bool timed_out_ = false;
};

template <int W>
SearchResult solve_w(const Digraph& g, const SearchProblem& p, const SearchOptions& o) {
  Shared shared;
  if (o.seconds > 0) {
    shared.has_deadline = true;
    shared.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(o.seconds));
  }
  shared.node_limit = o.node_limit;
  shared.cancel = o.cancel;

  SearchResult result;
  Engine<W> main(g, p, shared, o.value_seed);
  State<W> root;
  if (!main.root(p, root)) return result;
  if (root.open == 0) {
    result.status = SearchStatus::Found;
    result.assignment = root.val;
    return result;
  }
  const int pos = main.choose(root);
  const std::vector<int> vals = main.values(root, pos);
  const int workers = std::clamp(o.workers, 1, static_cast<int>(vals.size()));

  if (workers == 1) {
    std::vector<int> found;
    for (int v : vals) {
      if (main.branch(root, pos, v, found)) break;
      if (shared.stop) break;
    }
    result.nodes = main.nodes();
    if (!found.empty()) {
      result.status = SearchStatus::Found;
      result.assignment = std::move(found);
    } else if (main.timed_out() || shared.stop) {
      result.status = SearchStatus::Timeout;
    }
    return result;
  }

  std::vector<std::vector<int>> found(workers);
  std::vector<long long> nodes(workers, 0);
  std::vector<char> timed(workers, 0);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      Engine<W> e(g, p, shared, o.value_seed ? o.value_seed + w : 0);
      for (std::size_t i = w; i < vals.size(); i += workers) {
        if (shared.stop) break;
        if (e.branch(root, pos, vals[i], found[w])) {
          shared.stop = true;
          break;
        }
      }
      nodes[w] = e.nodes();
      timed[w] = e.timed_out();
    });
  }
  for (auto& t : pool) t.join();
  for (int w = 0; w < workers; ++w) {
    result.nodes += nodes[w];
    if (!found[w].empty() && result.status != SearchStatus::Found) {
      result.status = SearchStatus::Found;
      result.assignment = found[w];
    }
  }
  if (result.status != SearchStatus::Found) {
    const bool any_timeout = std::any_of(timed.begin(), timed.end(), [](char c) { return c != 0; });
    const bool cancelled = o.cancel && o.cancel->load();
    if (any_timeout || cancelled) result.status = SearchStatus::Timeout;
  }
  return result;
}

}  // namespace

SearchResult solve(const Digraph& g, const SearchProblem& p, const SearchOptions& o) {
  if (static_cast<int>(p.domains.size()) != p.positions)
    throw PreconditionError("search: one domain per position required");
  for (auto [a, b] : p.arcs)
    if (a < 0 || b < 0 || a >= p.positions || b >= p.positions || a == b)
      throw PreconditionError("search: arc endpoints out of range");
  for (const auto& d : p.domains)
    if (d.universe() != g.order()) throw PreconditionError("search: domain universe does not match host");
  SearchResult empty;
  if (p.positions == 0) {
    empty.status = SearchStatus::Found;
    return empty;
  }
  if (p.positions > g.order()) return empty;
  const int n = g.order();
  if (n <= 64) return solve_w<1>(g, p, o);
  if (n <= 128) return solve_w<2>(g, p, o);
  if (n <= 256) return solve_w<4>(g, p, o);
  if (n <= 512) return solve_w<8>(g, p, o);
  if (n <= 1024) return solve_w<16>(g, p, o);
  if (n <= 2048) return solve_w<32>(g, p, o);
  return solve_w<64>(g, p, o);
}

}  // namespace ohc
