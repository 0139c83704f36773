#include "orienthc/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "orienthc/errors.hpp"

namespace ohc {

namespace {

std::vector<bool> parse_signs(std::string_view text) {
  std::vector<bool> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '+') {
      out.push_back(true);
    } else if (ch == '-') {
      out.push_back(false);
    } else if (text.substr(i, 3) == "\xE2\x88\x92") {
      out.push_back(false);  // U+2212
      i += 2;
    } else if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
      continue;
    } else {
      throw InputError("pattern: unexpected character '" + std::string(1, ch) + "'");
    }
  }
  return out;
}

std::string signs_to_string(const std::vector<bool>& v) {
  std::string s;
  s.reserve(v.size());
  for (bool f : v) s.push_back(f ? '+' : '-');
  return s;
}

}  // namespace

CyclePattern::CyclePattern(std::vector<bool> forward) : forward_(std::move(forward)) {
  if (forward_.size() < 3)
    throw InputError("cycle pattern needs at least 3 positions, got " + std::to_string(forward_.size()));
}

CyclePattern CyclePattern::directed(int n) { return CyclePattern(std::vector<bool>(std::max(n, 0), true)); }

CyclePattern CyclePattern::antidirected(int n) {
  if (n % 2 != 0) throw InputError("antidirected cycle needs even length, got " + std::to_string(n));
  std::vector<bool> v(n);
  for (int i = 0; i < n; ++i) v[i] = i % 2 == 0;
  return CyclePattern(std::move(v));
}

CyclePattern CyclePattern::parse(std::string_view text, std::optional<int> n) {
  if (text == "directed" || text == "antidirected") {
    if (!n) throw InputError("pattern alias '" + std::string(text) + "' needs a length");
    return text == "directed" ? directed(*n) : antidirected(*n);
  }
  CyclePattern c(parse_signs(text));
  if (n && c.size() != *n)
    throw InputError("pattern length " + std::to_string(c.size()) + " does not match n=" + std::to_string(*n));
  return c;
}

bool CyclePattern::is_directed() const {
  return std::all_of(forward_.begin(), forward_.end(), [&](bool f) { return f == forward_[0]; });
}

CyclePattern CyclePattern::rotated(int start) const {
  const int n = size();
  std::vector<bool> v(n);
  for (int i = 0; i < n; ++i) v[i] = forward(start + i);
  return CyclePattern(std::move(v));
}

CyclePattern CyclePattern::reflected() const {
  const int n = size();
  std::vector<bool> v(n);
  for (int i = 0; i < n; ++i) v[i] = !forward(n - 1 - i);
  return CyclePattern(std::move(v));
}

CyclePattern CyclePattern::converse() const {
  std::vector<bool> v(forward_);
  v.flip();
  return CyclePattern(std::move(v));
}

std::string CyclePattern::to_string() const { return signs_to_string(forward_); }

PathPattern PathPattern::directed(int length) { return PathPattern(std::vector<bool>(std::max(length - 1, 0), true)); }

PathPattern PathPattern::antidirected(int length) {
  std::vector<bool> v(std::max(length - 1, 0));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i % 2 == 0;
  return PathPattern(std::move(v));
}

PathPattern PathPattern::parse(std::string_view text) { return PathPattern(parse_signs(text)); }

PathPattern PathPattern::reversed() const {
  std::vector<bool> v(forward_.rbegin(), forward_.rend());
  v.flip();
  return PathPattern(std::move(v));
}

std::string PathPattern::to_string() const { return signs_to_string(forward_); }

PathPattern segment(const CyclePattern& c, int start, int count) {
  std::vector<bool> v(std::max(count - 1, 0));
  for (int i = 0; i + 1 < count; ++i) v[i] = c.forward(start + i);
  return PathPattern(std::move(v));
}

std::vector<int> switches(const CyclePattern& c) {
  std::vector<int> out;
  for (int i = 0; i < c.size(); ++i)
    if (c.is_switch(i)) out.push_back(i);
  return out;
}

DirectedRun longest_directed_segment(const CyclePattern& c) {
  const int n = c.size();
  if (c.is_directed()) return {0, n, c.forward(0)};
  DirectedRun best;
  for (int p = 0; p < n; ++p) {
    if (c.forward(p - 1) == c.forward(p)) continue;  // not the start of a maximal run
    int len = 1;
    while (c.forward(p + len) == c.forward(p)) ++len;
    if (len + 1 > best.vertex_count) best = {p, len + 1, c.forward(p)};
  }
  return best;
}

int floor_fraction(double beta, int n) { return static_cast<int>(std::floor(beta * n + 1e-9)); }

bool every_window_has_switch(const CyclePattern& c, int window) {
  const int n = c.size();
  if (window > n) window = n;
  for (int s = 0; s < n; ++s) {
    bool has = false;
    for (int k = 1; k + 1 < window && !has; ++k) has = c.is_switch(s + k);
    if (!has) return false;
  }
  return true;
}

CaseSplit classify_case(const CyclePattern& c, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw PreconditionError("classify_case: beta must lie in (0,1]");
  CaseSplit out;
  out.run = longest_directed_segment(c);
  out.window = floor_fraction(beta, c.size());
  out.case1 = out.run.vertex_count >= out.window;
  return out;
}

SegmentPlan partition_case2(const CyclePattern& c, const std::vector<int>& class_sizes, double beta) {
  const int n = c.size();
  const int t = static_cast<int>(class_sizes.size());
  if (t == 0) throw PreconditionError("partition_case2: no classes");
  if (std::accumulate(class_sizes.begin(), class_sizes.end(), 0) != n)
    throw PreconditionError("partition_case2: class sizes do not sum to n");
  SegmentPlan plan;
  if (t == 1) {
    plan.segments.push_back({0, n, 0});
    return plan;
  }
  if (classify_case(c, beta).case1) throw PreconditionError("partition_case2: pattern is in Case 1 for this beta");
  for (int m : class_sizes)
    if (m + 1e-9 < 3.0 * beta * n) throw PreconditionError("partition_case2: class size " + std::to_string(m) + " < 3βn");
  if (!c.is_source(0)) throw PreconditionError("partition_case2: position 0 must be a source");

  int done = 0;    // vertices already assigned (n_{s-1})
  int target = 0;  // m_1 + … + m_s
  for (int s = 0; s + 1 < t; ++s) {
    target += class_sizes[s];
    int last = std::max(target, done + 1) - 1;  // 0-based index of x_{n_s}
    while (last < n - 1 && !c.forward(last)) ++last;
    if (last >= n - 1) throw PreconditionError("partition_case2: no forward edge after cumulative target");
    const int ns = last + 1;
    plan.segments.push_back({done, ns - done, s});
    plan.overshoot.push_back(ns - target);
    if (ns - target > beta * n + 1e-9) throw PreconditionError("partition_case2: overshoot exceeds βn");
    done = ns;
  }
  plan.segments.push_back({done, n - done, t - 1});
  return plan;
}

std::vector<RunBlock> directed_run_decomposition_case1b(const CyclePattern& c, int ell, int block_size) {
  const int n = c.size();
  if (ell >= n) throw PreconditionError("case 1b decomposition: no non-directed part (ℓ = n)");
  if (ell < 1) throw PreconditionError("case 1b decomposition: ℓ must be positive");
  if (block_size < 2) throw PreconditionError("case 1b decomposition: block size must be at least 2");
  const int rest = n - ell;
  const int q = (rest + block_size - 1) / block_size;
  std::vector<RunBlock> blocks;
  int pos = 1;
  for (int i = 0; i < q; ++i) {
    const int size = rest / q + (i < rest % q ? 1 : 0);
    blocks.push_back({pos, size, false});
    pos += size;
  }
  for (auto& b : blocks) b.next_forward = c.forward(b.start + b.size - 1);
  return blocks;
}

CyclePattern canonical_rotation(const CyclePattern& c) {
  const int n = c.size();
  int best = 0;
  for (int s = 1; s < n; ++s) {
    for (int i = 0; i < n; ++i) {
      const bool a = c.forward(s + i), b = c.forward(best + i);
      if (a == b) continue;
      if (a && !b) best = s;  // '+' sorts first
      break;
    }
  }
  return c.rotated(best);
}

std::vector<CyclePattern> cycle_patterns_up_to_rotation(int n, bool include_directed) {
  if (n < 3 || n > 24) throw PreconditionError("cycle pattern enumeration supports 3 <= n <= 24");
  std::vector<CyclePattern> out;
  const std::uint32_t full = (1U << n) - 1;
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    // Bit i is edge i. Keep masks that are their own canonical rotation.
    bool is_min = true;
    for (int s = 1; s < n && is_min; ++s) {
      const std::uint32_t rot = ((mask >> s) | (mask << (n - s))) & full;
      for (int i = 0; i < n; ++i) {
        const bool a = (rot >> i) & 1U, b = (mask >> i) & 1U;
        if (a == b) continue;
        if (a && !b) is_min = false;
        break;
      }
    }
    if (!is_min) continue;
    if (!include_directed && (mask == 0 || mask == full)) continue;
    std::vector<bool> v(n);
    for (int i = 0; i < n; ++i) v[i] = (mask >> i) & 1U;
    out.emplace_back(std::move(v));
    if (mask == full) break;
  }
  return out;
}

std::vector<PathPattern> all_path_patterns(int length) {
  if (length < 1 || length > 25) throw PreconditionError("path pattern enumeration supports 1 <= length <= 25");
  const int e = length - 1;
  std::vector<PathPattern> out;
  for (std::uint32_t mask = 0; mask < (1U << e); ++mask) {
    std::vector<bool> v(e);
    for (int i = 0; i < e; ++i) v[i] = (mask >> i) & 1U;
    out.emplace_back(std::move(v));
  }
  return out;
}

}  // namespace ohc
