#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ballotcraft/domains.hpp"

namespace ballotcraft {

constexpr std::uint64_t kDefaultPathCap = 1'000'000;

// Graph over a vertex set B of alternatives; a_s and a_t are joined when the
// domain contains two preferences that swap them between ranks 1 and 2 and
// agree everywhere below.
class StrongConnGraph {
 public:
  StrongConnGraph(const Domain& d, std::vector<Alt> vertices) : m_(d.m()) {
    if (vertices.empty()) fail(Errc::EmptyVertexSet, "vertex set must be nonempty");
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    for (Alt a : vertices)
      if (a < 1 || a > m_) fail(Errc::MalformedInput, "vertex out of range");
    verts_ = std::move(vertices);
    in_.assign(m_ + 1, false);
    for (Alt a : verts_) in_[a] = true;
    adj_.assign((m_ + 1) * (m_ + 1), false);
    for (const Preference& p : d.prefs()) {
      const Alt a = p.ranked(1), b = p.ranked(2);
      if (!in_[a] || !in_[b]) continue;
      std::vector<Alt> o = p.order();
      std::swap(o[0], o[1]);
      if (d.contains(Preference(o))) {
        adj_[a * (m_ + 1) + b] = true;
        adj_[b * (m_ + 1) + a] = true;
      }
    }
  }

  int m() const { return m_; }
  const std::vector<Alt>& vertices() const { return verts_; }
  bool has_vertex(Alt a) const { return a >= 1 && a <= m_ && in_[a]; }
  bool has_edge(Alt a, Alt b) const { return has_vertex(a) && has_vertex(b) && adj_[a * (m_ + 1) + b]; }

  std::vector<Alt> neighbors(Alt a) const {
    std::vector<Alt> out;
    for (Alt b : verts_)
      if (b != a && adj_[a * (m_ + 1) + b]) out.push_back(b);
    return out;
  }

  // each edge once, with the smaller endpoint first
  std::vector<std::pair<Alt, Alt>> edges() const {
    std::vector<std::pair<Alt, Alt>> out;
    for (Alt a : verts_)
      for (Alt b : verts_)
        if (a < b && adj_[a * (m_ + 1) + b]) out.emplace_back(a, b);
    return out;
  }

  int degree(Alt a) const { return static_cast<int>(neighbors(a).size()); }

 private:
  int m_;
  std::vector<Alt> verts_;
  std::vector<char> in_;
  std::vector<char> adj_;
};

inline StrongConnGraph strong_conn_graph(const Domain& d, std::vector<Alt> vertices) {
  return StrongConnGraph(d, std::move(vertices));
}

inline StrongConnGraph strong_conn_graph(const Domain& d) {
  std::vector<Alt> all(d.m());
  std::iota(all.begin(), all.end(), 1);
  return StrongConnGraph(d, std::move(all));
}

using VertexPath = std::vector<Alt>;

// All simple paths from a to b, found by DFS; a == b yields the null path {a}.
// Fails loudly instead of hanging once `cap` paths have been collected.
inline std::vector<VertexPath> all_vertex_paths(const StrongConnGraph& g, Alt a, Alt b,
                                                std::uint64_t cap = kDefaultPathCap) {
  if (!g.has_vertex(a) || !g.has_vertex(b)) fail(Errc::MalformedInput, "path endpoint not in graph");
  std::vector<VertexPath> out;
  if (a == b) {
    out.push_back({a});
    return out;
  }
  std::vector<char> used(g.m() + 1, false);
  VertexPath cur;
  auto dfs = [&](auto&& self, Alt v) -> void {
    used[v] = true;
    cur.push_back(v);
    if (v == b) {
      if (out.size() >= cap) fail(Errc::EnumerationOverflow, "vertex-path cap exceeded");
      out.push_back(cur);
    } else {
      for (Alt w : g.neighbors(v))
        if (!used[w]) self(self, w);
    }
    cur.pop_back();
    used[v] = false;
  };
  dfs(dfs, a);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// hybrid* verification

struct HybridStarReport {
  bool ok = false;
  int k_lo = 0, k_hi = 0;
  bool subset_ok = false;             // every member is (k_lo,k_hi)-hybrid
  std::optional<Preference> offender; // first member that is not
  bool coverage_ok = false;           // every interior a_k on some a_1..a_m path
  std::vector<Alt> uncovered;
  bool no_leaf_ok = false;            // middle subgraph has no leaf (when gap > 1)
  std::vector<Alt> leaves;
};

inline HybridStarReport is_hybrid_star(const Domain& d, int k_lo, int k_hi,
                                       std::uint64_t path_cap = kDefaultPathCap) {
  const int m = d.m();
  if (k_lo < 1 || k_hi > m || k_lo >= k_hi)
    fail(Errc::InvalidThresholds, "need 1 <= k_lo < k_hi <= m");
  HybridStarReport r;
  r.k_lo = k_lo;
  r.k_hi = k_hi;

  r.subset_ok = true;
  for (const Preference& p : d.prefs())
    if (!is_hybrid(p, k_lo, k_hi)) {
      r.subset_ok = false;
      r.offender = p;
      break;
    }

  StrongConnGraph g = strong_conn_graph(d);
  std::vector<char> covered(m + 1, false);
  for (const VertexPath& path : all_vertex_paths(g, 1, m, path_cap))
    for (Alt v : path) covered[v] = true;
  r.coverage_ok = true;
  for (Alt a = 2; a < m; ++a)
    if (!covered[a]) {
      r.coverage_ok = false;
      r.uncovered.push_back(a);
    }

  r.no_leaf_ok = true;
  if (k_hi - k_lo > 1) {
    std::vector<Alt> middle;
    for (Alt a = k_lo; a <= k_hi; ++a) middle.push_back(a);
    StrongConnGraph gm = strong_conn_graph(d, middle);
    for (Alt a : middle)
      if (gm.degree(a) == 1) {
        r.no_leaf_ok = false;
        r.leaves.push_back(a);
      }
  }

  r.ok = r.subset_ok && r.coverage_ok && r.no_leaf_ok;
  return r;
}

// ---------------------------------------------------------------------------
// Threshold recovery

struct ThresholdReport {
  enum class Kind { SinglePeaked, Hybrid, NotHybridStar };
  Kind kind = Kind::NotHybridStar;
  int m = 0;
  int k_lo = 0, k_hi = 0;        // set when kind == Hybrid
  std::uint64_t path_count = 0;  // |Pi(a_1, a_m)| after any relabeling
  bool continuations_ok = true;  // two distinct continuations past each threshold
  std::optional<std::vector<Alt>> relabeling;  // applied map a -> perm[a-1], when used
  std::optional<HybridStarReport> star;

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::SinglePeaked: return "SinglePeaked";
      case Kind::Hybrid: return "Hybrid";
      case Kind::NotHybridStar: return "NotHybridStar";
    }
    return "?";
  }
};

namespace detail {

// Longest common prefix/suffix across the enumerated a_1..a_m vertex-paths.
inline std::pair<std::vector<Alt>, std::vector<Alt>> common_ends(
    const std::vector<VertexPath>& paths) {
  std::vector<Alt> prefix = paths.front();
  std::vector<Alt> suffix = paths.front();
  for (const VertexPath& p : paths) {
    std::size_t k = 0;
    while (k < prefix.size() && k < p.size() && prefix[k] == p[k]) ++k;
    prefix.resize(k);
    std::size_t s = 0;
    while (s < suffix.size() && s < p.size() && suffix[suffix.size() - 1 - s] == p[p.size() - 1 - s])
      ++s;
    suffix.erase(suffix.begin(), suffix.end() - s);
  }
  return {prefix, suffix};
}

inline ThresholdReport recover_on_natural_labels(const Domain& d, std::uint64_t path_cap) {
  const int m = d.m();
  ThresholdReport rep;
  rep.m = m;
  StrongConnGraph g = strong_conn_graph(d);
  std::vector<VertexPath> paths = all_vertex_paths(g, 1, m, path_cap);
  if (paths.empty()) fail(Errc::InternalInconsistency, "no a_1..a_m vertex-path in a regular domain");
  rep.path_count = paths.size();

  if (paths.size() == 1) {
    rep.kind = ThresholdReport::Kind::SinglePeaked;
    return rep;
  }

  auto [prefix, suffix] = common_ends(paths);
  if (prefix.empty() || suffix.empty())
    fail(Errc::InternalInconsistency, "vertex-paths share no common endpoint segment");
  const Alt klo = prefix.back();
  const Alt khi = suffix.front();

  // The common left part must be the line a_1..a_klo and the common right part
  // the line a_khi..a_m, in index order.
  bool ends_are_lines = static_cast<int>(prefix.size()) == klo &&
                        static_cast<int>(suffix.size()) == m - khi + 1;
  for (int i = 0; ends_are_lines && i < static_cast<int>(prefix.size()); ++i)
    if (prefix[i] != i + 1) ends_are_lines = false;
  for (int i = 0; ends_are_lines && i < static_cast<int>(suffix.size()); ++i)
    if (suffix[i] != khi + i) ends_are_lines = false;

  // Two distinct continuations immediately past each threshold, one per side.
  std::vector<char> succ(m + 1, false), pred(m + 1, false);
  int succ_count = 0, pred_count = 0;
  for (const VertexPath& p : paths) {
    Alt after = p[prefix.size()];
    if (!succ[after]) {
      succ[after] = true;
      ++succ_count;
    }
    Alt before = p[p.size() - suffix.size() - 1];
    if (!pred[before]) {
      pred[before] = true;
      ++pred_count;
    }
  }
  rep.continuations_ok = succ_count >= 2 && pred_count >= 2;

  if (!ends_are_lines || !rep.continuations_ok || klo >= khi) {
    // Fall back: a degenerate prefix/suffix split can only mean the domain was
    // single-peaked after all; otherwise report the failed classification.
    bool all_sp = std::all_of(d.prefs().begin(), d.prefs().end(),
                              [](const Preference& p) { return is_single_peaked(p); });
    rep.kind = all_sp ? ThresholdReport::Kind::SinglePeaked : ThresholdReport::Kind::NotHybridStar;
    if (rep.kind == ThresholdReport::Kind::NotHybridStar && klo < khi) {
      rep.k_lo = klo;
      rep.k_hi = khi;
      rep.star = is_hybrid_star(d, klo, khi, path_cap);
    }
    return rep;
  }

  rep.k_lo = klo;
  rep.k_hi = khi;
  rep.star = is_hybrid_star(d, klo, khi, path_cap);
  rep.kind = rep.star->ok ? ThresholdReport::Kind::Hybrid : ThresholdReport::Kind::NotHybridStar;
  return rep;
}

}  // namespace detail

// Recovers the endogenous threshold structure of a regular domain from the
// a_1..a_m vertex-paths: a single path means single-peaked; otherwise the ends
// of the maximal common prefix/suffix of all paths are the two thresholds.
// Domains whose completely-reversed pair is not (identity, reversal) are
// relabeled first and the applied permutation is reported.
inline ThresholdReport recover_thresholds(const Domain& d,
                                          std::uint64_t path_cap = kDefaultPathCap) {
  RegularityReport reg = is_regular(d);
  if (!reg.regular()) {
    std::string why;
    if (!reg.richness.ok) why += "not minimally rich; ";
    if (!reg.diversity.ok) why += "no completely reversed pair; ";
    if (!reg.no_restoration.ok) why += "restoration found; ";
    fail(Errc::NotRegular, "threshold recovery needs a regular domain: " + why);
  }

  const Preference ident = identity_preference(d.m());
  if (d.contains(ident) && d.contains(reversed(ident)))
    return detail::recover_on_natural_labels(d, path_cap);

  // Map the smallest completely-reversed preference onto the identity order.
  const Preference& base = reg.diversity.witness->first;
  std::vector<Alt> perm(d.m());
  for (int k = 1; k <= d.m(); ++k) perm[base.ranked(k) - 1] = k;
  ThresholdReport rep = detail::recover_on_natural_labels(relabel(d, perm), path_cap);
  rep.relabeling = perm;
  return rep;
}

}  // namespace ballotcraft
