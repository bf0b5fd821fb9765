#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ballotcraft/prefcore.hpp"

namespace ballotcraft {

// Generators enumerate all m! orders and filter; past m = 8 that blows up.
constexpr int kMaxGeneratorAlternatives = 8;

// ---------------------------------------------------------------------------
// Preference restrictions

// Single-peaked w.r.t. an arbitrary linear order given as a permutation of
// 1..m: between the peak and either end, closer (along `order`) is better.
inline bool is_single_peaked_wrt(const Preference& p, const std::vector<Alt>& order) {
  const int m = p.m();
  std::vector<int> pos(m + 1, 0);
  for (int i = 0; i < m; ++i) pos[order[i]] = i;
  const int peak = pos[p.top()];
  for (Alt a = 1; a <= m; ++a) {
    for (Alt b = 1; b <= m; ++b) {
      if (a == b) continue;
      // a strictly farther from the peak than b, on the same side
      if ((pos[a] < pos[b] && pos[b] < peak) || (peak < pos[b] && pos[b] < pos[a]))
        if (!p.prefers(b, a)) return false;
    }
  }
  return true;
}

inline bool is_single_peaked(const Preference& p) {
  std::vector<Alt> order(p.m());
  std::iota(order.begin(), order.end(), 1);
  return is_single_peaked_wrt(p, order);
}

// (k_lo,k_hi)-hybrid: single-peaked within the left interval [a_1,a_klo] and
// the right interval [a_khi,a_m]; a peak inside an outer interval pins the
// facing threshold on top of the middle; the middle is otherwise free.
inline bool is_hybrid(const Preference& p, int k_lo, int k_hi) {
  const int m = p.m();
  if (k_lo < 1 || k_hi > m || k_lo >= k_hi)
    fail(Errc::InvalidThresholds, "need 1 <= k_lo < k_hi <= m");
  const Alt top = p.top();
  auto side_ok = [&](Alt lo, Alt hi) {
    for (Alt a = lo; a <= hi; ++a)
      for (Alt b = lo; b <= hi; ++b) {
        if (a == b) continue;
        if ((a < b && b < top) || (top < b && b < a))
          if (!p.prefers(b, a)) return false;
      }
    return true;
  };
  if (!side_ok(1, k_lo) || !side_ok(k_hi, m)) return false;
  if (top <= k_lo) {
    for (Alt l = k_lo + 1; l <= k_hi; ++l)
      if (!p.prefers(k_lo, l)) return false;
  }
  if (top >= k_hi) {
    for (Alt l = k_lo; l <= k_hi - 1; ++l)
      if (!p.prefers(k_hi, l)) return false;
  }
  return true;
}

// Semi-single-peaked w.r.t. one threshold: single-peaked between the peak and
// the threshold, and everything beyond the threshold ranked below it.
inline bool is_semi_single_peaked(const Preference& p, Alt threshold) {
  const int m = p.m();
  if (threshold < 1 || threshold > m) fail(Errc::InvalidThresholds, "threshold out of range");
  const Alt top = p.top();
  const Alt lo = std::min(top, threshold), hi = std::max(top, threshold);
  for (Alt a = lo; a <= hi; ++a)
    for (Alt b = lo; b <= hi; ++b) {
      if (a == b) continue;
      if ((a < b && b < top) || (top < b && b < a))
        if (!p.prefers(b, a)) return false;
    }
  if (top <= threshold)
    for (Alt x = threshold + 1; x <= m; ++x)
      if (!p.prefers(threshold, x)) return false;
  if (top >= threshold)
    for (Alt x = 1; x < threshold; ++x)
      if (!p.prefers(threshold, x)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Domain: a deduplicated, canonically sorted set of preferences over a common
// m, with the swap-adjacency graph built up front (read-only afterwards).

class Domain {
 public:
  static Domain of(std::vector<Preference> prefs) {
    if (prefs.empty()) fail(Errc::EmptyCollection, "domain needs at least one preference");
    Domain d;
    d.m_ = prefs.front().m();
    for (const Preference& p : prefs)
      if (p.m() != d.m_) fail(Errc::MalformedInput, "domain mixes alternative-set sizes");
    std::sort(prefs.begin(), prefs.end());
    prefs.erase(std::unique(prefs.begin(), prefs.end()), prefs.end());
    d.prefs_ = std::move(prefs);
    d.build_adjacency();
    return d;
  }

  int m() const { return m_; }
  int size() const { return static_cast<int>(prefs_.size()); }
  const std::vector<Preference>& prefs() const { return prefs_; }
  const Preference& at(int idx) const { return prefs_[idx]; }

  std::optional<int> index_of(const Preference& p) const {
    auto it = std::lower_bound(prefs_.begin(), prefs_.end(), p);
    if (it != prefs_.end() && *it == p) return static_cast<int>(it - prefs_.begin());
    return std::nullopt;
  }
  bool contains(const Preference& p) const { return index_of(p).has_value(); }

  // adjacency()[i] = sorted indices of preferences one contiguous swap away
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }

  std::vector<Alt> peaks() const {
    std::set<Alt> s;
    for (const Preference& p : prefs_) s.insert(p.top());
    return {s.begin(), s.end()};
  }

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.m_ == b.m_ && a.prefs_ == b.prefs_;
  }

 private:
  Domain() = default;

  void build_adjacency() {
    adj_.assign(prefs_.size(), {});
    for (int i = 0; i < size(); ++i) {
      std::vector<Alt> o = prefs_[i].order();
      for (int k = 0; k + 1 < m_; ++k) {
        std::swap(o[k], o[k + 1]);
        if (auto j = index_of(Preference(o)); j && *j > i) {
          adj_[i].push_back(*j);
          adj_[*j].push_back(i);
        }
        std::swap(o[k], o[k + 1]);
      }
    }
    for (auto& v : adj_) std::sort(v.begin(), v.end());
  }

  int m_ = 0;
  std::vector<Preference> prefs_;
  std::vector<std::vector<int>> adj_;
};

// Relabels alternatives: a -> perm[a-1]. Useful to normalize a domain whose
// completely-reversed pair is not the identity/reversal pair.
inline Domain relabel(const Domain& d, const std::vector<Alt>& perm) {
  if (static_cast<int>(perm.size()) != d.m()) fail(Errc::MalformedInput, "relabel size mismatch");
  std::vector<Preference> out;
  out.reserve(d.size());
  for (const Preference& p : d.prefs()) {
    std::vector<Alt> o;
    o.reserve(d.m());
    for (Alt a : p.order()) o.push_back(perm[a - 1]);
    out.emplace_back(std::move(o));
  }
  return Domain::of(std::move(out));
}

// ---------------------------------------------------------------------------
// Generators

namespace detail {
inline void check_generator_size(int m) {
  if (m < kMinAlternatives) fail(Errc::DegenerateSize, "need m >= 3");
  if (m > kMaxGeneratorAlternatives)
    fail(Errc::CapExceeded, "generator capped at m <= " + std::to_string(kMaxGeneratorAlternatives));
}

template <typename Pred>
Domain filtered_domain(int m, Pred keep) {
  check_generator_size(m);
  std::vector<Alt> order(m);
  std::iota(order.begin(), order.end(), 1);
  std::vector<Preference> out;
  do {
    Preference p(order);
    if (keep(p)) out.push_back(std::move(p));
  } while (std::next_permutation(order.begin(), order.end()));
  return Domain::of(std::move(out));
}
}  // namespace detail

inline Domain gen_complete(int m) {
  return detail::filtered_domain(m, [](const Preference&) { return true; });
}

inline Domain gen_single_peaked(int m) {
  return detail::filtered_domain(m, [](const Preference& p) { return is_single_peaked(p); });
}

inline Domain gen_hybrid(int m, int k_lo, int k_hi) {
  detail::check_generator_size(m);
  if (k_lo < 1 || k_hi > m || k_lo >= k_hi)
    fail(Errc::InvalidThresholds, "need 1 <= k_lo < k_hi <= m");
  return detail::filtered_domain(m, [&](const Preference& p) { return is_hybrid(p, k_lo, k_hi); });
}

inline Domain gen_multiple_single_peaked(const std::vector<std::vector<Alt>>& orders) {
  if (orders.empty()) fail(Errc::EmptyCollection, "need at least one order");
  const int m = static_cast<int>(orders.front().size());
  for (const auto& o : orders) {
    Preference check(o);  // validates the permutation
    if (static_cast<int>(o.size()) != m) fail(Errc::MalformedInput, "orders over different m");
  }
  return detail::filtered_domain(m, [&](const Preference& p) {
    for (const auto& o : orders)
      if (is_single_peaked_wrt(p, o)) return true;
    return false;
  });
}

inline Domain gen_semi_single_peaked(int m, Alt threshold) {
  detail::check_generator_size(m);
  if (threshold < 1 || threshold > m) fail(Errc::InvalidThresholds, "threshold out of range");
  return detail::filtered_domain(
      m, [&](const Preference& p) { return is_semi_single_peaked(p, threshold); });
}

// ---------------------------------------------------------------------------
// Regularity checks

struct RichnessResult {
  bool ok = true;
  std::vector<Alt> missing_peaks;
};

inline RichnessResult is_minimally_rich(const Domain& d) {
  std::vector<char> seen(d.m() + 1, 0);
  for (const Preference& p : d.prefs()) seen[p.top()] = 1;
  RichnessResult r;
  for (Alt a = 1; a <= d.m(); ++a)
    if (!seen[a]) r.missing_peaks.push_back(a);
  r.ok = r.missing_peaks.empty();
  return r;
}

struct DiversityResult {
  bool ok = false;
  std::optional<std::pair<Preference, Preference>> witness;
};

inline DiversityResult has_diversity(const Domain& d) {
  DiversityResult r;
  for (const Preference& p : d.prefs()) {
    Preference q = reversed(p);
    if (d.contains(q)) {
      r.ok = true;
      r.witness = std::make_pair(p, q);
      return r;
    }
  }
  return r;
}

struct RestorationCounterexample {
  Preference from, to;
  std::pair<Alt, Alt> swapped;
};

struct NoRestorationResult {
  bool ok = true;
  std::optional<RestorationCounterexample> counterexample;
};

namespace detail {
// Per-pair layered view of the adjacency graph. Preferences ranking a_s above
// a_t form layer 0, the rest layer 1. A path whose {a_s,a_t} order switches at
// most once stays inside one layer except for at most one crossing edge, so
// reachability reduces to: same layer and same component, or components on the
// two sides joined by some crossing edge.
struct PairLayers {
  std::vector<int> layer;              // 0 = a_s above a_t
  std::vector<int> root;               // component root within the layer
  std::set<std::pair<int, int>> xing;  // (root in layer 0, root in layer 1)
  bool ok = true;                      // every ordered pair of prefs reachable

  int find(int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  }
};

inline PairLayers analyze_pair(const Domain& d, Alt s, Alt t) {
  PairLayers pl;
  const int n = d.size();
  pl.layer.resize(n);
  pl.root.resize(n);
  for (int i = 0; i < n; ++i) {
    pl.layer[i] = d.at(i).prefers(s, t) ? 0 : 1;
    pl.root[i] = i;
  }
  std::vector<std::pair<int, int>> cross;
  for (int i = 0; i < n; ++i)
    for (int j : d.adjacency()[i]) {
      if (j < i) continue;
      if (pl.layer[i] == pl.layer[j]) {
        int a = pl.find(i), b = pl.find(j);
        if (a != b) pl.root[a] = b;
      } else {
        cross.emplace_back(i, j);
      }
    }
  for (auto [i, j] : cross) {
    if (pl.layer[i] != 0) std::swap(i, j);
    pl.xing.emplace(pl.find(i), pl.find(j));
  }
  // connectivity summary
  int comp0 = -1, comp1 = -1, n0 = 0, n1 = 0;
  for (int i = 0; i < n; ++i) {
    int r = pl.find(i);
    if (pl.layer[i] == 0) {
      ++n0;
      if (comp0 < 0) comp0 = r;
      else if (comp0 != r) pl.ok = false;
    } else {
      ++n1;
      if (comp1 < 0) comp1 = r;
      else if (comp1 != r) pl.ok = false;
    }
  }
  if (n0 > 0 && n1 > 0 && pl.xing.empty()) pl.ok = false;
  return pl;
}

inline bool pair_reaches(PairLayers& pl, int i, int j) {
  const int ri = pl.find(i), rj = pl.find(j);
  if (pl.layer[i] == pl.layer[j]) return ri == rj;
  const int r0 = pl.layer[i] == 0 ? ri : rj;
  const int r1 = pl.layer[i] == 0 ? rj : ri;
  return pl.xing.count({r0, r1}) > 0;
}
}  // namespace detail

// True iff for every ordered pair of distinct preferences and every {a_s,a_t},
// some adjacency path connects them switching the a_s/a_t order at most once.
// The counterexample, when present, is the lexicographically smallest failing
// (P, P', {a_s,a_t}).
inline NoRestorationResult is_no_restoration(const Domain& d) {
  NoRestorationResult res;
  std::map<std::pair<Alt, Alt>, detail::PairLayers> failing;
  for (Alt s = 1; s <= d.m(); ++s)
    for (Alt t = s + 1; t <= d.m(); ++t) {
      auto pl = detail::analyze_pair(d, s, t);
      if (!pl.ok) failing.emplace(std::make_pair(s, t), std::move(pl));
    }
  if (failing.empty()) return res;
  res.ok = false;
  for (int i = 0; i < d.size(); ++i) {
    for (int j = 0; j < d.size(); ++j) {
      if (i == j) continue;
      for (auto& [pair, pl] : failing) {
        if (!detail::pair_reaches(pl, i, j)) {
          res.counterexample = RestorationCounterexample{d.at(i), d.at(j), pair};
          return res;
        }
      }
    }
  }
  fail(Errc::InternalInconsistency, "restoration failure flagged but no witness triple found");
}

struct RegularityReport {
  RichnessResult richness;
  DiversityResult diversity;
  NoRestorationResult no_restoration;
  bool regular() const { return richness.ok && diversity.ok && no_restoration.ok; }
};

inline RegularityReport is_regular(const Domain& d) {
  return RegularityReport{is_minimally_rich(d), has_diversity(d), is_no_restoration(d)};
}

}  // namespace ballotcraft
