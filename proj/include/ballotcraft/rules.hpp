#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ballotcraft/prefcore.hpp"

namespace ballotcraft {

// Coalitions are bitmasks over voters 1..n; voter i owns bit (i-1).
using Coalition = std::uint32_t;

inline int coalition_size(Coalition s) { return std::popcount(s); }

inline std::vector<int> coalition_members(Coalition s, int n) {
  std::vector<int> out;
  for (int i = 1; i <= n; ++i)
    if (s & (Coalition{1} << (i - 1))) out.push_back(i);
  return out;
}

struct MonotonicityResult {
  bool ok = true;
  Coalition small = 0, large = 0;  // witness S subset T with mass moving left
  int k = 0;                       // interval start a_k where it fails
};

// ---------------------------------------------------------------------------
// Probabilistic ballots: one lottery per coalition, 2^n entries. Right-tail
// masses are precomputed and the two table-level validity conditions (ballot
// unanimity and interval-mass monotonicity along cover pairs) are memoized at
// construction, since rule evaluation consults them on every call.

class ProbabilisticBallots {
 public:
  ProbabilisticBallots(int n, int m, std::vector<Lottery> table)
      : n_(n), m_(m), table_(std::move(table)) {
    if (n_ < kMinVoters || n_ > kMaxVoters)
      fail(Errc::DegenerateSize, "need 2 <= n <= " + std::to_string(kMaxVoters));
    if (m_ < kMinAlternatives) fail(Errc::DegenerateSize, "need m >= 3");
    if (table_.size() != (std::size_t{1} << n_))
      fail(Errc::MalformedInput, "ballot table must have 2^n entries");
    for (const Lottery& lot : table_)
      if (lot.m() != m_) fail(Errc::MalformedInput, "ballot lottery size mismatch");
    build_suffix_masses();
    check_table();
  }

  // Anonymous compact form: by_size[k] is the ballot of every size-k coalition.
  static ProbabilisticBallots from_by_size(int n, int m, const std::vector<Lottery>& by_size) {
    if (by_size.size() != static_cast<std::size_t>(n) + 1)
      fail(Errc::MalformedInput, "by-size ballot table must have n+1 entries");
    std::vector<Lottery> table;
    table.reserve(std::size_t{1} << n);
    for (Coalition s = 0; s < (Coalition{1} << n); ++s) table.push_back(by_size[coalition_size(s)]);
    return ProbabilisticBallots(n, m, std::move(table));
  }

  int n() const { return n_; }
  int m() const { return m_; }
  Coalition full_coalition() const { return (Coalition{1} << n_) - 1; }
  const Lottery& ballot(Coalition s) const { return table_[s]; }
  const std::vector<Lottery>& table() const { return table_; }

  // beta_S([a_k, a_m]); k = m+1 gives 0.
  const Rat& suffix_mass(Coalition s, int k) const { return suffix_[s][k - 1]; }
  // beta_S([a_1, a_k])
  Rat prefix_mass(Coalition s, int k) const { return Rat(1) - suffix_mass(s, k + 1); }

  bool ballot_unanimity() const { return unanimity_ok_; }
  const MonotonicityResult& monotonicity() const { return mono_; }
  bool pfbr_valid() const { return unanimity_ok_ && mono_.ok; }

  friend bool operator==(const ProbabilisticBallots& a, const ProbabilisticBallots& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && a.table_ == b.table_;
  }

 private:
  void build_suffix_masses() {
    suffix_.assign(table_.size(), std::vector<Rat>(m_ + 1, Rat(0)));
    for (std::size_t s = 0; s < table_.size(); ++s)
      for (int k = m_; k >= 1; --k) suffix_[s][k - 1] = suffix_[s][k] + table_[s].prob(k);
  }

  void check_table() {
    unanimity_ok_ =
        table_[full_coalition()] == unit_lottery(m_, m_) && table_[0] == unit_lottery(m_, 1);
    // Cover pairs suffice: interval masses are transitive along subset chains.
    for (Coalition s = 0; s <= full_coalition() && mono_.ok; ++s)
      for (int i = 0; i < n_ && mono_.ok; ++i) {
        if (s & (Coalition{1} << i)) continue;
        Coalition t = s | (Coalition{1} << i);
        for (int k = 1; k <= m_; ++k)
          if (suffix_mass(s, k) > suffix_mass(t, k)) {
            mono_ = MonotonicityResult{false, s, t, k};
            break;
          }
      }
  }

  int n_, m_;
  std::vector<Lottery> table_;
  std::vector<std::vector<Rat>> suffix_;
  bool unanimity_ok_ = false;
  MonotonicityResult mono_;
};

// ---------------------------------------------------------------------------
// Deterministic ballots: one alternative per coalition. Carries its degenerate
// probabilistic twin for cross-evaluation.

class DeterministicBallots {
 public:
  DeterministicBallots(int n, int m, std::vector<Alt> table) : n_(n), m_(m), table_(std::move(table)) {
    if (n_ < kMinVoters || n_ > kMaxVoters)
      fail(Errc::DegenerateSize, "need 2 <= n <= " + std::to_string(kMaxVoters));
    if (m_ < kMinAlternatives) fail(Errc::DegenerateSize, "need m >= 3");
    if (table_.size() != (std::size_t{1} << n_))
      fail(Errc::MalformedInput, "ballot table must have 2^n entries");
    for (Alt b : table_)
      if (b < 1 || b > m_) fail(Errc::MalformedInput, "ballot alternative out of range");
    unanimity_ok_ = table_[full_coalition()] == m_ && table_[0] == 1;
    for (Coalition s = 0; s <= full_coalition() && mono_.ok; ++s)
      for (int i = 0; i < n_ && mono_.ok; ++i) {
        if (s & (Coalition{1} << i)) continue;
        Coalition t = s | (Coalition{1} << i);
        if (table_[s] > table_[t]) mono_ = MonotonicityResult{false, s, t, table_[t]};
      }
  }

  int n() const { return n_; }
  int m() const { return m_; }
  Coalition full_coalition() const { return (Coalition{1} << n_) - 1; }
  Alt ballot(Coalition s) const { return table_[s]; }
  const std::vector<Alt>& table() const { return table_; }
  bool ballot_unanimity() const { return unanimity_ok_; }
  const MonotonicityResult& monotonicity() const { return mono_; }
  bool fbr_valid() const { return unanimity_ok_ && mono_.ok; }

  ProbabilisticBallots as_probabilistic() const {
    std::vector<Lottery> t;
    t.reserve(table_.size());
    for (Alt b : table_) t.push_back(unit_lottery(m_, b));
    return ProbabilisticBallots(n_, m_, std::move(t));
  }

  friend bool operator==(const DeterministicBallots& a, const DeterministicBallots& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && a.table_ == b.table_;
  }
  friend std::strong_ordering operator<=>(const DeterministicBallots& a,
                                          const DeterministicBallots& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    if (auto c = a.m_ <=> b.m_; c != 0) return c;
    return a.table_ <=> b.table_;
  }

 private:
  int n_, m_;
  std::vector<Alt> table_;
  bool unanimity_ok_ = false;
  MonotonicityResult mono_;
};

// ---------------------------------------------------------------------------
// Evaluation

// S(k, P) = set of voters whose peak is a_k or to its right; k = m+1 gives the
// empty coalition.
inline Coalition s_upper(int k, const TopProfile& tops) {
  Coalition s = 0;
  for (std::size_t i = 0; i < tops.size(); ++i)
    if (tops[i] >= k) s |= Coalition{1} << i;
  return s;
}

namespace detail {
inline void check_tops(const TopProfile& tops, int n, int m) {
  if (static_cast<int>(tops.size()) != n) fail(Errc::MalformedInput, "top profile has wrong length");
  for (Alt a : tops)
    if (a < 1 || a > m) fail(Errc::MalformedInput, "top out of range");
}

inline void require_pfbr_valid(const ProbabilisticBallots& b) {
  if (!b.ballot_unanimity()) fail(Errc::InvalidBallots, "ballot unanimity fails");
  if (!b.monotonicity().ok) {
    const auto& w = b.monotonicity();
    fail(Errc::InvalidBallots, "monotonicity fails at S=" + std::to_string(w.small) + " T=" +
                                   std::to_string(w.large) + " k=" + std::to_string(w.k));
  }
}
}  // namespace detail

// Probability of a_k is the drop in right-tail ballot mass between the upper
// coalition at a_k and the one at a_{k+1}. Refuses tables that fail ballot
// unanimity or monotonicity, which are what make the output a lottery.
inline Lottery eval_pfbr(const ProbabilisticBallots& b, const TopProfile& tops) {
  detail::check_tops(tops, b.n(), b.m());
  detail::require_pfbr_valid(b);
  const int m = b.m();
  std::vector<Rat> p(m);
  Rat next_mass = 0;  // right-tail mass at S(k+1), starting from S(m+1) = {}
  for (int k = m; k >= 1; --k) {
    Rat cur_mass = b.suffix_mass(s_upper(k, tops), k);
    p[k - 1] = cur_mass - next_mass;
    next_mass = cur_mass;
  }
  return Lottery(std::move(p));
}

// max-min evaluation of deterministic ballots; the result is cross-checked
// against the degenerate probabilistic evaluation.
inline Alt eval_fbr(const DeterministicBallots& b, const TopProfile& tops) {
  detail::check_tops(tops, b.n(), b.m());
  if (!b.fbr_valid()) fail(Errc::InvalidBallots, "deterministic ballots fail unanimity/monotonicity");
  Alt best = 1;
  for (Coalition s = 0; s <= b.full_coalition(); ++s) {
    Alt v = b.ballot(s);
    for (int i = 0; i < b.n(); ++i)
      if (s & (Coalition{1} << i)) v = std::min(v, tops[i]);
    best = std::max(best, v);
  }
  Lottery via_pfbr = eval_pfbr(b.as_probabilistic(), tops);
  if (via_pfbr != unit_lottery(b.m(), best))
    fail(Errc::InternalInconsistency, "max-min and degenerate-table evaluations disagree");
  return best;
}

inline Lottery eval_random_dictatorship(const std::vector<Rat>& eps, const TopProfile& tops, int m) {
  if (eps.size() != tops.size()) fail(Errc::BadWeights, "coefficient count != voter count");
  Rat sum = 0;
  std::vector<Rat> p(m, Rat(0));
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (eps[i] < 0) fail(Errc::BadWeights, "negative dictatorial coefficient");
    sum += eps[i];
    p[tops[i] - 1] += eps[i];
  }
  if (sum != 1) fail(Errc::BadWeights, "coefficients sum to " + rat_str(sum) + ", not 1");
  return Lottery(std::move(p));
}

// ---------------------------------------------------------------------------
// Table-level checks

inline bool check_ballot_unanimity(const ProbabilisticBallots& b) { return b.ballot_unanimity(); }
inline bool check_ballot_unanimity(const DeterministicBallots& b) { return b.ballot_unanimity(); }
inline MonotonicityResult check_monotonicity(const ProbabilisticBallots& b) { return b.monotonicity(); }
inline MonotonicityResult check_monotonicity(const DeterministicBallots& b) { return b.monotonicity(); }

inline bool check_anonymous_ballots(const ProbabilisticBallots& b) {
  for (int size = 1; size < b.n(); ++size) {
    Coalition rep = (Coalition{1} << size) - 1;
    for (Coalition s = 0; s <= b.full_coalition(); ++s)
      if (coalition_size(s) == size && !(b.ballot(s) == b.ballot(rep))) return false;
  }
  return true;
}

// Constrained random dictatorship w.r.t. thresholds: each coalition's ballot
// puts exactly its members' total weight on the right interval and the
// complement's weight on the left interval. Returns the (unique) coefficient
// vector when it holds.
inline std::optional<std::vector<Rat>> check_crd(const ProbabilisticBallots& b, int k_lo, int k_hi) {
  if (k_lo < 1 || k_hi > b.m() || k_hi - k_lo <= 1)
    fail(Errc::InvalidThresholds, "need 1 <= k_lo, k_hi <= m with k_hi - k_lo > 1");
  const int n = b.n();
  std::vector<Rat> eps(n);
  Rat total = 0;
  for (int i = 0; i < n; ++i) {
    eps[i] = b.suffix_mass(Coalition{1} << i, k_hi);
    total += eps[i];
  }
  if (total != 1) return std::nullopt;
  for (Coalition s = 0; s <= b.full_coalition(); ++s) {
    Rat in_weight = 0;
    for (int i = 0; i < n; ++i)
      if (s & (Coalition{1} << i)) in_weight += eps[i];
    if (b.suffix_mass(s, k_hi) != in_weight) return std::nullopt;
    if (b.prefix_mass(s, k_lo) != Rat(1) - in_weight) return std::nullopt;
  }
  // Forced consequence: nothing strictly between the thresholds carries mass.
  for (Coalition s = 0; s <= b.full_coalition(); ++s)
    for (Alt a = k_lo + 1; a < k_hi; ++a)
      if (b.ballot(s).prob(a) != 0)
        fail(Errc::InternalInconsistency, "CRD held but interior mass is nonzero");
  return eps;
}

struct PerCapitaResult {
  bool ok = true;
  int size_small = 0, size_large = 0;  // |S| < |S'|
  char side = 'R';                     // which inequality failed
  Alt alt = 0;                         // a_t (right) or a_s (left)
  Rat small_pc, large_pc;              // violated: large_pc < small_pc
};

// Per-capita monotonicity of anonymous ballots: right-tail mass per member
// weakly grows along coalition inclusion, and symmetrically for left-prefix
// mass of the complements. Anonymity reduces the scan to coalition sizes.
inline PerCapitaResult check_per_capita(const ProbabilisticBallots& b, int k_lo, int k_hi) {
  if (k_lo < 1 || k_hi > b.m() || k_lo >= k_hi)
    fail(Errc::InvalidThresholds, "need 1 <= k_lo < k_hi <= m");
  if (!check_anonymous_ballots(b))
    fail(Errc::RequiresAnonymity, "per-capita monotonicity is defined for anonymous ballots");
  const int n = b.n();
  auto rep = [](int size) { return (Coalition{1} << size) - 1; };
  PerCapitaResult r;
  for (int s = 1; s < n; ++s)
    for (int t = s + 1; t < n; ++t) {
      for (Alt a = k_hi; a <= b.m(); ++a) {
        Rat small_pc = b.suffix_mass(rep(s), a) / s;
        Rat large_pc = b.suffix_mass(rep(t), a) / t;
        if (large_pc < small_pc)
          return PerCapitaResult{false, s, t, 'R', a, small_pc, large_pc};
      }
      for (Alt a = 1; a <= k_lo; ++a) {
        Rat small_pc = b.prefix_mass(rep(n - s), a) / s;
        Rat large_pc = b.prefix_mass(rep(n - t), a) / t;
        if (large_pc < small_pc)
          return PerCapitaResult{false, s, t, 'L', a, small_pc, large_pc};
      }
    }
  return r;
}

// beta_S = sum of weight * e_{b_S} over the component deterministic tables.
inline ProbabilisticBallots mixture_to_ballots(
    const std::vector<std::pair<Rat, DeterministicBallots>>& fbrs) {
  if (fbrs.empty()) fail(Errc::BadWeights, "empty mixture");
  const int n = fbrs.front().second.n(), m = fbrs.front().second.m();
  Rat wsum = 0;
  for (const auto& [w, f] : fbrs) {
    if (w <= 0) fail(Errc::BadWeights, "mixture weights must be positive");
    if (f.n() != n || f.m() != m) fail(Errc::BadWeights, "mixture over mismatched ballot tables");
    wsum += w;
  }
  if (wsum != 1) fail(Errc::BadWeights, "mixture weights sum to " + rat_str(wsum) + ", not 1");
  std::vector<Lottery> table;
  table.reserve(std::size_t{1} << n);
  for (Coalition s = 0; s < (Coalition{1} << n); ++s) {
    std::vector<Rat> p(m, Rat(0));
    for (const auto& [w, f] : fbrs) p[f.ballot(s) - 1] += w;
    table.emplace_back(std::move(p));
  }
  return ProbabilisticBallots(n, m, std::move(table));
}

// Ballots plus the optional threshold/coefficient annotations they travel with
// in rule files.
struct PfbrSpec {
  ProbabilisticBallots ballots;
  std::optional<std::pair<int, int>> thresholds;
  std::optional<std::vector<Rat>> eps;
};

}  // namespace ballotcraft
