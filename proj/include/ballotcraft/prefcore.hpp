#pragma once

#include <algorithm>
#include <compare>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ballotcraft/rational.hpp"

namespace ballotcraft {

// 1-based alternative index; the built-in linear order on A is the index order.
using Alt = int;

constexpr int kMinAlternatives = 3;
constexpr int kMinVoters = 2;
constexpr int kMaxVoters = 16;

// A strict linear order over a_1..a_m, stored rank-first (order()[0] is the peak).
class Preference {
 public:
  explicit Preference(std::vector<Alt> order) : order_(std::move(order)) {
    const int m = static_cast<int>(order_.size());
    if (m < kMinAlternatives) fail(Errc::DegenerateSize, "preference needs at least 3 alternatives");
    rank_.assign(m, 0);
    for (int k = 0; k < m; ++k) {
      Alt a = order_[k];
      if (a < 1 || a > m || rank_[a - 1] != 0)
        fail(Errc::MalformedInput, "preference is not a permutation of 1..m");
      rank_[a - 1] = k + 1;
    }
  }

  int m() const { return static_cast<int>(order_.size()); }
  // r_k: the alternative holding rank k (1-based).
  Alt ranked(int k) const { return order_[k - 1]; }
  Alt top() const { return order_[0]; }
  int rank_of(Alt a) const { return rank_[a - 1]; }
  // a P b
  bool prefers(Alt a, Alt b) const { return rank_[a - 1] < rank_[b - 1]; }
  const std::vector<Alt>& order() const { return order_; }

  friend bool operator==(const Preference& x, const Preference& y) { return x.order_ == y.order_; }
  friend std::strong_ordering operator<=>(const Preference& x, const Preference& y) {
    return x.order_ <=> y.order_;
  }

 private:
  std::vector<Alt> order_;
  std::vector<int> rank_;
};

inline Preference identity_preference(int m) {
  std::vector<Alt> o(m);
  std::iota(o.begin(), o.end(), 1);
  return Preference(std::move(o));
}

inline Preference reversed(const Preference& p) {
  std::vector<Alt> o(p.order().rbegin(), p.order().rend());
  return Preference(std::move(o));
}

inline int rank(const Preference& p, Alt a) { return p.rank_of(a); }

// The unique contiguously-ranked pair swapped between P and Q when the two
// orders differ by exactly one such swap; empty otherwise. The pair comes back
// smaller-index first, so adjacent(P,Q) == adjacent(Q,P).
inline std::optional<std::pair<Alt, Alt>> adjacent(const Preference& p, const Preference& q) {
  if (p.m() != q.m()) return std::nullopt;
  const int m = p.m();
  int first = -1;
  for (int k = 1; k <= m; ++k) {
    if (p.ranked(k) != q.ranked(k)) {
      first = k;
      break;
    }
  }
  if (first < 0 || first == m) return std::nullopt;
  if (p.ranked(first) != q.ranked(first + 1) || p.ranked(first + 1) != q.ranked(first))
    return std::nullopt;
  for (int k = first + 2; k <= m; ++k)
    if (p.ranked(k) != q.ranked(k)) return std::nullopt;
  return std::minmax(p.ranked(first), p.ranked(first + 1));
}

inline bool completely_reversed(const Preference& p, const Preference& q) {
  if (p.m() != q.m()) return false;
  const int m = p.m();
  for (int k = 1; k <= m; ++k)
    if (q.ranked(k) != p.ranked(m + 1 - k)) return false;
  return true;
}

// Exact probability vector over a_1..a_m: entries nonnegative, summing to 1.
class Lottery {
 public:
  explicit Lottery(std::vector<Rat> probs) : p_(std::move(probs)) {
    if (p_.empty()) fail(Errc::MalformedInput, "empty lottery");
    Rat sum = 0;
    for (const Rat& x : p_) {
      if (x < 0) fail(Errc::MalformedInput, "negative lottery entry");
      sum += x;
    }
    if (sum != 1) fail(Errc::MalformedInput, "lottery entries sum to " + rat_str(sum) + ", not 1");
  }

  int m() const { return static_cast<int>(p_.size()); }
  const Rat& prob(Alt a) const { return p_[a - 1]; }
  const std::vector<Rat>& probs() const { return p_; }

  friend bool operator==(const Lottery& x, const Lottery& y) { return x.p_ == y.p_; }

 private:
  std::vector<Rat> p_;
};

// e_a: the degenerate lottery on a.
inline Lottery unit_lottery(int m, Alt a) {
  std::vector<Rat> p(m, Rat(0));
  p[a - 1] = 1;
  return Lottery(std::move(p));
}

inline Rat interval_mass(const Lottery& lam, Alt lo, Alt hi) {
  if (lo < 1 || hi > lam.m() || lo > hi)
    fail(Errc::InvalidInterval, "bad interval [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
  Rat s = 0;
  for (Alt a = lo; a <= hi; ++a) s += lam.prob(a);
  return s;
}

// Pointwise convex combination; weights must be nonnegative and sum to 1.
inline Lottery mix(const std::vector<std::pair<Rat, Lottery>>& pairs) {
  if (pairs.empty()) fail(Errc::BadWeights, "empty mixture");
  const int m = pairs.front().second.m();
  Rat wsum = 0;
  std::vector<Rat> p(m, Rat(0));
  for (const auto& [w, lot] : pairs) {
    if (w < 0) fail(Errc::BadWeights, "negative mixture weight");
    if (lot.m() != m) fail(Errc::BadWeights, "mixture over lotteries of different sizes");
    wsum += w;
    for (Alt a = 1; a <= m; ++a) p[a - 1] += w * lot.prob(a);
  }
  if (wsum != 1) fail(Errc::BadWeights, "mixture weights sum to " + rat_str(wsum) + ", not 1");
  return Lottery(std::move(p));
}

// First-order stochastic dominance of lam over mu under P: every top-k prefix
// of P gets at least as much mass from lam as from mu. Returns the first
// prefix length where lam falls short, or nullopt when lam dominates.
inline std::optional<int> dominance_violation(const Lottery& lam, const Lottery& mu,
                                              const Preference& p) {
  Rat a = 0, b = 0;
  for (int k = 1; k <= p.m(); ++k) {
    Alt x = p.ranked(k);
    a += lam.prob(x);
    b += mu.prob(x);
    if (a < b) return k;
  }
  return std::nullopt;
}

inline bool stochastically_dominates(const Lottery& lam, const Lottery& mu, const Preference& p) {
  return !dominance_violation(lam, mu, p).has_value();
}

using TopProfile = std::vector<Alt>;
using Profile = std::vector<Preference>;

inline TopProfile tops_of(const Profile& profile) {
  TopProfile t;
  t.reserve(profile.size());
  for (const Preference& p : profile) t.push_back(p.top());
  return t;
}

}  // namespace ballotcraft
