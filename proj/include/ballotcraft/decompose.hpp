#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ballotcraft/audit.hpp"
#include "ballotcraft/rules.hpp"

namespace ballotcraft {

inline std::vector<Alt> support(const Lottery& lot) {
  std::vector<Alt> out;
  for (Alt a = 1; a <= lot.m(); ++a)
    if (lot.prob(a) > 0) out.push_back(a);
  return out;
}

namespace detail {
inline std::size_t total_support(const ProbabilisticBallots& b) {
  std::size_t s = 0;
  for (Coalition c = 0; c <= b.full_coalition(); ++c) s += support(b.ballot(c)).size();
  return s;
}
}  // namespace detail

// Boundary atoms of a coalition's ballot: the rightmost supported alternative
// in the left interval and the leftmost in the right interval. The full and
// empty coalitions take the fixed conventions (a_m on the right, a_1 on the
// left); the unused side of either is padded with the matching extreme.
inline std::pair<Alt, Alt> boundary_atoms(const ProbabilisticBallots& b, Coalition s, int k_lo,
                                          int k_hi) {
  if (k_lo < 1 || k_hi > b.m() || k_lo >= k_hi) fail(Errc::InvalidThresholds, "bad thresholds");
  if (s == 0) return {1, b.m()};
  if (s == b.full_coalition()) return {1, b.m()};
  Alt left = 0, right = 0;
  for (Alt a = k_lo; a >= 1; --a)
    if (b.ballot(s).prob(a) > 0) {
      left = a;
      break;
    }
  for (Alt a = k_hi; a <= b.m(); ++a)
    if (b.ballot(s).prob(a) > 0) {
      right = a;
      break;
    }
  if (left == 0 || right == 0)
    fail(Errc::CrdViolated, "coalition ballot has no mass in the left or right interval");
  return {left, right};
}

// Deterministic ballots for one voter: coalitions containing the voter take
// their right boundary atom, the rest take their left one. The result must be
// a valid constrained-dictatorship table; a monotonicity failure means the
// input was not per-capita monotone.
inline DeterministicBallots voter_fbr(const ProbabilisticBallots& b, int voter, int k_lo,
                                      int k_hi) {
  if (voter < 1 || voter > b.n()) fail(Errc::MalformedInput, "voter out of range");
  std::vector<Alt> table(std::size_t{1} << b.n());
  for (Coalition s = 0; s <= b.full_coalition(); ++s) {
    auto [left, right] = boundary_atoms(b, s, k_lo, k_hi);
    table[s] = (s & (Coalition{1} << (voter - 1))) ? right : left;
  }
  DeterministicBallots out(b.n(), b.m(), std::move(table));
  if (!out.ballot_unanimity() || !out.monotonicity().ok)
    fail(Errc::PerCapitaRequired,
         "voter ballot table is not monotone; input ballots lack per-capita monotonicity");
  return out;
}

// alpha = min over nonempty proper coalitions of
//         min( beta_S(bR_S)/|S| , beta_S(bL_S)/(n-|S|) ); always in (0, 1/n].
inline Rat alpha(const ProbabilisticBallots& b, int k_lo, int k_hi) {
  std::optional<Rat> best;
  for (Coalition s = 1; s < b.full_coalition(); ++s) {
    auto [left, right] = boundary_atoms(b, s, k_lo, k_hi);
    Rat r = b.ballot(s).prob(right) / coalition_size(s);
    Rat l = b.ballot(s).prob(left) / (b.n() - coalition_size(s));
    Rat v = std::min(r, l);
    if (!best || v < *best) best = v;
  }
  if (!best) fail(Errc::InternalInconsistency, "no proper coalition to take alpha over");
  return *best;
}

struct RefineResult {
  ProbabilisticBallots gamma;    // two-point ballots at the boundary atoms
  ProbabilisticBallots refined;  // (beta - alpha*n*gamma) / (1 - alpha*n)
  Rat alpha;
};

// One refinement round. Errors with TerminalCase when alpha == 1/n, i.e. when
// every proper coalition's ballot already has binary support.
inline RefineResult refine(const ProbabilisticBallots& b, int k_lo, int k_hi) {
  const int n = b.n(), m = b.m();
  const Rat a = alpha(b, k_lo, k_hi);
  if (a == Rat(1, n)) fail(Errc::TerminalCase, "alpha == 1/n: finish by equal-weight extraction");
  const Rat an = a * n;

  std::vector<Lottery> gamma_table, refined_table;
  for (Coalition s = 0; s <= b.full_coalition(); ++s) {
    auto [left, right] = boundary_atoms(b, s, k_lo, k_hi);
    const int size = coalition_size(s);
    std::vector<Rat> g(m, Rat(0));
    g[right - 1] += Rat(size, n);
    g[left - 1] += Rat(n - size, n);
    std::vector<Rat> r(m);
    for (Alt x = 1; x <= m; ++x) {
      r[x - 1] = (b.ballot(s).prob(x) - an * g[x - 1]) / (1 - an);
      if (r[x - 1] < 0)
        fail(Errc::PerCapitaRequired, "refined ballot went negative; input lacks per-capita "
                                      "monotonicity");
    }
    gamma_table.emplace_back(std::move(g));
    refined_table.emplace_back(std::move(r));
  }
  RefineResult out{ProbabilisticBallots(n, m, std::move(gamma_table)),
                   ProbabilisticBallots(n, m, std::move(refined_table)), a};
  // beta = alpha*n*gamma + (1-alpha*n)*refined, exactly
  for (Coalition s = 0; s <= b.full_coalition(); ++s)
    for (Alt x = 1; x <= m; ++x)
      if (b.ballot(s).prob(x) !=
          an * out.gamma.ballot(s).prob(x) + (1 - an) * out.refined.ballot(s).prob(x))
        fail(Errc::InternalInconsistency, "refinement identity failed");
  return out;
}

// ---------------------------------------------------------------------------
// Full decomposition of anonymous ballots into deterministic tables

struct DecompositionRound {
  Rat alpha;
  bool terminal = false;
  std::vector<DeterministicBallots> extracted;  // one table per voter
  std::optional<ProbabilisticBallots> refined;  // absent on the terminal round
  std::size_t support_before = 0, support_after = 0;
};

struct DecompositionResult {
  std::vector<std::pair<Rat, DeterministicBallots>> components;
  std::vector<DecompositionRound> trace;
};

enum class DecomposeStatus { Decomposed, NotAnonymous, NotCrd, NotPerCapitaMonotone };

inline const char* decompose_status_name(DecomposeStatus s) {
  switch (s) {
    case DecomposeStatus::Decomposed: return "decomposed";
    case DecomposeStatus::NotAnonymous: return "NotAnonymous";
    case DecomposeStatus::NotCrd: return "NotCrd";
    case DecomposeStatus::NotPerCapitaMonotone: return "NotPerCapitaMonotone";
  }
  return "?";
}

struct DecomposeOutcome {
  DecomposeStatus status = DecomposeStatus::Decomposed;
  std::optional<DecompositionResult> result;
  std::optional<PerCapitaResult> per_capita_witness;
  bool decomposed() const { return status == DecomposeStatus::Decomposed; }
};

namespace detail {
inline bool all_binary_support(const ProbabilisticBallots& b) {
  for (Coalition s = 1; s < b.full_coalition(); ++s)
    if (support(b.ballot(s)).size() != 2) return false;
  return true;
}

inline void check_round_invariants(const ProbabilisticBallots& b, int k_lo, int k_hi) {
  if (!b.ballot_unanimity() || !b.monotonicity().ok)
    fail(Errc::InternalInconsistency, "refined ballots lost unanimity/monotonicity");
  auto eps = check_crd(b, k_lo, k_hi);
  if (!eps) fail(Errc::InternalInconsistency, "refined ballots lost the CRD condition");
  for (const Rat& e : *eps)
    if (e != Rat(1, b.n()))
      fail(Errc::InternalInconsistency, "refined ballots drifted from uniform coefficients");
  if (!check_anonymous_ballots(b))
    fail(Errc::InternalInconsistency, "refined ballots lost anonymity");
  if (!check_per_capita(b, k_lo, k_hi).ok)
    fail(Errc::InternalInconsistency, "refined ballots lost per-capita monotonicity");
}
}  // namespace detail

// Peels off one uniform voter-table mixture per round, rescaling what remains,
// until every proper coalition's ballot is two-point; identical component
// tables are merged with their weights summed. Rejections (not anonymous, no
// CRD coefficients, per-capita failure) come back as statuses, not errors.
inline DecomposeOutcome decompose_anonymous(const ProbabilisticBallots& b, int k_lo, int k_hi) {
  const int n = b.n(), m = b.m();
  if (!(1 < k_hi - k_lo && k_hi - k_lo < m - 1) || k_lo < 1 || k_hi > m)
    fail(Errc::InvalidThresholds, "decomposition needs 1 < k_hi - k_lo < m - 1");
  if (!b.pfbr_valid()) fail(Errc::InvalidBallots, "ballots fail unanimity/monotonicity");
  if (!check_anonymous_ballots(b)) return {DecomposeStatus::NotAnonymous, {}, {}};
  if (!check_crd(b, k_lo, k_hi)) return {DecomposeStatus::NotCrd, {}, {}};
  PerCapitaResult pc = check_per_capita(b, k_lo, k_hi);
  if (!pc.ok) return {DecomposeStatus::NotPerCapitaMonotone, {}, pc};

  DecompositionResult res;
  ProbabilisticBallots cur = b;
  Rat residual = 1;
  const std::size_t initial_support = detail::total_support(cur);
  std::size_t round_guard = initial_support + 2;

  while (true) {
    if (round_guard-- == 0)
      fail(Errc::InternalInconsistency, "refinement failed to terminate");
    DecompositionRound round;
    round.support_before = detail::total_support(cur);

    if (detail::all_binary_support(cur)) {
      round.terminal = true;
      round.alpha = Rat(1, n);
      for (int i = 1; i <= n; ++i) {
        DeterministicBallots f = voter_fbr(cur, i, k_lo, k_hi);
        round.extracted.push_back(f);
        res.components.emplace_back(residual / n, std::move(f));
      }
      round.support_after = round.support_before;
      res.trace.push_back(std::move(round));
      break;
    }

    RefineResult rr = refine(cur, k_lo, k_hi);
    round.alpha = rr.alpha;
    for (int i = 1; i <= n; ++i) {
      DeterministicBallots f = voter_fbr(cur, i, k_lo, k_hi);
      round.extracted.push_back(f);
      res.components.emplace_back(residual * rr.alpha, std::move(f));
    }
    residual *= 1 - rr.alpha * n;
    detail::check_round_invariants(rr.refined, k_lo, k_hi);
    round.support_after = detail::total_support(rr.refined);
    if (round.support_after >= round.support_before)
      fail(Errc::InternalInconsistency, "support size did not shrink");
    round.refined = rr.refined;
    res.trace.push_back(std::move(round));
    cur = std::move(rr.refined);
  }

  // Merge duplicate tables, keeping first-extraction order.
  std::vector<std::pair<Rat, DeterministicBallots>> merged;
  for (auto& [w, f] : res.components) {
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const auto& e) { return e.second == f; });
    if (it == merged.end()) merged.emplace_back(w, std::move(f));
    else it->first += w;
  }
  res.components = std::move(merged);

  Rat weight_sum = 0;
  for (const auto& [w, f] : res.components) {
    if (w <= 0) fail(Errc::InternalInconsistency, "nonpositive component weight");
    weight_sum += w;
  }
  if (weight_sum != 1) fail(Errc::InternalInconsistency, "component weights do not sum to 1");
  if (!(mixture_to_ballots(res.components) == b))
    fail(Errc::InternalInconsistency, "component mixture does not reproduce the input ballots");
  return {DecomposeStatus::Decomposed, std::move(res), {}};
}

// ---------------------------------------------------------------------------
// Independent verification of a decomposition, in three layers:
//   1. ballot-level: the weighted component mixture equals the input table;
//   2. rule-level: at every top profile the evaluated lotteries agree;
//   3. component-level: each table is a unanimous, strategy-proof rule on the
//      full hybrid domain for the given thresholds.

struct VerifyResult {
  bool ok = true;
  int failed_layer = 0;
  std::string detail;
};

inline VerifyResult verify_decomposition(const ProbabilisticBallots& b,
                                         const DecompositionResult& result, int k_lo, int k_hi,
                                         AuditOptions opt = {}) {
  if (result.components.empty()) return {false, 1, "no components"};
  if (!(mixture_to_ballots(result.components) == b))
    return {false, 1, "ballot-level mixture mismatch"};

  const int n = b.n(), m = b.m();
  std::vector<int> digits(n, 0);
  TopProfile tops(n);
  do {
    for (int i = 0; i < n; ++i) tops[i] = digits[i] + 1;
    std::vector<std::pair<Rat, Lottery>> parts;
    parts.reserve(result.components.size());
    for (const auto& [w, f] : result.components)
      parts.emplace_back(w, unit_lottery(m, eval_fbr(f, tops)));
    if (!(mix(parts) == eval_pfbr(b, tops)))
      return {false, 2, "rule-level mismatch at a top profile"};
  } while (detail::next_tuple(digits, m));

  Domain hybrid = gen_hybrid(m, k_lo, k_hi);
  for (std::size_t c = 0; c < result.components.size(); ++c) {
    const auto& f = result.components[c].second;
    if (!f.fbr_valid()) return {false, 3, "component " + std::to_string(c) + " invalid"};
    TopsRule rule = fbr_rule(f);
    if (!check_unanimity(rule, hybrid, n, opt).passed)
      return {false, 3, "component " + std::to_string(c) + " not unanimous"};
    if (!check_strategy_proofness(rule, hybrid, n, opt).passed)
      return {false, 3, "component " + std::to_string(c) + " manipulable"};
  }
  return {};
}

}  // namespace ballotcraft
