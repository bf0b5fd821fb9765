#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "ballotcraft/rules.hpp"
#include "ballotcraft/structure.hpp"

namespace ballotcraft {

// Rule facades over the two profile granularities. PFBR-style rules only read
// peaks; full-profile rules see entire preference tuples.
struct TopsRule {
  int m = 0;
  std::function<Lottery(const TopProfile&)> eval;
};

struct ProfileRule {
  int m = 0;
  std::function<Lottery(const Profile&)> eval;
};

inline TopsRule pfbr_rule(ProbabilisticBallots b) {
  const int m = b.m();
  return TopsRule{m, [b = std::move(b)](const TopProfile& t) { return eval_pfbr(b, t); }};
}

inline TopsRule fbr_rule(const DeterministicBallots& b) {
  return pfbr_rule(b.as_probabilistic());
}

inline TopsRule random_dictatorship_rule(std::vector<Rat> eps, int m) {
  return TopsRule{m, [eps = std::move(eps), m](const TopProfile& t) {
                    return eval_random_dictatorship(eps, t, m);
                  }};
}

inline ProfileRule as_profile_rule(const TopsRule& r) {
  return ProfileRule{r.m, [r](const Profile& p) { return r.eval(tops_of(p)); }};
}

struct AuditOptions {
  std::uint64_t budget = 1'000'000'000;  // dominance/evaluation check cap
  int jobs = 1;
  std::uint64_t path_cap = kDefaultPathCap;
};

// ---------------------------------------------------------------------------
// Reports

struct SpViolation {
  TopProfile tops;                     // sincere tops
  int voter = 0;                       // 1-based
  Alt misreport_top = 0;
  std::optional<Preference> sincere;   // preference under which dominance fails
  std::optional<Preference> misreport; // full misreport, when the scan had one
  std::optional<Profile> profile;      // full sincere profile, when scanned
  int prefix = 0;                      // first dominated prefix length
  Lottery truthful, deviated;
};

struct UnanimityViolation {
  Alt top;
  Lottery got;
};

struct TopsOnlyViolation {
  Profile first, second;  // equal tops, different outcomes
  Lottery first_lottery, second_lottery;
};

struct AnonymityViolation {
  TopProfile tops;
  std::vector<int> perm;  // voter i reads position perm[i-1]
  Lottery base, permuted;
};

struct UncompromisingViolation {
  VertexPath path;
  int voter = 0;
  TopProfile others;  // tops of the other n-1 voters, in voter order
  Alt off_path;
  Rat at_start, at_end;
};

using AuditViolation = std::variant<SpViolation, UnanimityViolation, TopsOnlyViolation,
                                    AnonymityViolation, UncompromisingViolation>;

struct AuditReport {
  std::string property;
  bool passed = true;
  std::uint64_t cases_examined = 0;
  double wall_ms = 0.0;
  std::optional<AuditViolation> violation;
};

// ---------------------------------------------------------------------------
// Enumeration helpers

namespace detail {

inline std::uint64_t mul_saturating(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t inf = std::numeric_limits<std::uint64_t>::max();
  if (a != 0 && b > inf / a) return inf;
  return a * b;
}

inline std::uint64_t ipow_saturating(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  while (exp-- > 0) r = mul_saturating(r, base);
  return r;
}

inline void check_budget(std::uint64_t predicted, std::uint64_t budget, const char* what) {
  if (predicted > budget)
    fail(Errc::BudgetExceeded, std::string(what) + " needs ~" + std::to_string(predicted) +
                                   " checks, budget is " + std::to_string(budget));
}

// lexicographic successor of a fixed-length tuple with digits in [0, base)
inline bool next_tuple(std::vector<int>& t, int base) {
  for (int i = static_cast<int>(t.size()) - 1; i >= 0; --i) {
    if (++t[i] < base) return true;
    t[i] = 0;
  }
  return false;
}

inline void decode_tuple(std::uint64_t idx, int base, std::vector<int>& out) {
  for (int i = static_cast<int>(out.size()) - 1; i >= 0; --i) {
    out[i] = static_cast<int>(idx % base);
    idx /= base;
  }
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

// Every lottery a tops-only rule can produce over peaks^n, indexed by the
// lexicographic tuple encoding. Filled once, then read concurrently.
inline std::vector<Lottery> all_tops_lotteries(const TopsRule& rule, const std::vector<Alt>& peaks,
                                               int n) {
  std::vector<Lottery> out;
  out.reserve(ipow_saturating(peaks.size(), n));
  std::vector<int> t(n, 0);
  TopProfile tops(n);
  do {
    for (int i = 0; i < n; ++i) tops[i] = peaks[t[i]];
    out.push_back(rule.eval(tops));
  } while (next_tuple(t, static_cast<int>(peaks.size())));
  return out;
}

inline std::vector<std::vector<int>> prefs_by_top(const Domain& d, const std::vector<Alt>& peaks) {
  std::vector<std::vector<int>> by_top(peaks.size());
  for (int i = 0; i < d.size(); ++i) {
    auto it = std::lower_bound(peaks.begin(), peaks.end(), d.at(i).top());
    by_top[it - peaks.begin()].push_back(i);
  }
  return by_top;
}

inline void require_voters(int n) {
  if (n < kMinVoters) fail(Errc::DegenerateSize, "need n >= 2 voters");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Unanimity: every peak that occurs in the domain, reported unanimously, must
// come back as its own point mass.

inline AuditReport check_unanimity(const TopsRule& rule, const Domain& d, int n,
                                   AuditOptions opt = {}) {
  detail::require_voters(n);
  (void)opt;
  detail::Stopwatch sw;
  AuditReport rep;
  rep.property = "unanimity";
  for (Alt a : d.peaks()) {
    ++rep.cases_examined;
    Lottery got = rule.eval(TopProfile(n, a));
    if (!(got == unit_lottery(rule.m, a))) {
      rep.passed = false;
      rep.violation = UnanimityViolation{a, got};
      break;
    }
  }
  rep.wall_ms = sw.ms();
  return rep;
}

// ---------------------------------------------------------------------------
// Strategy-proofness, tops-only reduction: for every top profile, voter and
// misreported top, the truthful lottery must stochastically dominate the
// deviation under every sincere preference sharing the truthful top. The scan
// runs in lexicographic order and reports the smallest counterexample.

inline AuditReport check_strategy_proofness(const TopsRule& rule, const Domain& d, int n,
                                            AuditOptions opt = {}) {
  detail::require_voters(n);
  detail::Stopwatch sw;
  const std::vector<Alt> peaks = d.peaks();
  const int np = static_cast<int>(peaks.size());
  const std::uint64_t total = detail::ipow_saturating(np, n);
  detail::check_budget(
      detail::mul_saturating(total, static_cast<std::uint64_t>(n) * d.size()), opt.budget,
      "tops-only SP scan");
  const std::vector<Lottery> cache = detail::all_tops_lotteries(rule, peaks, n);
  const auto by_top = detail::prefs_by_top(d, peaks);

  std::vector<std::uint64_t> weight(n);  // place value of voter i's digit
  weight[n - 1] = 1;
  for (int i = n - 2; i >= 0; --i) weight[i] = weight[i + 1] * np;

  struct Hit {
    std::uint64_t tops_idx;
    int voter, mis_digit, sincere_pos, prefix;
  };
  const int jobs = std::max(1, opt.jobs);
  std::vector<std::optional<Hit>> hits(jobs);
  std::vector<std::uint64_t> examined(jobs, 0);

  auto worker = [&](int w) {
    std::vector<int> digits(n);
    for (std::uint64_t idx = static_cast<std::uint64_t>(w); idx < total; idx += jobs) {
      detail::decode_tuple(idx, np, digits);
      const Lottery& truth = cache[idx];
      for (int i = 0; i < n; ++i) {
        const std::uint64_t base = idx - static_cast<std::uint64_t>(digits[i]) * weight[i];
        for (int y = 0; y < np; ++y) {
          if (y == digits[i]) continue;
          const Lottery& dev = cache[base + static_cast<std::uint64_t>(y) * weight[i]];
          const auto& sincere = by_top[digits[i]];
          for (std::size_t s = 0; s < sincere.size(); ++s) {
            ++examined[w];
            if (auto k = dominance_violation(truth, dev, d.at(sincere[s]))) {
              hits[w] = Hit{idx, i, y, static_cast<int>(s), *k};
              return;
            }
          }
        }
      }
    }
  };

  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }

  AuditReport rep;
  rep.property = "strategy_proofness";
  for (auto e : examined) rep.cases_examined += e;
  std::optional<Hit> best;
  for (const auto& h : hits)
    if (h && (!best || std::tuple(h->tops_idx, h->voter, h->mis_digit, h->sincere_pos) <
                           std::tuple(best->tops_idx, best->voter, best->mis_digit,
                                      best->sincere_pos)))
      best = h;
  if (best) {
    rep.passed = false;
    std::vector<int> digits(n);
    detail::decode_tuple(best->tops_idx, np, digits);
    TopProfile tops(n);
    for (int i = 0; i < n; ++i) tops[i] = peaks[digits[i]];
    TopProfile dev_tops = tops;
    dev_tops[best->voter] = peaks[best->mis_digit];
    const Preference& sincere = d.at(by_top[digits[best->voter]][best->sincere_pos]);
    const std::uint64_t base =
        best->tops_idx - static_cast<std::uint64_t>(digits[best->voter]) * weight[best->voter];
    rep.violation =
        SpViolation{tops,
                    best->voter + 1,
                    peaks[best->mis_digit],
                    sincere,
                    std::nullopt,
                    std::nullopt,
                    best->prefix,
                    cache[best->tops_idx],
                    cache[base + static_cast<std::uint64_t>(best->mis_digit) *
                                     weight[best->voter]]};
  }
  rep.wall_ms = sw.ms();
  return rep;
}

// Full-profile variant for rules that are not known to be tops-only.
inline AuditReport check_strategy_proofness_full(const ProfileRule& rule, const Domain& d, int n,
                                                 AuditOptions opt = {}) {
  detail::require_voters(n);
  detail::Stopwatch sw;
  const std::uint64_t total = detail::ipow_saturating(d.size(), n);
  detail::check_budget(
      detail::mul_saturating(total, static_cast<std::uint64_t>(n) * d.size()), opt.budget,
      "full-profile SP scan");
  std::vector<std::optional<Lottery>> cache(total);
  std::vector<int> digits(n);
  Profile profile;
  auto lottery_at = [&](std::uint64_t idx) -> const Lottery& {
    if (!cache[idx]) {
      std::vector<int> dg(n);
      detail::decode_tuple(idx, d.size(), dg);
      Profile p;
      p.reserve(n);
      for (int i = 0; i < n; ++i) p.push_back(d.at(dg[i]));
      cache[idx] = rule.eval(p);
    }
    return *cache[idx];
  };
  std::vector<std::uint64_t> weight(n);
  weight[n - 1] = 1;
  for (int i = n - 2; i >= 0; --i) weight[i] = weight[i + 1] * d.size();

  AuditReport rep;
  rep.property = "strategy_proofness";
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    detail::decode_tuple(idx, d.size(), digits);
    const Lottery& truth = lottery_at(idx);
    for (int i = 0; i < n; ++i) {
      const std::uint64_t base = idx - static_cast<std::uint64_t>(digits[i]) * weight[i];
      for (int y = 0; y < d.size(); ++y) {
        if (y == digits[i]) continue;
        const Lottery& dev = lottery_at(base + static_cast<std::uint64_t>(y) * weight[i]);
        ++rep.cases_examined;
        if (auto k = dominance_violation(truth, dev, d.at(digits[i]))) {
          profile.clear();
          for (int j = 0; j < n; ++j) profile.push_back(d.at(digits[j]));
          rep.passed = false;
          rep.violation = SpViolation{tops_of(profile), i + 1,          d.at(y).top(),
                                      d.at(digits[i]),  d.at(y),        profile,
                                      *k,               truth,          dev};
          rep.wall_ms = sw.ms();
          return rep;
        }
      }
    }
  }
  rep.wall_ms = sw.ms();
  return rep;
}

// ---------------------------------------------------------------------------
// Local strategy-proofness: misreports restricted to preferences adjacent to
// the sincere one.

inline AuditReport check_local_strategy_proofness(const TopsRule& rule, const Domain& d, int n,
                                                  AuditOptions opt = {}) {
  detail::require_voters(n);
  detail::Stopwatch sw;
  const std::vector<Alt> peaks = d.peaks();
  const int np = static_cast<int>(peaks.size());
  const std::uint64_t total = detail::ipow_saturating(np, n);
  std::uint64_t degree_sum = 0;
  for (const auto& nbrs : d.adjacency()) degree_sum += nbrs.size();
  detail::check_budget(total, opt.budget, "local SP scan");
  detail::check_budget(
      detail::mul_saturating(detail::ipow_saturating(np, n - 1), n * degree_sum), opt.budget,
      "local SP scan");
  const std::vector<Lottery> cache = detail::all_tops_lotteries(rule, peaks, n);
  const auto by_top = detail::prefs_by_top(d, peaks);
  std::vector<std::uint64_t> weight(n);
  weight[n - 1] = 1;
  for (int i = n - 2; i >= 0; --i) weight[i] = weight[i + 1] * np;
  std::vector<int> peak_digit(d.m() + 1, -1);
  for (int i = 0; i < np; ++i) peak_digit[peaks[i]] = i;

  AuditReport rep;
  rep.property = "local_strategy_proofness";
  std::vector<int> digits(n);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    detail::decode_tuple(idx, np, digits);
    const Lottery& truth = cache[idx];
    for (int i = 0; i < n; ++i) {
      const std::uint64_t base = idx - static_cast<std::uint64_t>(digits[i]) * weight[i];
      for (int sp : by_top[digits[i]]) {
        const Preference& sincere = d.at(sp);
        for (int qj : d.adjacency()[sp]) {
          const Preference& mis = d.at(qj);
          if (mis.top() == sincere.top()) continue;  // tops-only: same outcome
          const Lottery& dev =
              cache[base + static_cast<std::uint64_t>(peak_digit[mis.top()]) * weight[i]];
          ++rep.cases_examined;
          if (auto k = dominance_violation(truth, dev, sincere)) {
            TopProfile tops(n);
            for (int j = 0; j < n; ++j) tops[j] = peaks[digits[j]];
            rep.passed = false;
            rep.violation = SpViolation{tops,         i + 1, mis.top(), sincere, mis,
                                        std::nullopt, *k,    truth,     dev};
            rep.wall_ms = sw.ms();
            return rep;
          }
        }
      }
    }
  }
  rep.wall_ms = sw.ms();
  return rep;
}

// ---------------------------------------------------------------------------
// Tops-only property: equal-tops profiles must map to equal lotteries.

inline AuditReport check_tops_only(const ProfileRule& rule, const Domain& d, int n,
                                   AuditOptions opt = {}) {
  detail::require_voters(n);
  detail::Stopwatch sw;
  const std::uint64_t total = detail::ipow_saturating(d.size(), n);
  detail::check_budget(total, opt.budget, "tops-only scan");
  const std::vector<Alt> peaks = d.peaks();
  const int np = static_cast<int>(peaks.size());
  std::vector<int> peak_digit(d.m() + 1, -1);
  for (int i = 0; i < np; ++i) peak_digit[peaks[i]] = i;

  struct Seen {
    std::uint64_t profile_idx;
    Lottery lottery;
  };
  std::vector<std::optional<Seen>> groups(detail::ipow_saturating(np, n));
  AuditReport rep;
  rep.property = "tops_only";
  std::vector<int> digits(n);
  Profile profile;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    detail::decode_tuple(idx, d.size(), digits);
    profile.clear();
    std::uint64_t tops_idx = 0;
    for (int i = 0; i < n; ++i) {
      profile.push_back(d.at(digits[i]));
      tops_idx = tops_idx * np + peak_digit[profile.back().top()];
    }
    Lottery got = rule.eval(profile);
    ++rep.cases_examined;
    if (!groups[tops_idx]) {
      groups[tops_idx] = Seen{idx, std::move(got)};
    } else if (!(groups[tops_idx]->lottery == got)) {
      std::vector<int> first_digits(n);
      detail::decode_tuple(groups[tops_idx]->profile_idx, d.size(), first_digits);
      Profile first;
      for (int i = 0; i < n; ++i) first.push_back(d.at(first_digits[i]));
      rep.passed = false;
      rep.violation = TopsOnlyViolation{first, profile, groups[tops_idx]->lottery, got};
      break;
    }
  }
  rep.wall_ms = sw.ms();
  return rep;
}

// ---------------------------------------------------------------------------
// Anonymity: invariance under voter permutations (tops-only reduction).

inline AuditReport check_anonymity(const TopsRule& rule, const Domain& d, int n,
                                   AuditOptions opt = {}) {
  detail::require_voters(n);
  detail::Stopwatch sw;
  const std::vector<Alt> peaks = d.peaks();
  const int np = static_cast<int>(peaks.size());
  const std::uint64_t total = detail::ipow_saturating(np, n);
  std::uint64_t nfact = 1;
  for (int i = 2; i <= n; ++i) nfact = detail::mul_saturating(nfact, i);
  detail::check_budget(detail::mul_saturating(total, nfact), opt.budget, "anonymity scan");
  std::vector<std::vector<int>> perms;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  const std::vector<Lottery> cache = detail::all_tops_lotteries(rule, peaks, n);

  AuditReport rep;
  rep.property = "anonymity";
  std::vector<int> digits(n);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    detail::decode_tuple(idx, np, digits);
    for (const auto& sigma : perms) {
      std::uint64_t pidx = 0;
      for (int i = 0; i < n; ++i) pidx = pidx * np + digits[sigma[i]];
      if (pidx == idx) continue;
      ++rep.cases_examined;
      if (!(cache[idx] == cache[pidx])) {
        TopProfile tops(n);
        for (int i = 0; i < n; ++i) tops[i] = peaks[digits[i]];
        std::vector<int> perm1(n);
        for (int i = 0; i < n; ++i) perm1[i] = sigma[i] + 1;
        rep.passed = false;
        rep.violation = AnonymityViolation{tops, perm1, cache[idx], cache[pidx]};
        rep.wall_ms = sw.ms();
        return rep;
      }
    }
  }
  rep.wall_ms = sw.ms();
  return rep;
}

// ---------------------------------------------------------------------------
// Uncompromising property: moving one voter's peak between the endpoints of a
// vertex-path leaves all off-path probabilities unchanged. Preconditions
// (unanimity and strategy-proofness) are verified first.

inline AuditReport check_uncompromising(const TopsRule& rule, const Domain& d, int n,
                                        AuditOptions opt = {}) {
  detail::require_voters(n);
  if (!check_unanimity(rule, d, n, opt).passed)
    fail(Errc::PreconditionFailed, "uncompromising check needs a unanimous rule");
  if (!check_strategy_proofness(rule, d, n, opt).passed)
    fail(Errc::PreconditionFailed, "uncompromising check needs a strategy-proof rule");
  detail::Stopwatch sw;
  const std::vector<Alt> peaks = d.peaks();
  const int np = static_cast<int>(peaks.size());
  detail::check_budget(
      detail::mul_saturating(detail::ipow_saturating(np, n), static_cast<std::uint64_t>(d.m())),
      opt.budget, "uncompromising scan");
  const std::vector<Lottery> cache = detail::all_tops_lotteries(rule, peaks, n);
  std::vector<int> peak_digit(d.m() + 1, -1);
  for (int i = 0; i < np; ++i) peak_digit[peaks[i]] = i;
  StrongConnGraph g = strong_conn_graph(d);

  AuditReport rep;
  rep.property = "uncompromising";
  std::vector<std::uint64_t> weight(n);
  weight[n - 1] = 1;
  for (int i = n - 2; i >= 0; --i) weight[i] = weight[i + 1] * np;

  for (Alt a : g.vertices()) {
    for (Alt b : g.vertices()) {
      if (a >= b) continue;
      if (peak_digit[a] < 0 || peak_digit[b] < 0) continue;
      for (const VertexPath& path : all_vertex_paths(g, a, b, opt.path_cap)) {
        std::vector<char> on_path(d.m() + 1, false);
        for (Alt v : path) on_path[v] = true;
        std::vector<int> others(n - 1, 0);
        do {
          for (int i = 0; i < n; ++i) {
            // tops index with voter i at the path start / end
            std::uint64_t base = 0;
            int oi = 0;
            for (int j = 0; j < n; ++j)
              base += (j == i ? 0 : static_cast<std::uint64_t>(others[oi++])) * weight[j];
            const Lottery& at_start = cache[base + peak_digit[a] * weight[i]];
            const Lottery& at_end = cache[base + peak_digit[b] * weight[i]];
            for (Alt x = 1; x <= d.m(); ++x) {
              if (on_path[x]) continue;
              ++rep.cases_examined;
              if (at_start.prob(x) != at_end.prob(x)) {
                TopProfile others_tops(n - 1);
                for (int j = 0; j < n - 1; ++j) others_tops[j] = peaks[others[j]];
                rep.passed = false;
                rep.violation = UncompromisingViolation{path,         i + 1,
                                                        others_tops,  x,
                                                        at_start.prob(x), at_end.prob(x)};
                rep.wall_ms = sw.ms();
                return rep;
              }
            }
          }
        } while (detail::next_tuple(others, np));
      }
    }
  }
  rep.wall_ms = sw.ms();
  return rep;
}

// ---------------------------------------------------------------------------
// Random-dictatorship fit over the middle interval: over all profiles with
// every top in [a_klo, a_khi], the rule must equal a fixed coefficient mix of
// the voters' peak point-masses. Returns the fitted coefficients, or nullopt.

inline std::optional<std::vector<Rat>> check_rd_on_middle(const TopsRule& rule, const Domain& d,
                                                          int n, int k_lo, int k_hi) {
  detail::require_voters(n);
  if (k_lo < 1 || k_hi > rule.m || k_lo >= k_hi) fail(Errc::InvalidThresholds, "bad thresholds");
  const std::vector<Alt> peaks = d.peaks();
  std::vector<Alt> middle;
  for (Alt a = k_lo; a <= k_hi; ++a)
    if (std::binary_search(peaks.begin(), peaks.end(), a)) middle.push_back(a);
  if (middle.size() < 2) fail(Errc::PreconditionFailed, "middle interval has fewer than two peaks");

  const Alt x = middle.front(), y = middle.back();
  std::vector<Rat> eps(n);
  for (int i = 0; i < n; ++i) {
    TopProfile tops(n, x);
    tops[i] = y;
    eps[i] = rule.eval(tops).prob(y);
  }
  std::vector<int> digits(n, 0);
  TopProfile tops(n);
  do {
    for (int i = 0; i < n; ++i) tops[i] = middle[digits[i]];
    std::vector<Rat> expect(rule.m, Rat(0));
    for (int i = 0; i < n; ++i) expect[tops[i] - 1] += eps[i];
    if (!(rule.eval(tops).probs() == expect)) return std::nullopt;
  } while (detail::next_tuple(digits, static_cast<int>(middle.size())));
  return eps;
}

// ---------------------------------------------------------------------------
// Compromise comparison: at every profile where peaks disagree but all voters
// rank the same alternative second, compare the probability the two rules put
// on that shared runner-up.

struct CompromiseCase {
  Profile profile;
  Alt compromise;
  Rat p1, p2;
};

struct CompromiseReport {
  bool weak_dominance = true;          // rule1 >= rule2 at every compromise profile
  std::optional<CompromiseCase> strict_witness;
  std::vector<CompromiseCase> cases;
  std::uint64_t profiles_examined = 0;
  bool dominates() const { return weak_dominance && strict_witness.has_value(); }
};

inline CompromiseReport compare_compromise(const ProfileRule& rule1, const ProfileRule& rule2,
                                           const Domain& d, int n, AuditOptions opt = {}) {
  detail::require_voters(n);
  const std::uint64_t total = detail::ipow_saturating(d.size(), n);
  detail::check_budget(total * 2, opt.budget, "compromise scan");
  CompromiseReport rep;
  std::vector<int> digits(n, 0);
  Profile profile;
  do {
    ++rep.profiles_examined;
    profile.clear();
    for (int i = 0; i < n; ++i) profile.push_back(d.at(digits[i]));
    const Alt second = profile.front().ranked(2);
    bool same_second = true, same_peak = true;
    for (const Preference& p : profile) {
      same_second = same_second && p.ranked(2) == second;
      same_peak = same_peak && p.top() == profile.front().top();
    }
    if (!same_second || same_peak) continue;
    CompromiseCase c{profile, second, rule1.eval(profile).prob(second),
                     rule2.eval(profile).prob(second)};
    if (c.p1 < c.p2) rep.weak_dominance = false;
    if (c.p1 > c.p2 && !rep.strict_witness) rep.strict_witness = c;
    rep.cases.push_back(std::move(c));
  } while (detail::next_tuple(digits, d.size()));
  return rep;
}

}  // namespace ballotcraft
