#pragma once

// Shared test fixtures: the two worked ballot tables, the two-order multiple
// single-peaked domain, a per-capita-monotone table built to need several
// refinement rounds, and random monotone ballot samplers.

#include <initializer_list>
#include <random>
#include <vector>

#include "ballotcraft/ballotcraft.hpp"

namespace fixtures {

using namespace ballotcraft;

inline Lottery lot(std::initializer_list<const char*> xs) {
  std::vector<Rat> p;
  for (const char* s : xs) p.push_back(parse_rat(s));
  return Lottery(std::move(p));
}

inline Preference pref(std::initializer_list<Alt> xs) { return Preference(std::vector<Alt>(xs)); }

// n=2, m=4; coalition masks 0={}, 1={1}, 2={2}, 3={1,2}
inline ProbabilisticBallots table1() {
  return ProbabilisticBallots(2, 4,
                              {lot({"1", "0", "0", "0"}), lot({"1/2", "1/5", "1/10", "1/5"}),
                               lot({"2/5", "3/10", "1/5", "1/10"}), lot({"0", "0", "0", "1"})});
}

// n=3, m=5, anonymous; thresholds (2,4), coefficients 1/3 each
inline ProbabilisticBallots table2() {
  return ProbabilisticBallots::from_by_size(
      3, 5,
      {lot({"1", "0", "0", "0", "0"}), lot({"1/3", "1/3", "0", "0", "1/3"}),
       lot({"1/3", "0", "0", "1/3", "1/3"}), lot({"0", "0", "0", "0", "1"})});
}

// n=3, m=5, anonymous, CRD with coefficients 1/3, per-capita monotone, and
// non-binary supports so the decomposition needs multiple rounds.
inline ProbabilisticBallots percapita_fixture() {
  return ProbabilisticBallots::from_by_size(
      3, 5,
      {lot({"1", "0", "0", "0", "0"}), lot({"1/3", "1/3", "0", "1/6", "1/6"}),
       lot({"1/6", "1/6", "0", "1/6", "1/2"}), lot({"0", "0", "0", "0", "1"})});
}

inline std::vector<std::vector<Alt>> fig2_orders() {
  return {{1, 2, 3, 4, 5, 6}, {1, 2, 4, 3, 5, 6}};
}

inline Domain fig2_domain() { return gen_multiple_single_peaked(fig2_orders()); }

// --------------------------------------------------------------------------
// Random monotone ballot tables

inline DeterministicBallots random_monotone_deterministic(std::mt19937_64& rng, int n, int m) {
  const Coalition full = (Coalition{1} << n) - 1;
  std::vector<Alt> table(full + 1, 1);
  std::vector<Coalition> by_count;
  for (Coalition s = 0; s <= full; ++s) by_count.push_back(s);
  std::sort(by_count.begin(), by_count.end(), [](Coalition a, Coalition b) {
    return std::pair(coalition_size(a), a) < std::pair(coalition_size(b), b);
  });
  for (Coalition s : by_count) {
    if (s == 0) continue;
    Alt lo = 1;
    for (int i = 0; i < n; ++i)
      if (s & (Coalition{1} << i)) lo = std::max(lo, table[s & ~(Coalition{1} << i)]);
    table[s] = std::uniform_int_distribution<int>(lo, m)(rng);
  }
  table[full] = m;
  return DeterministicBallots(n, m, std::move(table));
}

// Mixture of a few random deterministic tables: monotone and ballot-unanimous
// by construction, with exact rational weights.
inline ProbabilisticBallots random_monotone_ballots(std::mt19937_64& rng, int n, int m,
                                                    int components = 4) {
  std::vector<std::pair<Rat, DeterministicBallots>> parts;
  std::vector<int> raw(components);
  int total = 0;
  for (int& x : raw) {
    x = std::uniform_int_distribution<int>(1, 6)(rng);
    total += x;
  }
  for (int c = 0; c < components; ++c)
    parts.emplace_back(Rat(raw[c], total), random_monotone_deterministic(rng, n, m));
  return mixture_to_ballots(parts);
}

// Direct draw of right-tail masses on a denominator grid; covers tables that
// are not obviously mixtures of the sampler above.
inline ProbabilisticBallots random_monotone_ballots_direct(std::mt19937_64& rng, int n, int m,
                                                           int denom = 24) {
  const Coalition full = (Coalition{1} << n) - 1;
  std::vector<std::vector<Rat>> tail(full + 1, std::vector<Rat>(m + 2, Rat(0)));
  std::vector<Coalition> by_count;
  for (Coalition s = 0; s <= full; ++s) by_count.push_back(s);
  std::sort(by_count.begin(), by_count.end(), [](Coalition a, Coalition b) {
    return std::pair(coalition_size(a), a) < std::pair(coalition_size(b), b);
  });
  for (Coalition s : by_count) {
    tail[s][1] = 1;
    if (s == 0) continue;
    for (int k = m; k >= 2; --k) {
      Rat lo = tail[s][k + 1];
      for (int i = 0; i < n; ++i)
        if (s & (Coalition{1} << i)) lo = std::max(lo, tail[s & ~(Coalition{1} << i)][k]);
      if (s == full) {
        tail[s][k] = 1;
        continue;
      }
      // smallest admissible numerator on the grid
      BigInt lo_num = numerator(lo) * denom;
      BigInt lo_den = denominator(lo);
      long lo_i = static_cast<long>((lo_num + lo_den - 1) / lo_den);
      long pick = std::uniform_int_distribution<long>(lo_i, denom)(rng);
      tail[s][k] = Rat(pick, denom);
    }
  }
  std::vector<Lottery> table;
  for (Coalition s = 0; s <= full; ++s) {
    std::vector<Rat> p(m);
    for (int k = 1; k <= m; ++k) p[k - 1] = tail[s][k] - tail[s][k + 1];
    table.emplace_back(std::move(p));
  }
  return ProbabilisticBallots(n, m, std::move(table));
}

}  // namespace fixtures
