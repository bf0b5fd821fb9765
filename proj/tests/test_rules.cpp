#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ballotcraft/ballotcraft.hpp"
#include "fixtures.hpp"

using namespace ballotcraft;
using fixtures::lot;
using fixtures::pref;

TEST_CASE("upper coalition sets") {
  TopProfile tops{2, 4};
  CHECK(s_upper(4, tops) == 0b10);
  CHECK(s_upper(1, tops) == 0b11);
  CHECK(s_upper(5, tops) == 0);  // k = m+1
  CHECK(s_upper(3, TopProfile{2, 4, 4}) == 0b110);
}

TEST_CASE("worked example: two-voter table") {
  ProbabilisticBallots b = fixtures::table1();
  CHECK(eval_pfbr(b, {2, 4}) == lot({"0", "7/10", "1/5", "1/10"}));
  for (Alt a = 1; a <= 4; ++a) CHECK(eval_pfbr(b, {a, a}) == unit_lottery(4, a));
}

TEST_CASE("worked example: three-voter table behaves like a random dictatorship inside") {
  ProbabilisticBallots b = fixtures::table2();
  CHECK(eval_pfbr(b, {2, 4, 4}) == lot({"0", "1/3", "0", "2/3", "0"}));
  CHECK(eval_pfbr(b, {3, 5, 5}) == lot({"0", "0", "1/3", "1/3", "1/3"}));
}

TEST_CASE("evaluation refuses broken tables") {
  // swap the full- and empty-coalition ballots
  std::vector<Lottery> t = fixtures::table1().table();
  std::swap(t.front(), t.back());
  ProbabilisticBallots bad(2, 4, std::move(t));
  CHECK(!check_ballot_unanimity(bad));
  CHECK_THROWS_AS(eval_pfbr(bad, {2, 4}), Error);
}

TEST_CASE("ballot unanimity and monotonicity on the worked tables") {
  CHECK(check_ballot_unanimity(fixtures::table1()));
  CHECK(check_monotonicity(fixtures::table1()).ok);
  CHECK(check_ballot_unanimity(fixtures::table2()));
  CHECK(check_monotonicity(fixtures::table2()).ok);

  // swapping a singleton ballot with the full-coalition one breaks both
  std::vector<Lottery> t = fixtures::table1().table();
  std::swap(t[0b01], t[0b11]);
  ProbabilisticBallots bad(2, 4, std::move(t));
  auto w = check_monotonicity(bad);
  REQUIRE(!w.ok);
  CHECK(bad.suffix_mass(w.small, w.k) > bad.suffix_mass(w.large, w.k));
  CHECK((w.large & w.small) == w.small);  // witness is a cover pair
  // and it is the first cover pair in (S, T, k) scan order
  CHECK(w.small == 0b01);
  CHECK(w.large == 0b11);
  CHECK(w.k == 2);
}

TEST_CASE("constrained random dictatorship detection") {
  auto eps = check_crd(fixtures::table2(), 2, 4);
  REQUIRE(eps.has_value());
  CHECK(*eps == std::vector<Rat>{Rat(1, 3), Rat(1, 3), Rat(1, 3)});

  CHECK(!check_crd(fixtures::table1(), 2, 4).has_value());
  CHECK_THROWS_AS(check_crd(fixtures::table2(), 2, 3), Error);  // gap must exceed 1

  // single-voter tables cannot exist at all
  CHECK_THROWS_AS(ProbabilisticBallots(1, 4, {unit_lottery(4, 1), unit_lottery(4, 4)}), Error);
}

TEST_CASE("ballot anonymity") {
  CHECK(check_anonymous_ballots(fixtures::table2()));
  CHECK(!check_anonymous_ballots(fixtures::table1()));
  ProbabilisticBallots same(2, 4,
                            {unit_lottery(4, 1), lot({"1/2", "0", "0", "1/2"}),
                             lot({"1/2", "0", "0", "1/2"}), unit_lottery(4, 4)});
  CHECK(check_anonymous_ballots(same));
}

TEST_CASE("per-capita monotonicity") {
  auto r = check_per_capita(fixtures::table2(), 2, 4);
  REQUIRE(!r.ok);
  CHECK(r.size_small == 1);
  CHECK(r.size_large == 2);
  CHECK(r.side == 'R');
  CHECK(r.alt == 5);
  CHECK(r.small_pc == Rat(1, 3));
  CHECK(r.large_pc == Rat(1, 6));

  // two-point ballots at the boundary atoms with masses |S|/n and (n-|S|)/n
  ProbabilisticBallots binary = ProbabilisticBallots::from_by_size(
      3, 5,
      {unit_lottery(5, 1), lot({"2/3", "0", "0", "1/3", "0"}), lot({"0", "1/3", "0", "2/3", "0"}),
       unit_lottery(5, 5)});
  CHECK(check_per_capita(binary, 2, 4).ok);

  // n = 2 leaves nothing to compare
  ProbabilisticBallots two(2, 4,
                           {unit_lottery(4, 1), lot({"0", "1/2", "0", "1/2"}),
                            lot({"0", "1/2", "0", "1/2"}), unit_lottery(4, 4)});
  CHECK(check_per_capita(two, 2, 4).ok);

  CHECK_THROWS_AS(check_per_capita(fixtures::table1(), 2, 4), Error);  // not anonymous
  try {
    check_per_capita(fixtures::table1(), 2, 4);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::RequiresAnonymity);
  }

  CHECK(check_per_capita(fixtures::percapita_fixture(), 2, 4).ok);
}

TEST_CASE("max-min evaluation of deterministic tables") {
  // b_S = a_m only for the full coalition: the rule picks the leftmost peak
  DeterministicBallots leftmost(2, 3, {1, 1, 1, 3});
  for (Alt t1 = 1; t1 <= 3; ++t1)
    for (Alt t2 = 1; t2 <= 3; ++t2) CHECK(eval_fbr(leftmost, {t1, t2}) == std::min(t1, t2));

  DeterministicBallots mid(2, 4, {1, 2, 2, 4});
  CHECK(eval_fbr(mid, {1, 4}) == 2);
  for (Alt a = 1; a <= 4; ++a) CHECK(eval_fbr(mid, {a, a}) == a);

  DeterministicBallots broken(2, 4, {1, 4, 1, 1});  // b_N != a_m
  CHECK(!broken.ballot_unanimity());
  CHECK_THROWS_AS(eval_fbr(broken, {1, 1}), Error);
}

TEST_CASE("max-min agrees with the degenerate-table route exhaustively") {
  std::mt19937_64 rng(11);
  for (auto [n, m] : std::vector<std::pair<int, int>>{{2, 3}, {2, 5}, {3, 4}, {3, 5}}) {
    for (int trial = 0; trial < 10; ++trial) {
      DeterministicBallots f = fixtures::random_monotone_deterministic(rng, n, m);
      std::vector<int> digits(n, 0);
      TopProfile tops(n);
      do {
        for (int i = 0; i < n; ++i) tops[i] = digits[i] + 1;
        CHECK_NOTHROW(eval_fbr(f, tops));  // the cross-check lives inside
      } while ([&] {
        for (int i = n - 1; i >= 0; --i) {
          if (++digits[i] < m) return true;
          digits[i] = 0;
        }
        return false;
      }());
    }
  }
}

TEST_CASE("mixtures of deterministic tables") {
  DeterministicBallots f1(2, 4, {1, 2, 2, 4});
  CHECK(mixture_to_ballots({{Rat(1), f1}}) == f1.as_probabilistic());

  DeterministicBallots f2(2, 4, {1, 2, 3, 4});  // differs only at S = {2}
  ProbabilisticBallots mixed = mixture_to_ballots({{Rat(1, 2), f1}, {Rat(1, 2), f2}});
  CHECK(mixed.ballot(0b10) == lot({"0", "1/2", "1/2", "0"}));
  CHECK(mixed.ballot(0b01) == unit_lottery(4, 2));

  CHECK_THROWS_AS(mixture_to_ballots({{Rat(1, 2), f1}}), Error);
  CHECK_THROWS_AS(mixture_to_ballots({}), Error);
}

TEST_CASE("mixture evaluation equals mixed evaluations") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 8; ++trial) {
    int n = trial % 2 == 0 ? 2 : 3;
    int m = 4 + trial % 2;
    std::vector<std::pair<Rat, DeterministicBallots>> parts;
    for (int c = 0; c < 3; ++c)
      parts.emplace_back(Rat(1, 3), fixtures::random_monotone_deterministic(rng, n, m));
    ProbabilisticBallots mixed = mixture_to_ballots(parts);
    std::vector<int> digits(n, 0);
    TopProfile tops(n);
    do {
      for (int i = 0; i < n; ++i) tops[i] = digits[i] + 1;
      std::vector<std::pair<Rat, Lottery>> outs;
      for (const auto& [w, f] : parts) outs.emplace_back(w, unit_lottery(m, eval_fbr(f, tops)));
      CHECK(eval_pfbr(mixed, tops) == mix(outs));
    } while ([&] {
      for (int i = n - 1; i >= 0; --i) {
        if (++digits[i] < m) return true;
        digits[i] = 0;
      }
      return false;
    }());
  }
}

TEST_CASE("random dictatorship evaluation") {
  CHECK(eval_random_dictatorship({Rat(1), Rat(0)}, {3, 1}, 4) == unit_lottery(4, 3));
  CHECK(eval_random_dictatorship({Rat(1, 2), Rat(1, 2)}, {2, 2}, 4) == unit_lottery(4, 2));
  CHECK(eval_random_dictatorship({Rat(1, 3), Rat(1, 3), Rat(1, 3)}, {3, 5, 5}, 5) ==
        lot({"0", "0", "1/3", "0", "2/3"}));
  CHECK_THROWS_AS(eval_random_dictatorship({Rat(1, 2), Rat(1, 4)}, {1, 2}, 4), Error);
}

TEST_CASE("random monotone samplers produce valid tables and valid outcomes") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + trial % 2, m = 4 + trial % 2;
    ProbabilisticBallots b = trial % 2 == 0 ? fixtures::random_monotone_ballots(rng, n, m)
                                            : fixtures::random_monotone_ballots_direct(rng, n, m);
    CHECK(b.pfbr_valid());
    std::vector<int> digits(n, 0);
    TopProfile tops(n);
    do {
      for (int i = 0; i < n; ++i) tops[i] = digits[i] + 1;
      Lottery out = eval_pfbr(b, tops);  // constructor enforces lottery-ness
      Rat sum = 0;
      for (const Rat& p : out.probs()) sum += p;
      CHECK(sum == 1);
    } while ([&] {
      for (int i = n - 1; i >= 0; --i) {
        if (++digits[i] < m) return true;
        digits[i] = 0;
      }
      return false;
    }());
  }
}

TEST_CASE("by-size expansion matches the explicit table") {
  ProbabilisticBallots b = fixtures::table2();
  CHECK(b.ballot(0b001) == b.ballot(0b010));
  CHECK(b.ballot(0b001) == b.ballot(0b100));
  CHECK(b.ballot(0b011) == b.ballot(0b110));
  CHECK(b.ballot(0b011) == lot({"1/3", "0", "0", "1/3", "1/3"}));
}
