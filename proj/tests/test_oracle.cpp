#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

#include "cantorsum/constructions.hpp"
#include "cantorsum/errors.hpp"
#include "cantorsum/oracle.hpp"
#include "support/brute.hpp"

using namespace cantorsum;

namespace {

DigitSet set(std::int64_t n, std::vector<std::int64_t> d) { return DigitSet::canonical(n, std::move(d)); }

OracleConfig big_budget() {
  OracleConfig c;
  c.budget = 50'000'000;
  return c;
}

} // namespace

TEST_CASE("budget defaults and environment override") {
  ::unsetenv("CANTORSUM_BUDGET");
  CHECK(OracleConfig::from_env().budget == 10'000'000);
  ::setenv("CANTORSUM_BUDGET", "1e3", 1);
  CHECK(OracleConfig::from_env().budget == 1000);
  CHECK_THROWS_AS(oracle_em_intervals(set(5, {0, 2, 4}), 6, OracleConfig::from_env()), budget_exceeded);
  ::unsetenv("CANTORSUM_BUDGET");
}

TEST_CASE("level typing for n=3 {0,2}") {
  const auto a = set(3, {0, 2});
  CHECK(oracle_level_typing(a, 1) == LevelTyping{1, 2, 2});
  CHECK(oracle_level_typing(a, 2) == LevelTyping{2, 4, 4});
  const auto seq = oracle_typing_sequence(a, 6);
  REQUIRE(seq.size() == 6);
  for (int m = 1; m <= 6; ++m) {
    CHECK(seq[m - 1].left == (std::int64_t{1} << m));
    CHECK(seq[m - 1].right == (std::int64_t{1} << m));
  }
}

TEST_CASE("level typing for n=8 {0,2,5,7}") {
  CHECK(oracle_level_typing(set(8, {0, 2, 5, 7}), 1) == LevelTyping{1, 3, 3});
  const auto g = oracle_growth_check(set(8, {0, 2, 5, 7}), 5, Orientation::row_vector);
  CHECK(g.evolution_matches);
  for (std::size_t i = 1; i < g.observed.size(); ++i) {
    const auto now = g.observed[i].left + g.observed[i].right;
    const auto before = g.observed[i - 1].left + g.observed[i - 1].right;
    CHECK(now == 3 * before);
  }
}

TEST_CASE("trivial sets keep one unique interval at each end") {
  const auto a = sqrt_construction(101);
  for (const auto& t : oracle_typing_sequence(a, 3)) {
    CHECK(t.left == 1);
    CHECK(t.right == 1);
  }
}

TEST_CASE("level sets of the examples") {
  // n=3 {0,2}: one component at every depth
  for (int m = 1; m <= 8; ++m) {
    const auto level = oracle_em_intervals(set(3, {0, 2}), m);
    REQUIRE(level.components.size() == 1);
    CHECK(level.components[0] == Component{0, 2 * level.denominator()});
  }

  // n=5 {0,1,4} at depth 3: (7/5, 8/5) is a gap
  const auto mixed = oracle_em_intervals(set(5, {0, 1, 4}), 3);
  CHECK(mixed.misses(7 * 25, 8 * 25));
  CHECK_FALSE(mixed.misses(7 * 25 - 1, 8 * 25));

  // n=5 {0,1,7,8}: three components near [0,6/5], [7/5,13/5], [14/5,4]
  const auto three = oracle_em_intervals(DigitSet::general(5, {0, 1, 7, 8}), 4);
  REQUIRE(three.components.size() == 3);
  const double d = static_cast<double>(three.denominator());
  const double expect[3][2] = {{0.0, 1.2}, {1.4, 2.6}, {2.8, 4.0}};
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(three.components[i].lo / d - expect[i][0]) < 0.01);
    CHECK(std::abs(three.components[i].hi / d - expect[i][1]) < 0.01);
  }
}

TEST_CASE("level sets agree with explicit word expansion") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const std::int64_t n = 3 + static_cast<std::int64_t>(rng() % 8);
    const auto digits = brute::random_set(n, rng);
    const int m = 1 + static_cast<int>(rng() % 3);
    const auto level = oracle_em_intervals(set(n, digits), m);
    const auto ref = brute::components(n, digits, m);
    REQUIRE(level.components.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      CHECK(level.components[i].lo == ref[i].first);
      CHECK(level.components[i].hi == ref[i].second);
    }
    const auto starts = brute::word_starts(n, digits, m);
    for (auto [s, c] : starts)
      CHECK(level.multiplicity_at(s) == std::min<std::int64_t>(c, 2));
    CHECK(starts.begin()->first == 0);
    std::int64_t top = 0;
    for (std::int64_t p = 1; p <= m; ++p)
      top = top * n + (2 * n - 2);
    CHECK(starts.rbegin()->first == top);

    const auto t = oracle_level_typing(set(n, digits), m);
    const auto bt = brute::unique_halves(n, digits, m);
    CHECK(t.left == bt.left);
    CHECK(t.right == bt.right);
  }
}

TEST_CASE("every two-digit word over n=3 {0,2} at depth 2") {
  // B = {0,2,4} with counts {1,2,1}: the unique starts are 0, 4, 12, 16
  const auto level = oracle_em_intervals(set(3, {0, 2}), 2);
  std::vector<std::int64_t> unique;
  for (std::int64_t s = 0; s <= 16; ++s)
    if (level.multiplicity_at(s) == 1)
      unique.push_back(s);
  CHECK(unique == std::vector<std::int64_t>{0, 4, 12, 16});
}

TEST_CASE("general mode level sets") {
  const auto a = DigitSet::general(4, {0, 5});
  const auto level = oracle_em_intervals(a, 3);
  CHECK(level.scale * level.cylinder_length > 0);
  // B = {0,5,10}: the attractor spans [0, 10/3], cylinders are 10/3 long
  CHECK(level.scale == 3);
  CHECK(level.cylinder_length == 10);
  std::vector<Component> ref;
  for (auto [s, c] : brute::word_starts(4, {0, 5}, 3)) {
    const Component k{3 * s, 3 * s + 10};
    if (!ref.empty() && k.lo <= ref.back().hi)
      ref.back().hi = std::max(ref.back().hi, k.hi);
    else
      ref.push_back(k);
  }
  CHECK(level.components == ref);
  CHECK_THROWS_AS(oracle_level_typing(a, 2), precondition_error);
}

TEST_CASE("orientation is resolved to the row-vector form") {
  const auto r = resolve_orientation();
  CHECK(r.orientation == Orientation::row_vector);
  CHECK(r.observed == r.predicted_row);
  CHECK_FALSE(r.observed == r.predicted_column);
}

TEST_CASE("propagation in both orientations") {
  const AdjacencyMatrix m{2, 0, 2, 2};
  CHECK(propagate(m, Orientation::row_vector, {1, 4, 2}) == LevelTyping{2, 12, 4});
  CHECK(propagate(m, Orientation::column_vector, {1, 4, 2}) == LevelTyping{2, 8, 12});
}

TEST_CASE("matrix-power evolution holds for every nontrivial good set up to n=9") {
  const auto cfg = big_budget();
  for (std::int64_t n = 3; n <= 9; ++n)
    brute::for_each_set(n, [&](const brute::Digits& d) {
      const auto a = set(n, d);
      const auto r = analyze_uniqueness(a);
      if (!r.good || r.trivial)
        return;
      const auto g = oracle_growth_check(a, 5, Orientation::row_vector, cfg);
      CHECK(g.evolution_matches);
      CHECK(g.orientation_ambiguous == (r.matrix.b == r.matrix.c));
      CHECK(g.observed.front() == LevelTyping{1, r.matrix.a + r.matrix.c, r.matrix.b + r.matrix.d});
    });
}

TEST_CASE("goodness matches a connected E_8 for all n <= 8") {
  const auto cfg = big_budget();
  for (std::int64_t n = 3; n <= 8; ++n)
    brute::for_each_set(n, [&](const brute::Digits& d) {
      const auto a = set(n, d);
      bool connected = true;
      for (int m = 1; m <= 8 && connected; ++m) {
        const auto level = oracle_em_intervals(a, m, cfg);
        connected = level.components.size() == 1 &&
                    level.components[0] == Component{0, 2 * level.denominator()};
      }
      CHECK(connected == is_n_good(a));
    });
}

TEST_CASE("E_{m+1} lies inside E_m") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const std::int64_t n = 3 + static_cast<std::int64_t>(rng() % 8);
    const auto a = set(n, brute::random_set(n, rng));
    for (int m = 1; m < 5; ++m) {
      const auto coarse = oracle_em_intervals(a, m);
      const auto fine = oracle_em_intervals(a, m + 1);
      for (const auto& c : fine.components) {
        const bool inside = std::any_of(coarse.components.begin(), coarse.components.end(), [&](const Component& k) {
          return k.lo * n <= c.lo && c.hi <= k.hi * n;
        });
        CHECK(inside);
      }
    }
  }
}
