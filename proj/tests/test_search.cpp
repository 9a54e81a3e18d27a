#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "cantorsum/errors.hpp"
#include "cantorsum/io.hpp"
#include "cantorsum/search.hpp"
#include "support/brute.hpp"

using namespace cantorsum;

namespace {

constexpr double kTol = 1e-9;

bool same(const AdjacencyMatrix& x, const AdjacencyMatrix& y) {
  return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
}

std::string row(const SearchResult& r) { return r.best ? csv::search_row(*r.best) : std::string("none"); }

} // namespace

TEST_CASE("bit kernel agrees with the scalar path") {
  auto check_mask = [](std::uint64_t mask, int n) {
    const auto digits = brute::from_mask(mask, n);
    const auto a = DigitSet::canonical(n, digits);
    const auto r = analyze_uniqueness(a);
    const auto k = evaluate_mask(mask, n);
    CHECK(k.good == r.good);
    CHECK(k.very_good == r.very_good);
    CHECK(same(k.matrix, r.matrix));
  };
  for (int n = 3; n <= 12; ++n)
    brute::for_each_set(n, [&](const brute::Digits& d) {
      std::uint64_t mask = 0;
      for (auto x : d)
        mask |= std::uint64_t{1} << x;
      check_mask(mask, n);
    });
  std::mt19937_64 rng(41);
  for (int i = 0; i < 3000; ++i) {
    const int n = 13 + static_cast<int>(rng() % 19);
    const std::uint64_t inner = rng() & ((std::uint64_t{1} << (n - 2)) - 1);
    check_mask(1u | (inner << 1) | (std::uint64_t{1} << (n - 1)), n);
  }
}

TEST_CASE("mask reflection") {
  CHECK(reflect_mask(0b10011, 5) == 0b11001);
  CHECK(reflect_mask(0b10100101, 8) == 0b10100101);
}

TEST_CASE("exhaustive search over very-good sets") {
  auto r = search_exhaustive(9, {true, true});
  REQUIRE(r.best);
  CHECK(std::abs(r.best->dim - 0.6309297534) < kTol);
  CHECK(r.best->digits == std::vector<std::int64_t>{0, 2, 6, 8});

  r = search_exhaustive(12, {true, true});
  REQUIRE(r.best);
  CHECK(std::abs(r.best->dim - 0.4421141088) < kTol);
  const auto listed = make_record(DigitSet::canonical(12, {0, 2, 3, 5, 9, 11}));
  CHECK(std::abs(listed.dim - r.best->dim) < kTol);
  CHECK_FALSE(better(listed, *r.best));
}

TEST_CASE("exhaustive n=4 over good sets") {
  // the four sets containing {0,3}
  double best = -1.0;
  for (auto d : std::vector<brute::Digits>{{0, 3}, {0, 1, 3}, {0, 2, 3}, {0, 1, 2, 3}}) {
    const auto digits = d;
    if (!brute::gaps_at_most_two(digits))
      continue;
    const auto rho = brute::spectral_radius(brute::matrix_of(brute::typing(4, digits)));
    const bool one = std::abs(rho - 1.0) < kTol;
    CHECK((one || rho >= 2.0 - kTol));
    best = std::max(best, one ? 0.0 : std::log(rho) / std::log(4.0));
  }
  const auto r = search_exhaustive(4, {true, false});
  REQUIRE(r.best);
  CHECK(std::abs(r.best->dim - best) < kTol);
}

TEST_CASE("exhaustive search refuses out-of-range n") {
  CHECK_THROWS_AS(search_exhaustive(31, {}), infeasible_search);
  CHECK_THROWS_AS(search_exhaustive(2, {}), precondition_error);
}

TEST_CASE("exhaustive output is reflection-canonical and in mask order") {
  for (int n = 3; n <= 14; ++n) {
    std::vector<SearchRecord> seen;
    ExhaustiveOptions opts;
    opts.sink = [&](const SearchRecord& r) { seen.push_back(r); };
    const auto res = search_exhaustive(n, {}, opts);
    std::set<std::vector<std::int64_t>> sets;
    for (const auto& r : seen)
      sets.insert(r.digits);
    CHECK(sets.size() == seen.size());
    for (const auto& r : seen)
      if (brute::reflect(n, r.digits) != r.digits)
        CHECK_FALSE(sets.contains(brute::reflect(n, r.digits)));
    // reps + palindromes cover all 2^(n-2) sets
    std::uint64_t palindromes = 0;
    for (const auto& r : seen)
      palindromes += brute::reflect(n, r.digits) == r.digits;
    CHECK(2 * seen.size() - palindromes == (std::uint64_t{1} << (n - 2)));
    CHECK(res.stats.feasible == seen.size());
    CHECK(res.stats.violations.total() == 0);
    for (const auto& r : seen) {
      const auto ref = make_record(DigitSet::canonical(n, r.digits));
      CHECK(std::abs(ref.dim - r.dim) < 1e-12);
      CHECK(ref.good == r.good);
    }
  }
}

TEST_CASE("exhaustive result does not depend on the thread count") {
  for (int n : {16, 19, 21}) {
    for (SearchConstraints c : {SearchConstraints{}, SearchConstraints{true, false}, SearchConstraints{true, true}}) {
      ExhaustiveOptions one, four;
      one.threads = 1;
      four.threads = 4;
      const auto a = search_exhaustive(n, c, one), b = search_exhaustive(n, c, four);
      CHECK(row(a) == row(b));
      CHECK(a.stats.feasible == b.stats.feasible);
      CHECK(a.stats.evaluated == b.stats.evaluated);
      CHECK(a.stats.conjecture_exceedances == b.stats.conjecture_exceedances);
    }
  }
}

TEST_CASE("very-good maxima up to n=18 equal the listed base values") {
  const std::map<int, double> listed{{9, .6309297534},  {10, .4771212549}, {11, .4581569101}, {12, .4421141088},
                                     {13, .5404763090}, {14, .5252990700}, {15, .5119160496}, {16, .5000000000},
                                     {17, .4893010842}, {18, .4796249332}};
  for (const auto& [n, dim] : listed) {
    CAPTURE(n);
    const auto r = search_exhaustive(n, {true, true});
    REQUIRE(r.best);
    CHECK(std::abs(r.best->dim - dim) < kTol);
    CHECK(r.stats.conjecture_exceedances == 0);
  }
}

TEST_CASE("heuristic search") {
  auto r = search_heuristic(3, 100, 1);
  REQUIRE(r.best);
  CHECK(r.best->digits == std::vector<std::int64_t>{0, 2});
  CHECK(std::abs(r.best->dim - std::log(2.0) / std::log(3.0)) < kTol);

  r = search_heuristic(9, 10'000, 1);
  REQUIRE(r.best);
  CHECK(std::abs(r.best->dim - 0.6309297534) < kTol);

  r = search_heuristic(51, 100'000, 1);
  REQUIRE(r.best);
  CHECK(r.best->good);
  CHECK(r.best->dim >= std::log(8.0) / std::log(51.0) - kTol);

  r = search_heuristic(40, 5'000, 3, {true, true});
  REQUIRE(r.best);
  CHECK(r.best->very_good);
}

TEST_CASE("heuristic search is deterministic per seed") {
  const auto a = search_heuristic(100, 20'000, 7), b = search_heuristic(100, 20'000, 7);
  CHECK(row(a) == row(b));
  CHECK(a.stats.evaluated == b.stats.evaluated);
  CHECK(a.stats.evaluated <= 20'000);
  REQUIRE(a.best);
  const auto again = make_record(DigitSet::canonical(100, a.best->digits));
  CHECK(again.good);
  CHECK(std::abs(again.dim - a.best->dim) < 1e-12);
}

TEST_CASE("figure data") {
  FigureOptions opts;
  opts.budget = 5'000;
  const auto rows = figure_data(9, 10, opts);
  REQUIRE(rows.size() == 2);
  CHECK(std::abs(rows[0].best_dim - 0.6309297534) < kTol);
  CHECK(rows[1].best_dim >= 0.4771212549 - kTol);
  CHECK(std::abs(rows[0].reference - std::log(2.0) / std::log(3.0)) < 1e-15);

  const auto far = figure_data(27, 27, opts);
  CHECK(std::abs(far[0].best_dim - 0.6309297534) < kTol);
}
