#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cantorsum/digit_set.hpp"
#include "cantorsum/typing.hpp"

namespace cantorsum {

struct SearchConstraints {
  bool require_good = false;
  bool require_very_good = false;
};

struct SearchRecord {
  std::int64_t n = 0;
  std::vector<std::int64_t> digits;
  bool good = false;
  bool very_good = false;
  AdjacencyMatrix matrix;
  double lambda = 1.0;
  double dim = 0.0;
};

/// Recomputes a record from its digits through the scalar reference path.
SearchRecord make_record(const DigitSet& a);

/// Larger lambda wins; equal lambdas go to the lexicographically smaller
/// digit list.
bool better(const SearchRecord& x, const SearchRecord& y);

inline double conjectured_bound() { return 0.63092975357145743710; } // log 2 / log 3

struct InvariantViolations {
  std::uint64_t dichotomy = 0;    // lambda strictly between 1 and 2
  std::uint64_t containment = 0;  // good and lambda > |A|
  std::uint64_t size_bound = 0;   // good and |A|^2 < n
  std::uint64_t corollary = 0;    // 1, n-2 not in A but lambda < 2

  std::uint64_t total() const { return dichotomy + containment + size_bound + corollary; }
  InvariantViolations& operator+=(const InvariantViolations& o);
};

struct SearchStats {
  std::uint64_t evaluated = 0;
  std::uint64_t feasible = 0;
  InvariantViolations violations;
  /// Feasible records with dim > log 2 / log 3 + 1e-9.
  std::uint64_t conjecture_exceedances = 0;
  /// The first few such records, smallest mask first (exhaustive search).
  std::vector<SearchRecord> exceedance_examples;
};

struct SearchResult {
  std::optional<SearchRecord> best;
  SearchStats stats;
};

/// Bit-parallel evaluation of one digit set given as an n-bit word
/// (bit i set iff i in A), n <= 32.
struct KernelResult {
  bool good = false;
  bool very_good = false;
  AdjacencyMatrix matrix;
};
KernelResult evaluate_mask(std::uint64_t mask, int n);

/// Reverses the low n bits (the reflection a -> n-1-a).
std::uint64_t reflect_mask(std::uint64_t mask, int n);

struct ExhaustiveOptions {
  /// 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Called in increasing mask order for every feasible reflection
  /// representative. Setting a sink makes the search single-threaded.
  std::function<void(const SearchRecord&)> sink;
};

inline constexpr int kMaxExhaustiveN = 30;

/// All A with 0, n-1 in A, one per reflection pair. Throws
/// infeasible_search for n > 30 and precondition_error for n < 3.
SearchResult search_exhaustive(int n, const SearchConstraints& constraints,
                               const ExhaustiveOptions& options = {});

/// Randomised hill climbing over single-digit flips, restarting from
/// tower-chain seeds and random good sets. Deterministic for a given seed.
SearchResult search_heuristic(std::int64_t n, std::uint64_t budget, std::uint64_t seed,
                              const SearchConstraints& constraints = {true, false});

struct FigureOptions {
  std::uint64_t budget = 20'000;
  std::uint64_t seed = 1;
  /// Exhaustive search is used up to this n.
  int exhaustive_limit = 20;
  unsigned threads = 0;
};

struct FigureRow {
  std::int64_t n = 0;
  double best_dim = 0.0;
  double reference = conjectured_bound();
  SearchRecord record;
  /// "exhaustive", "heuristic" or "tower".
  const char* source = "";
  SearchStats stats;
};

/// Largest known dim U_A over good A for each n in [n_lo, n_hi].
std::vector<FigureRow> figure_data(std::int64_t n_lo, std::int64_t n_hi, const FigureOptions& options = {});

} // namespace cantorsum
