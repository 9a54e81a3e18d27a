#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

#include "cantorsum/digit_set.hpp"
#include "cantorsum/typing.hpp"

namespace cantorsum {

/// {0..k} u {n-1-k..n-1} u {0, k, 2k, ..., tk} with k = floor(sqrt(n)) and
/// tk the largest multiple of k below n. Good, of size at most 3k + 3, and
/// with trivial uniqueness set. Requires n >= 9.
DigitSet sqrt_construction(std::int64_t n);

/// A u (A + 2n - k) in base 3n - k, for k in {0, 1, 2}. A must be
/// n-very-good (precondition_error otherwise). The output's very-goodness
/// is recomputed from scratch; a failure throws std::logic_error.
DigitSet tower(const DigitSet& a, int k);

/// Adjacency matrix of tower(A, k) predicted from A's matrix. With
/// p = a + c (all L) and q = b + d (all R):
///   k = 0: [[p,   q  ], [p,   q  ]]
///   k = 1: [[p,   q-1], [p-1, q  ]]
///   k = 2: [[p-1, q-1], [p-1, q-1]]
AdjacencyMatrix predicted_tower_matrix(const AdjacencyMatrix& m, int k);

struct TowerDim {
  double lambda = 0.0;
  std::int64_t n = 0;
  double dim = 0.0;
};

/// (2 lambda - k, 3n - k) and the resulting dimension.
TowerDim tower_dim(double lambda, std::int64_t n, int k);

struct TowerStep {
  /// -1 for the base row.
  int k = -1;
  DigitSet digits;
  std::int64_t n = 0;
  /// From the recurrence lambda -> 2 lambda - k.
  double lambda = 0.0;
  double dim = 0.0;
  AdjacencyMatrix predicted;
  /// Typing recomputed from the digit set itself.
  AdjacencyMatrix direct;
  /// Accumulated corrections: 1 - x = lambda_t / (2^t lambda_0) and
  /// 1 - y = n_t / (3^t n_0).
  double x_term = 0.0;
  double y_term = 0.0;
};

struct TowerChain {
  std::vector<TowerStep> steps;

  const TowerStep& base() const { return steps.front(); }
  const TowerStep& last() const { return steps.back(); }
  bool direct_matches_predicted() const;
};

using BaseTable = std::map<std::int64_t, DigitSet>;

/// Very-good sets for n = 9..27 with their best listed dimensions.
const BaseTable& default_base_table();

/// CSV with a header and columns n,digits[,...]; digits are ';'-joined.
BaseTable load_base_table(const std::filesystem::path& path);

/// Walks n_target back through n -> (n + k) / 3 (k the unique choice making
/// this integral) until n lies in [9, 27], then towers the base set back up.
/// Throws missing_base if the table lacks the required base.
TowerChain chain_to_target(std::int64_t n_target, const BaseTable& table = default_base_table());

} // namespace cantorsum
