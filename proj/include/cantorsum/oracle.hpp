#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cantorsum/digit_set.hpp"
#include "cantorsum/typing.hpp"

namespace cantorsum {

struct OracleConfig {
  /// Maximum number of entries in the level-m start table.
  std::uint64_t budget = 10'000'000;

  /// Default config, with CANTORSUM_BUDGET overriding the budget if set.
  static OracleConfig from_env();
};

/// Closed integer interval [lo, hi] in units of 1 / LevelSet::denominator.
struct Component {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  friend bool operator==(const Component&, const Component&) = default;
};

/// The level-m outer approximation E_m of C_{A+A,n}.
///
/// Cylinder starts S = sum b_i n^(m-i) are kept as a dense table indexed by
/// S, holding the number of words producing S saturated at 2. Geometry is
/// expressed in units of 1/(n^m * scale); scale is 1 whenever
/// (n-1) divides max(A+A), which covers every canonical set.
struct LevelSet {
  std::int64_t n = 0;
  int depth = 0;
  std::int64_t scale = 1;
  /// Length of one cylinder in geometry units (2 for canonical sets).
  std::int64_t cylinder_length = 0;
  std::vector<std::uint8_t> multiplicity;
  std::vector<Component> components;

  std::int64_t denominator() const;
  std::uint8_t multiplicity_at(std::int64_t start) const noexcept {
    return (start < 0 || start >= static_cast<std::int64_t>(multiplicity.size()))
               ? 0
               : multiplicity[static_cast<std::size_t>(start)];
  }
  /// Number of unit intervals [j, j+1] (in start units) covered by E_m.
  /// Only meaningful for canonical sets, where cylinders span two units.
  std::int64_t surviving_unit_intervals() const;
  /// Whether [lo, hi] (geometry units) lies inside a single component.
  bool covers(std::int64_t lo, std::int64_t hi) const;
  /// Whether the open interval (lo, hi) misses every component.
  bool misses(std::int64_t lo, std::int64_t hi) const;
};

/// Builds E_m level by level. Throws budget_exceeded (reduce the depth).
LevelSet oracle_em_intervals(const DigitSet& a, int depth,
                             const OracleConfig& config = OracleConfig::from_env());

struct LevelTyping {
  int depth = 0;
  std::int64_t left = 0;  // L_m
  std::int64_t right = 0; // R_m

  friend bool operator==(const LevelTyping&, const LevelTyping&) = default;
};

/// Unit intervals at resolution n^-m covered uniquely by the left (L_m) or
/// right (R_m) half of a single cylinder. Canonical sets only.
LevelTyping oracle_level_typing(const DigitSet& a, int depth,
                                const OracleConfig& config = OracleConfig::from_env());

/// L_m, R_m for m = 1..max_depth from one level-by-level pass.
std::vector<LevelTyping> oracle_typing_sequence(const DigitSet& a, int max_depth,
                                                const OracleConfig& config = OracleConfig::from_env());

/// How the adjacency matrix propagates (L, R) counts from one depth to the next.
enum class Orientation {
  /// (L', R') = (L, R) M, i.e. L' = a L + c R and R' = b L + d R.
  row_vector,
  /// (L', R')^T = M (L, R)^T, i.e. L' = a L + b R and R' = c L + d R.
  column_vector,
};

const char* to_string(Orientation o);

LevelTyping propagate(const AdjacencyMatrix& m, Orientation o, const LevelTyping& t);

struct OrientationResolution {
  Orientation orientation = Orientation::row_vector;
  DigitSet witness;
  LevelTyping observed;
  LevelTyping predicted_row;
  LevelTyping predicted_column;
};

/// Finds the smallest good set (by n, then subset mask) whose matrix has
/// b != c and whose depth-2 oracle counts match exactly one orientation.
OrientationResolution resolve_orientation(const OracleConfig& config = OracleConfig::from_env());

struct GrowthReport {
  Orientation orientation = Orientation::row_vector;
  /// The matrix is symmetric, so both orientations predict the same counts.
  bool orientation_ambiguous = false;
  AdjacencyMatrix matrix;
  double dim = 0.0;
  std::vector<LevelTyping> observed;
  std::vector<LevelTyping> predicted;
  /// log(L_m + R_m) / (m log n) for each observed depth.
  std::vector<double> estimates;
  bool evolution_matches = false;

  double final_error() const;
};

GrowthReport oracle_growth_check(const DigitSet& a, int max_depth, Orientation orientation,
                                 const OracleConfig& config = OracleConfig::from_env());

} // namespace cantorsum
