#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cantorsum/digit_set.hpp"
#include "cantorsum/oracle.hpp"

namespace cantorsum {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  /// Reduced to lowest terms with a positive denominator.
  static Rational make(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
};

std::string to_string(const Rational& r);

/// [lo, hi] for intervals, (lo, hi) for gaps.
struct RationalInterval {
  Rational lo;
  Rational hi;
  /// Depth at which the witness was found (0 for the whole of [0, 2]).
  int depth = 0;
};

/// Indicators for the unit interval [j, j+1] at some level:
/// x = j is a cylinder start, y = j-1 is a cylinder start.
struct CoverState {
  bool x = false;
  bool y = false;

  bool survives() const noexcept { return x || y; }
  /// 0 for (1,0), 1 for (0,1), 2 for (1,1); only valid when survives().
  int index() const noexcept { return x && y ? 2 : (x ? 0 : 1); }
  static CoverState from_index(int i) noexcept { return {i != 1, i != 0}; }

  friend bool operator==(const CoverState&, const CoverState&) = default;
};

/// The finite-state description of which unit intervals of E_m survive.
class CoveringAutomaton {
public:
  explicit CoveringAutomaton(const SumsetProfile& p);

  std::int64_t base() const noexcept { return n_; }
  bool in_sumset(std::int64_t b) const noexcept {
    return b >= 0 && b < static_cast<std::int64_t>(member_.size()) && member_[static_cast<std::size_t>(b)];
  }

  /// State of child r = 0..n-1 of a unit interval in state s.
  CoverState child(CoverState s, std::int64_t r) const noexcept;
  /// State of level-1 unit interval j = 0..2n-1.
  CoverState seed(std::int64_t j) const noexcept { return {in_sumset(j), in_sumset(j - 1)}; }

  /// Greatest fixed point: states all of whose descendants survive forever.
  bool full(CoverState s) const noexcept { return s.survives() && full_[s.index()]; }
  /// Reachable from some level-1 seed (at any depth >= 1).
  bool reachable(CoverState s) const noexcept { return s.survives() && reachable_[s.index()]; }
  /// Some reachable unit interval at some depth fails to survive.
  bool dead_reachable() const noexcept { return dead_reachable_; }
  bool full_reachable() const noexcept;

  /// Fewest further levels from s to a full state, or -1 if none.
  int levels_to_full(CoverState s) const noexcept;

  /// State of unit interval j at the given depth, from its base-n digits.
  CoverState state_at(std::int64_t j, int depth) const;

private:
  std::int64_t n_;
  std::vector<bool> member_;
  std::array<bool, 3> full_{};
  std::array<bool, 3> reachable_{};
  std::array<int, 3> to_full_{};
  bool dead_reachable_ = false;
};

enum class StructureCase { full_interval, cantor_set, mixed };

const char* to_string(StructureCase c);

struct StructureReport {
  StructureCase structure = StructureCase::full_interval;
  std::optional<RationalInterval> gap_witness;
  std::optional<RationalInterval> interval_witness;
  std::optional<double> points_dim_lower_bound;
  int witness_depth_cap = 12;
};

/// Which of full interval / Cantor set / mixed C_A + C_A is. Canonical only.
StructureReport classify_structure(const DigitSet& a, int witness_depth_cap = 12);

struct CantorDimension {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  /// log|B| / log n under the open set condition; otherwise a box-count bracket.
  bool exact = false;
  /// Deepest oracle level used for the bracket (0 when exact).
  int depth = 0;

  double width() const { return upper - lower; }
};

/// Hausdorff dimension of C_A + C_A when it is a Cantor set. Throws
/// not_applicable for full-interval and mixed inputs.
CantorDimension cantor_sum_dimension(const DigitSet& a,
                                     const OracleConfig& config = OracleConfig::from_env());

} // namespace cantorsum
