#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cantorsum/digit_set.hpp"

namespace cantorsum {

/// Type of the interval I_l = [l/n, (l+1)/n] inside [0, 2].
enum class IntervalType : char { L = 'L', R = 'R', O = 'O' };

/// Adjacency counts of the two-node graph-directed system.
///   a = #L in the lower half, b = #R in the lower half,
///   c = #L in the upper half, d = #R in the upper half.
struct AdjacencyMatrix {
  std::int64_t a = 0, b = 0, c = 0, d = 0;

  friend bool operator==(const AdjacencyMatrix&, const AdjacencyMatrix&) = default;
};

/// Perron eigenvalue of [[a,b],[c,d]] in closed form.
double perron_eigenvalue(const AdjacencyMatrix& m);

/// Exact test for a Perron eigenvalue equal to 1 (integer arithmetic only):
/// the eigenvalues are 1 and a+d-1 iff (1-a)(1-d) = bc.
bool perron_is_one(const AdjacencyMatrix& m);

struct TypingProfile {
  std::int64_t n = 0;
  std::vector<IntervalType> types; // 2n entries
  AdjacencyMatrix matrix;

  /// "LROOLOOO OOORLOLR": lower and upper halves separated by a space.
  std::string to_string() const;
};

/// L iff counts[l] = 1 and counts[l-1] = 0; R iff counts[l-1] = 1 and
/// counts[l] = 0; O otherwise. Quadrants split at l = n.
TypingProfile classify_intervals(const SumsetProfile& p);

struct UniquenessReport {
  double lambda = 1.0;
  double dim = 0.0;
  bool trivial = true;
  bool very_good = false;
  /// Whether A is n-good. When false the numbers describe the attractor of
  /// the graph-directed system built from the typing, not U_A itself.
  bool good = false;
  AdjacencyMatrix matrix;
};

UniquenessReport uniqueness_report(const TypingProfile& t, const DigitSet& a);

/// As above with goodness already known (saves recomputing A + A).
UniquenessReport uniqueness_report(const TypingProfile& t, const DigitSet& a, bool good);

/// Convenience: profile, typing and report in one go.
UniquenessReport analyze_uniqueness(const DigitSet& a);

/// (1 not in A and n-2 not in A) implies lambda >= 2.
bool check_corollary_bound(const DigitSet& a, const UniquenessReport& r);

/// Shared by the scalar path and the bit-parallel search kernel.
bool is_very_good(bool good, bool has_one, bool has_n_minus_two, const AdjacencyMatrix& m);

inline constexpr double kDimTolerance = 1e-9;

} // namespace cantorsum
