#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cantorsum {

enum class DigitMode {
  /// 0, n-1 in A, A a subset of {0..n-1}.
  canonical,
  /// Any finite set of non-negative integers, translated so min(A) = 0.
  general,
};

/// A base n together with a strictly increasing digit list A.
class DigitSet {
public:
  /// Validates the canonical invariants; digits may arrive unsorted but
  /// duplicates are rejected. Throws invalid_digit_set.
  static DigitSet canonical(std::int64_t n, std::vector<std::int64_t> digits);

  /// Oracle-only mode: digits are translated so the minimum is 0.
  static DigitSet general(std::int64_t n, std::vector<std::int64_t> digits);

  std::int64_t base() const noexcept { return n_; }
  std::span<const std::int64_t> digits() const noexcept { return digits_; }
  std::size_t size() const noexcept { return digits_.size(); }
  DigitMode mode() const noexcept { return mode_; }
  bool is_canonical() const noexcept { return mode_ == DigitMode::canonical; }
  std::int64_t max_digit() const noexcept { return digits_.back(); }
  bool contains(std::int64_t d) const noexcept;

  friend bool operator==(const DigitSet&, const DigitSet&) = default;

private:
  DigitSet(std::int64_t n, std::vector<std::int64_t> digits, DigitMode mode)
      : n_(n), digits_(std::move(digits)), mode_(mode) {}

  std::int64_t n_;
  std::vector<std::int64_t> digits_;
  DigitMode mode_;
};

/// Ordered-pair multiplicities of A + A. counts[l] is the number of
/// (a, a') in A x A with a + a' = l, for l = 0..2*max(A).
struct SumsetProfile {
  std::int64_t n = 0;
  std::vector<std::uint64_t> counts;
  std::vector<std::int64_t> support;

  /// counts[l], with 0 outside the stored range (so counts[-1] = 0).
  std::uint64_t count_at(std::int64_t l) const noexcept {
    return (l < 0 || l >= static_cast<std::int64_t>(counts.size()))
               ? 0
               : counts[static_cast<std::size_t>(l)];
  }
  std::int64_t max_sum() const noexcept {
    return static_cast<std::int64_t>(counts.size()) - 1;
  }
};

SumsetProfile sumset_profile(const DigitSet& a);

/// True iff C_A + C_A = [0, 2], i.e. consecutive elements of A + A differ
/// by at most 2. Canonical sets only; throws precondition_error otherwise.
bool is_n_good(const DigitSet& a);

/// Same decision made from an already computed profile.
bool is_n_good(const SumsetProfile& p);

/// {n-1-a : a in A}.
DigitSet reflect(const DigitSet& a);

} // namespace cantorsum
