#include "cantorsum/digit_set.hpp"

#include <algorithm>
#include <string>

#include "cantorsum/errors.hpp"

namespace cantorsum {

namespace {

void sort_and_check_unique(std::vector<std::int64_t>& digits) {
  if (digits.size() < 2)
    throw invalid_digit_set("a digit set needs at least two digits");
  std::sort(digits.begin(), digits.end());
  if (std::adjacent_find(digits.begin(), digits.end()) != digits.end())
    throw invalid_digit_set("duplicate digit");
}

} // namespace

DigitSet DigitSet::canonical(std::int64_t n, std::vector<std::int64_t> digits) {
  if (n < 3)
    throw invalid_digit_set("base must be at least 3, got " + std::to_string(n));
  sort_and_check_unique(digits);
  if (digits.front() != 0)
    throw invalid_digit_set("0 must be a digit");
  if (digits.back() != n - 1)
    throw invalid_digit_set("n-1 = " + std::to_string(n - 1) + " must be the largest digit");
  return DigitSet(n, std::move(digits), DigitMode::canonical);
}

DigitSet DigitSet::general(std::int64_t n, std::vector<std::int64_t> digits) {
  if (n < 2)
    throw invalid_digit_set("base must be at least 2, got " + std::to_string(n));
  sort_and_check_unique(digits);
  const std::int64_t shift = digits.front();
  for (auto& d : digits)
    d -= shift;
  return DigitSet(n, std::move(digits), DigitMode::general);
}

bool DigitSet::contains(std::int64_t d) const noexcept {
  return std::binary_search(digits_.begin(), digits_.end(), d);
}

SumsetProfile sumset_profile(const DigitSet& a) {
  SumsetProfile p;
  p.n = a.base();
  p.counts.assign(static_cast<std::size_t>(2 * a.max_digit() + 1), 0);
  const auto digits = a.digits();
  for (const auto x : digits)
    for (const auto y : digits)
      ++p.counts[static_cast<std::size_t>(x + y)];
  for (std::size_t l = 0; l < p.counts.size(); ++l)
    if (p.counts[l] != 0)
      p.support.push_back(static_cast<std::int64_t>(l));
  return p;
}

bool is_n_good(const SumsetProfile& p) {
  for (std::size_t i = 1; i < p.support.size(); ++i)
    if (p.support[i] - p.support[i - 1] > 2)
      return false;
  return true;
}

bool is_n_good(const DigitSet& a) {
  if (!a.is_canonical())
    throw precondition_error("n-goodness is defined for canonical digit sets only");
  return is_n_good(sumset_profile(a));
}

DigitSet reflect(const DigitSet& a) {
  if (!a.is_canonical())
    throw precondition_error("reflect expects a canonical digit set");
  std::vector<std::int64_t> out;
  out.reserve(a.size());
  for (const auto d : a.digits())
    out.push_back(a.base() - 1 - d);
  return DigitSet::canonical(a.base(), std::move(out));
}

} // namespace cantorsum
