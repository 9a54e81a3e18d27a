#include "cantorsum/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cantorsum/errors.hpp"

namespace cantorsum {

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0)
    throw std::domain_error("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

std::string to_string(const Rational& r) {
  return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
}

const char* to_string(StructureCase c) {
  switch (c) {
  case StructureCase::full_interval:
    return "FullInterval";
  case StructureCase::cantor_set:
    return "CantorSet";
  case StructureCase::mixed:
    return "Mixed";
  }
  return "?";
}

CoveringAutomaton::CoveringAutomaton(const SumsetProfile& p) : n_(p.n), member_(p.counts.size()) {
  for (const auto b : p.support)
    member_[static_cast<std::size_t>(b)] = true;

  full_.fill(true);
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < 3; ++i) {
      if (!full_[i])
        continue;
      for (std::int64_t r = 0; r < n_; ++r) {
        const auto c = child(CoverState::from_index(i), r);
        if (!c.survives() || !full_[c.index()]) {
          full_[i] = false;
          changed = true;
          break;
        }
      }
    }
  }

  std::vector<int> frontier;
  auto visit = [&](CoverState s) {
    if (!s.survives()) {
      dead_reachable_ = true;
    } else if (!reachable_[s.index()]) {
      reachable_[s.index()] = true;
      frontier.push_back(s.index());
    }
  };
  for (std::int64_t j = 0; j < 2 * n_; ++j)
    visit(seed(j));
  while (!frontier.empty()) {
    const int i = frontier.back();
    frontier.pop_back();
    for (std::int64_t r = 0; r < n_; ++r)
      visit(child(CoverState::from_index(i), r));
  }

  for (int i = 0; i < 3; ++i)
    to_full_[i] = full_[i] ? 0 : -1;
  for (int round = 0; round < 3; ++round) {
    for (int i = 0; i < 3; ++i) {
      for (std::int64_t r = 0; r < n_; ++r) {
        const auto c = child(CoverState::from_index(i), r);
        if (!c.survives() || to_full_[c.index()] < 0)
          continue;
        const int d = to_full_[c.index()] + 1;
        if (to_full_[i] < 0 || d < to_full_[i])
          to_full_[i] = d;
      }
    }
  }
}

CoverState CoveringAutomaton::child(CoverState s, std::int64_t r) const noexcept {
  return {(s.x && in_sumset(r)) || (s.y && in_sumset(n_ + r)),
          (s.x && in_sumset(r - 1)) || (s.y && in_sumset(n_ + r - 1))};
}

bool CoveringAutomaton::full_reachable() const noexcept {
  for (int i = 0; i < 3; ++i)
    if (full_[i] && reachable_[i])
      return true;
  return false;
}

int CoveringAutomaton::levels_to_full(CoverState s) const noexcept {
  return s.survives() ? to_full_[s.index()] : -1;
}

CoverState CoveringAutomaton::state_at(std::int64_t j, int depth) const {
  if (depth < 1)
    throw precondition_error("state_at needs depth >= 1");
  std::vector<std::int64_t> digits;
  for (int d = depth; d > 1; --d) {
    digits.push_back(j % n_);
    j /= n_;
  }
  if (j < 0 || j >= 2 * n_)
    return {};
  CoverState s = seed(j);
  for (auto it = digits.rbegin(); it != digits.rend() && s.survives(); ++it)
    s = child(s, *it);
  return s;
}

namespace {

std::int64_t checked_power(std::int64_t n, int e) {
  __int128 p = 1;
  for (int i = 0; i < e; ++i) {
    p *= n;
    if (p > std::numeric_limits<std::int64_t>::max())
      throw std::overflow_error("witness denominator overflows 64 bits");
  }
  return static_cast<std::int64_t>(p);
}

} // namespace

StructureReport classify_structure(const DigitSet& a, int witness_depth_cap) {
  if (!a.is_canonical())
    throw precondition_error("structure classification needs a canonical digit set");
  const std::int64_t n = a.base();
  const auto profile = sumset_profile(a);

  StructureReport report;
  report.witness_depth_cap = witness_depth_cap;
  if (is_n_good(profile)) {
    report.structure = StructureCase::full_interval;
    report.interval_witness = RationalInterval{Rational::make(0, 1), Rational::make(2, 1), 0};
    return report;
  }

  const CoveringAutomaton automaton(profile);

  // A gap of 3 or more in A + A leaves a dead unit interval at level 1, so
  // the shallowest gap is always found here.
  std::int64_t gap_lo = -1, gap_hi = -1;
  for (std::int64_t j = 0; j < 2 * n; ++j) {
    if (!automaton.seed(j).survives()) {
      gap_lo = j;
      gap_hi = j;
      while (gap_hi + 1 < 2 * n && !automaton.seed(gap_hi + 1).survives())
        ++gap_hi;
      break;
    }
  }
  if (gap_lo < 0)
    throw std::logic_error("non-good set without a level-1 gap");
  report.gap_witness = RationalInterval{Rational::make(gap_lo, n), Rational::make(gap_hi + 1, n), 1};

  if (!automaton.full_reachable()) {
    report.structure = StructureCase::cantor_set;
    return report;
  }

  report.structure = StructureCase::mixed;
  report.points_dim_lower_bound = std::log(2.0) / std::log(static_cast<double>(n));

  // Shallowest full interval, nearest the gap; distances in units of 1/(2n).
  const std::int64_t gap_centre = gap_lo + gap_hi + 1;
  std::int64_t best_j = -1;
  int best_depth = 0;
  std::int64_t best_dist = 0;
  for (std::int64_t j = 0; j < 2 * n; ++j) {
    const int to_full = automaton.levels_to_full(automaton.seed(j));
    if (to_full < 0 || 1 + to_full > witness_depth_cap)
      continue;
    const int depth = 1 + to_full;
    const std::int64_t dist = std::abs(2 * j + 1 - gap_centre);
    if (best_j < 0 || depth < best_depth || (depth == best_depth && dist < best_dist)) {
      best_j = j;
      best_depth = depth;
      best_dist = dist;
    }
  }
  if (best_j < 0)
    return report; // full state lies beyond the cap; the interval witness stays empty

  CoverState state = automaton.seed(best_j);
  __int128 pos = best_j;
  for (int depth = 1; depth < best_depth; ++depth) {
    const int want = automaton.levels_to_full(state) - 1;
    for (std::int64_t r = 0; r < n; ++r) {
      const auto c = automaton.child(state, r);
      if (automaton.levels_to_full(c) == want) {
        state = c;
        pos = pos * n + r;
        break;
      }
    }
  }
  const std::int64_t den = checked_power(n, best_depth);
  const auto lo = static_cast<std::int64_t>(pos);
  report.interval_witness = RationalInterval{Rational::make(lo, den), Rational::make(lo + 1, den), best_depth};
  return report;
}

CantorDimension cantor_sum_dimension(const DigitSet& a, const OracleConfig& config) {
  const auto structure = classify_structure(a);
  if (structure.structure != StructureCase::cantor_set)
    throw not_applicable(std::string("C_A + C_A is not a Cantor set (") + to_string(structure.structure) + ")");

  const auto profile = sumset_profile(a);
  const double log_n = std::log(static_cast<double>(a.base()));
  bool separated = true;
  for (std::size_t i = 1; i < profile.support.size(); ++i)
    separated = separated && profile.support[i] - profile.support[i - 1] >= 2;

  CantorDimension out;
  if (separated) {
    out.exact = true;
    out.value = out.lower = out.upper = std::log(static_cast<double>(profile.support.size())) / log_n;
    return out;
  }

  // Successive box-count ratios N_m / N_(m-1); bracket over the last three.
  std::vector<double> counts;
  for (int m = 1; m <= 8; ++m) {
    try {
      counts.push_back(static_cast<double>(oracle_em_intervals(a, m, config).surviving_unit_intervals()));
      out.depth = m;
    } catch (const budget_exceeded&) {
      break;
    }
  }
  if (counts.size() < 2)
    throw budget_exceeded("oracle budget too small for a box-count estimate");
  std::vector<double> ratios;
  for (std::size_t i = 1; i < counts.size(); ++i)
    ratios.push_back(std::log(counts[i] / counts[i - 1]) / log_n);
  const auto tail = std::min<std::size_t>(3, ratios.size());
  const auto [lo, hi] = std::minmax_element(ratios.end() - static_cast<std::ptrdiff_t>(tail), ratios.end());
  out.value = ratios.back();
  out.lower = *lo;
  out.upper = *hi;
  return out;
}

} // namespace cantorsum
