#include "cantorsum/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "cantorsum/errors.hpp"

namespace cantorsum {

OracleConfig OracleConfig::from_env() {
  OracleConfig config;
  if (const char* env = std::getenv("CANTORSUM_BUDGET"); env != nullptr && *env != '\0') {
    // Accepts plain integers and forms like 1e8.
    const double v = std::strtod(env, nullptr);
    if (v >= 1.0)
      config.budget = static_cast<std::uint64_t>(v);
  }
  return config;
}

namespace {

struct Weighted {
  std::int64_t digit;
  std::uint8_t weight; // min(count, 2)
};

std::vector<Weighted> weighted_sumset(const SumsetProfile& p) {
  std::vector<Weighted> out;
  out.reserve(p.support.size());
  for (const auto b : p.support)
    out.push_back({b, static_cast<std::uint8_t>(std::min<std::uint64_t>(p.count_at(b), 2))});
  return out;
}

/// Calls visit(depth, table) after each expansion, for depth = 1..max_depth.
template <typename Visit>
void expand_levels(const DigitSet& a, int max_depth, const OracleConfig& config, Visit&& visit) {
  if (max_depth < 1)
    throw precondition_error("oracle depth must be at least 1");
  const auto profile = sumset_profile(a);
  const auto sums = weighted_sumset(profile);
  const std::int64_t n = a.base();
  const std::int64_t max_b = profile.max_sum();

  std::vector<std::uint8_t> table{1};
  __int128 max_start = 0;
  for (int depth = 1; depth <= max_depth; ++depth) {
    max_start = max_start * n + max_b;
    if (max_start + 1 > static_cast<__int128>(config.budget))
      throw budget_exceeded("depth " + std::to_string(depth) + " needs more than " +
                            std::to_string(config.budget) + " start entries; reduce the depth");
    std::vector<std::uint8_t> next(static_cast<std::size_t>(max_start) + 1, 0);
    for (std::size_t s = 0; s < table.size(); ++s) {
      const std::uint8_t mult = table[s];
      if (mult == 0)
        continue;
      const std::size_t base = s * static_cast<std::size_t>(n);
      for (const auto& [b, w] : sums) {
        auto& slot = next[base + static_cast<std::size_t>(b)];
        slot = static_cast<std::uint8_t>(std::min(2, slot + mult * w));
      }
    }
    table = std::move(next);
    visit(depth, table);
  }
}

LevelTyping type_level(int depth, const std::vector<std::uint8_t>& table) {
  LevelTyping t;
  t.depth = depth;
  std::uint8_t prev = 0;
  // One slot past the table so the last start's right half is seen.
  for (std::size_t j = 0; j <= table.size(); ++j) {
    const std::uint8_t here = j < table.size() ? table[j] : 0;
    if (here == 1 && prev == 0)
      ++t.left;
    else if (prev == 1 && here == 0)
      ++t.right;
    prev = here;
  }
  return t;
}

void require_canonical(const DigitSet& a, const char* what) {
  if (!a.is_canonical())
    throw precondition_error(std::string(what) + " needs a canonical digit set");
}

} // namespace

std::int64_t LevelSet::denominator() const {
  std::int64_t d = scale;
  for (int i = 0; i < depth; ++i)
    d *= n;
  return d;
}

std::int64_t LevelSet::surviving_unit_intervals() const {
  std::int64_t count = 0;
  std::uint8_t prev = 0;
  for (std::size_t j = 0; j <= multiplicity.size(); ++j) {
    const std::uint8_t here = j < multiplicity.size() ? multiplicity[j] : 0;
    if (here != 0 || prev != 0)
      ++count;
    prev = here;
  }
  return count;
}

bool LevelSet::covers(std::int64_t lo, std::int64_t hi) const {
  auto it = std::upper_bound(components.begin(), components.end(), lo,
                             [](std::int64_t v, const Component& c) { return v < c.lo; });
  if (it == components.begin())
    return false;
  --it;
  return it->lo <= lo && hi <= it->hi;
}

bool LevelSet::misses(std::int64_t lo, std::int64_t hi) const {
  return std::none_of(components.begin(), components.end(),
                      [&](const Component& c) { return c.lo < hi && c.hi > lo; });
}

LevelSet oracle_em_intervals(const DigitSet& a, int depth, const OracleConfig& config) {
  LevelSet out;
  out.n = a.base();
  out.depth = depth;
  expand_levels(a, depth, config, [&](int d, std::vector<std::uint8_t>& table) {
    if (d == depth)
      out.multiplicity = std::move(table);
  });

  const std::int64_t max_b = 2 * a.max_digit();
  const std::int64_t g = std::gcd(max_b, out.n - 1);
  out.scale = (out.n - 1) / g;
  out.cylinder_length = max_b / g;

  for (std::size_t s = 0; s < out.multiplicity.size(); ++s) {
    if (out.multiplicity[s] == 0)
      continue;
    const std::int64_t lo = static_cast<std::int64_t>(s) * out.scale;
    const std::int64_t hi = lo + out.cylinder_length;
    if (!out.components.empty() && lo <= out.components.back().hi)
      out.components.back().hi = std::max(out.components.back().hi, hi);
    else
      out.components.push_back({lo, hi});
  }
  return out;
}

std::vector<LevelTyping> oracle_typing_sequence(const DigitSet& a, int max_depth,
                                                const OracleConfig& config) {
  require_canonical(a, "oracle level typing");
  std::vector<LevelTyping> out;
  expand_levels(a, max_depth, config, [&](int d, const std::vector<std::uint8_t>& table) {
    out.push_back(type_level(d, table));
  });
  return out;
}

LevelTyping oracle_level_typing(const DigitSet& a, int depth, const OracleConfig& config) {
  require_canonical(a, "oracle level typing");
  LevelTyping out;
  expand_levels(a, depth, config, [&](int d, const std::vector<std::uint8_t>& table) {
    if (d == depth)
      out = type_level(d, table);
  });
  return out;
}

const char* to_string(Orientation o) {
  return o == Orientation::row_vector ? "row_vector" : "column_vector";
}

LevelTyping propagate(const AdjacencyMatrix& m, Orientation o, const LevelTyping& t) {
  LevelTyping out;
  out.depth = t.depth + 1;
  if (o == Orientation::row_vector) {
    out.left = m.a * t.left + m.c * t.right;
    out.right = m.b * t.left + m.d * t.right;
  } else {
    out.left = m.a * t.left + m.b * t.right;
    out.right = m.c * t.left + m.d * t.right;
  }
  return out;
}

OrientationResolution resolve_orientation(const OracleConfig& config) {
  for (std::int64_t n = 4; n <= 12; ++n) {
    const std::uint64_t inner = std::uint64_t{1} << (n - 2);
    for (std::uint64_t mask = 0; mask < inner; ++mask) {
      std::vector<std::int64_t> digits{0};
      for (std::int64_t i = 0; i < n - 2; ++i)
        if (mask >> i & 1U)
          digits.push_back(i + 1);
      digits.push_back(n - 1);
      const auto a = DigitSet::canonical(n, std::move(digits));
      const auto profile = sumset_profile(a);
      if (!is_n_good(profile))
        continue;
      const auto typing = classify_intervals(profile);
      const auto& m = typing.matrix;
      if (m.b == m.c || perron_is_one(m))
        continue;

      const auto observed = oracle_level_typing(a, 2, config);
      const LevelTyping first{1, m.a + m.c, m.b + m.d};
      const auto row = propagate(m, Orientation::row_vector, first);
      const auto col = propagate(m, Orientation::column_vector, first);
      const bool row_ok = row == observed;
      const bool col_ok = col == observed;
      if (row_ok == col_ok)
        continue;
      return {row_ok ? Orientation::row_vector : Orientation::column_vector, a, observed, row, col};
    }
  }
  throw std::runtime_error("no asymmetric good set distinguishes the two orientations");
}

double GrowthReport::final_error() const {
  return estimates.empty() ? 0.0 : std::abs(estimates.back() - dim);
}

GrowthReport oracle_growth_check(const DigitSet& a, int max_depth, Orientation orientation,
                                 const OracleConfig& config) {
  require_canonical(a, "growth check");
  const auto report = analyze_uniqueness(a);

  GrowthReport g;
  g.orientation = orientation;
  g.matrix = report.matrix;
  g.orientation_ambiguous = report.matrix.b == report.matrix.c;
  g.dim = report.dim;
  g.observed = oracle_typing_sequence(a, max_depth, config);

  g.predicted.push_back({1, g.matrix.a + g.matrix.c, g.matrix.b + g.matrix.d});
  for (std::size_t i = 1; i < g.observed.size(); ++i)
    g.predicted.push_back(propagate(g.matrix, orientation, g.predicted.back()));
  g.evolution_matches = g.predicted == g.observed;

  const double log_n = std::log(static_cast<double>(a.base()));
  for (const auto& t : g.observed)
    g.estimates.push_back(std::log(static_cast<double>(t.left + t.right)) / (t.depth * log_n));
  return g;
}

} // namespace cantorsum
