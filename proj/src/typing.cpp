#include "cantorsum/typing.hpp"

#include <cmath>

#include "cantorsum/errors.hpp"

namespace cantorsum {

double perron_eigenvalue(const AdjacencyMatrix& m) {
  const double a = static_cast<double>(m.a), b = static_cast<double>(m.b);
  const double c = static_cast<double>(m.c), d = static_cast<double>(m.d);
  return ((a + d) + std::sqrt((a - d) * (a - d) + 4.0 * b * c)) / 2.0;
}

bool perron_is_one(const AdjacencyMatrix& m) {
  return (1 - m.a) * (1 - m.d) == m.b * m.c && m.a + m.d - 1 <= 1;
}

std::string TypingProfile::to_string() const {
  std::string s;
  s.reserve(types.size() + 1);
  for (std::size_t l = 0; l < types.size(); ++l) {
    if (l == static_cast<std::size_t>(n))
      s.push_back(' ');
    s.push_back(static_cast<char>(types[l]));
  }
  return s;
}

TypingProfile classify_intervals(const SumsetProfile& p) {
  TypingProfile t;
  t.n = p.n;
  t.types.resize(static_cast<std::size_t>(2 * p.n), IntervalType::O);
  for (std::int64_t l = 0; l < 2 * p.n; ++l) {
    const auto here = p.count_at(l);
    const auto left = p.count_at(l - 1);
    IntervalType ty = IntervalType::O;
    if (here == 1 && left == 0)
      ty = IntervalType::L;
    else if (left == 1 && here == 0)
      ty = IntervalType::R;
    t.types[static_cast<std::size_t>(l)] = ty;

    const bool lower = l < p.n;
    if (ty == IntervalType::L)
      ++(lower ? t.matrix.a : t.matrix.c);
    else if (ty == IntervalType::R)
      ++(lower ? t.matrix.b : t.matrix.d);
  }
  return t;
}

bool is_very_good(bool good, bool has_one, bool has_n_minus_two, const AdjacencyMatrix& m) {
  return good && !has_one && !has_n_minus_two &&
         (m.a + m.b == m.c + m.d || m.a + m.c == m.b + m.d);
}

UniquenessReport uniqueness_report(const TypingProfile& t, const DigitSet& a) {
  return uniqueness_report(t, a, is_n_good(a));
}

UniquenessReport uniqueness_report(const TypingProfile& t, const DigitSet& a, bool good) {
  if (!a.is_canonical())
    throw precondition_error("uniqueness report needs a canonical digit set");
  if (t.n != a.base())
    throw precondition_error("typing profile and digit set disagree on n");

  UniquenessReport r;
  r.matrix = t.matrix;
  r.trivial = perron_is_one(t.matrix);
  r.lambda = r.trivial ? 1.0 : perron_eigenvalue(t.matrix);
  r.dim = r.trivial ? 0.0 : std::log(r.lambda) / std::log(static_cast<double>(a.base()));
  r.good = good;
  r.very_good = is_very_good(r.good, a.contains(1), a.contains(a.base() - 2), t.matrix);
  return r;
}

UniquenessReport analyze_uniqueness(const DigitSet& a) {
  const auto profile = sumset_profile(a);
  return uniqueness_report(classify_intervals(profile), a, is_n_good(profile));
}

bool check_corollary_bound(const DigitSet& a, const UniquenessReport& r) {
  const bool premise = !a.contains(1) && !a.contains(a.base() - 2);
  return !premise || r.lambda >= 2.0 - kDimTolerance;
}

} // namespace cantorsum
