#include "cantorsum/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "cantorsum/constructions.hpp"
#include "cantorsum/errors.hpp"

namespace cantorsum {

namespace {

constexpr double kLambdaTie = 1e-12;
constexpr std::size_t kMaxExamples = 16;

double lambda_of(const AdjacencyMatrix& m) { return perron_is_one(m) ? 1.0 : perron_eigenvalue(m); }

/// True iff the digit list of x precedes that of y (x != y): the smallest
/// element where they differ belongs to x.
bool lex_less_mask(std::uint64_t x, std::uint64_t y) {
  const std::uint64_t diff = x ^ y;
  return diff != 0 && (x & (diff & (~diff + 1))) != 0;
}

bool lex_less(const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y) {
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

std::vector<std::int64_t> mask_digits(std::uint64_t mask) {
  std::vector<std::int64_t> out;
  for (; mask != 0; mask &= mask - 1)
    out.push_back(std::countr_zero(mask));
  return out;
}

SearchRecord record_from_kernel(std::uint64_t mask, int n, const KernelResult& k) {
  SearchRecord r;
  r.n = n;
  r.digits = mask_digits(mask);
  r.good = k.good;
  r.very_good = k.very_good;
  r.matrix = k.matrix;
  r.lambda = lambda_of(k.matrix);
  r.dim = r.lambda == 1.0 ? 0.0 : std::log(r.lambda) / std::log(static_cast<double>(n));
  return r;
}

bool feasible(const SearchConstraints& c, bool good, bool very_good) {
  return (!c.require_good || good) && (!c.require_very_good || very_good);
}

/// Inline checks of the integer-level invariants on every evaluated set.
void audit(InvariantViolations& v, std::int64_t n, std::int64_t size, bool good, bool has_one,
           bool has_n_minus_two, const AdjacencyMatrix& m, double lambda) {
  const bool trivial = perron_is_one(m);
  if (!trivial && lambda < 2.0 - kDimTolerance)
    ++v.dichotomy;
  if (!has_one && !has_n_minus_two && lambda < 2.0 - kDimTolerance)
    ++v.corollary;
  if (good && lambda > static_cast<double>(size) + kDimTolerance)
    ++v.containment;
  if (good && size * size < n)
    ++v.size_bound;
}

struct Candidate {
  std::uint64_t mask = 0;
  double lambda = 0.0;
  bool valid = false;
};

/// Max lambda, then lexicographically smaller digits.
void offer(Candidate& best, std::uint64_t mask, double lambda) {
  if (!best.valid || lambda > best.lambda + kLambdaTie ||
      (lambda > best.lambda - kLambdaTie && lex_less_mask(mask, best.mask))) {
    best = {mask, lambda, true};
  }
}

struct WorkerState {
  Candidate best;
  SearchStats stats;
  std::vector<std::uint64_t> exceedances;
};

void scan_range(int n, std::uint64_t lo, std::uint64_t hi, const SearchConstraints& constraints,
                double exceed_lambda, WorkerState& w,
                const std::function<void(const SearchRecord&)>* sink) {
  const std::uint64_t top = std::uint64_t{1} << (n - 1);
  for (std::uint64_t inner = lo; inner < hi; ++inner) {
    const std::uint64_t mask = 1U | (inner << 1) | top;
    const std::uint64_t mirror = reflect_mask(mask, n);
    if (mirror < mask)
      continue;
    const auto k = evaluate_mask(mask, n);
    const double lambda = lambda_of(k.matrix);
    const auto size = std::popcount(mask);
    ++w.stats.evaluated;
    audit(w.stats.violations, n, size, k.good, mask >> 1 & 1U, mask >> (n - 2) & 1U, k.matrix, lambda);
    if (!feasible(constraints, k.good, k.very_good))
      continue;
    ++w.stats.feasible;
    if (lambda > exceed_lambda) {
      ++w.stats.conjecture_exceedances;
      if (w.exceedances.size() < kMaxExamples)
        w.exceedances.push_back(mask);
    }
    offer(w.best, lex_less_mask(mirror, mask) ? mirror : mask, lambda);
    if (sink != nullptr)
      (*sink)(record_from_kernel(mask, n, k));
  }
}

} // namespace

InvariantViolations& InvariantViolations::operator+=(const InvariantViolations& o) {
  dichotomy += o.dichotomy;
  containment += o.containment;
  size_bound += o.size_bound;
  corollary += o.corollary;
  return *this;
}

SearchRecord make_record(const DigitSet& a) {
  const auto profile = sumset_profile(a);
  const bool good = is_n_good(profile);
  const auto report = uniqueness_report(classify_intervals(profile), a, good);
  SearchRecord r;
  r.n = a.base();
  r.digits.assign(a.digits().begin(), a.digits().end());
  r.good = good;
  r.very_good = report.very_good;
  r.matrix = report.matrix;
  r.lambda = report.lambda;
  r.dim = report.dim;
  return r;
}

bool better(const SearchRecord& x, const SearchRecord& y) {
  if (x.lambda > y.lambda + kLambdaTie)
    return true;
  if (x.lambda < y.lambda - kLambdaTie)
    return false;
  return lex_less(x.digits, y.digits);
}

std::uint64_t reflect_mask(std::uint64_t mask, int n) {
  std::uint64_t out = 0;
  for (int i = 0; i < n; ++i)
    if (mask >> i & 1U)
      out |= std::uint64_t{1} << (n - 1 - i);
  return out;
}

KernelResult evaluate_mask(std::uint64_t mask, int n) {
  if (n < 3 || n > 31)
    throw precondition_error("bit kernel handles 3 <= n <= 31");
  // Saturating per-position counters over all ordered pairs (a, a'):
  // `ones` marks sums hit at least once, `twos` at least twice.
  std::uint64_t ones = 0, twos = 0;
  for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
    const std::uint64_t shifted = mask << std::countr_zero(rest);
    twos |= ones & shifted;
    ones |= shifted;
  }
  const std::uint64_t sums = (std::uint64_t{1} << (2 * n - 1)) - 1;
  const std::uint64_t intervals = (std::uint64_t{1} << (2 * n)) - 1;
  const std::uint64_t lower = (std::uint64_t{1} << n) - 1;
  const std::uint64_t upper = intervals & ~lower;

  const std::uint64_t zeros = ~ones & sums;
  const std::uint64_t unique = ones & ~twos;
  const std::uint64_t left = unique & ~(ones << 1) & intervals;
  const std::uint64_t right = (unique << 1) & ~ones & intervals;

  KernelResult r;
  r.good = (zeros & (zeros >> 1)) == 0;
  r.matrix = {std::popcount(left & lower), std::popcount(right & lower), std::popcount(left & upper),
              std::popcount(right & upper)};
  r.very_good = is_very_good(r.good, mask >> 1 & 1U, mask >> (n - 2) & 1U, r.matrix);
  return r;
}

SearchResult search_exhaustive(int n, const SearchConstraints& constraints, const ExhaustiveOptions& options) {
  if (n < 3)
    throw precondition_error("exhaustive search needs n >= 3");
  if (n > kMaxExhaustiveN)
    throw infeasible_search("exhaustive search refuses n = " + std::to_string(n) + " > " +
                            std::to_string(kMaxExhaustiveN) + "; use the heuristic search");

  const double exceed_lambda = std::exp((conjectured_bound() + kDimTolerance) * std::log(static_cast<double>(n)));
  const std::uint64_t total = std::uint64_t{1} << (n - 2);

  std::vector<WorkerState> workers;
  if (options.sink) {
    workers.resize(1);
    scan_range(n, 0, total, constraints, exceed_lambda, workers[0], &options.sink);
  } else {
    unsigned threads = options.threads != 0 ? options.threads : std::max(1U, std::thread::hardware_concurrency());
    const std::uint64_t chunk = std::max<std::uint64_t>(1, total / (std::uint64_t{threads} * 64));
    workers.resize(threads);
    std::atomic<std::uint64_t> next{0};
    auto run = [&](WorkerState& w) {
      for (std::uint64_t lo; (lo = next.fetch_add(chunk)) < total;)
        scan_range(n, lo, std::min(total, lo + chunk), constraints, exceed_lambda, w, nullptr);
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t)
      pool.emplace_back(run, std::ref(workers[t]));
    run(workers[0]);
  }

  SearchResult result;
  Candidate best;
  std::vector<std::uint64_t> exceedances;
  for (const auto& w : workers) {
    result.stats.evaluated += w.stats.evaluated;
    result.stats.feasible += w.stats.feasible;
    result.stats.violations += w.stats.violations;
    result.stats.conjecture_exceedances += w.stats.conjecture_exceedances;
    exceedances.insert(exceedances.end(), w.exceedances.begin(), w.exceedances.end());
    if (w.best.valid)
      offer(best, w.best.mask, w.best.lambda);
  }
  std::sort(exceedances.begin(), exceedances.end());
  if (exceedances.size() > kMaxExamples)
    exceedances.resize(kMaxExamples);
  for (const auto m : exceedances)
    result.stats.exceedance_examples.push_back(record_from_kernel(m, n, evaluate_mask(m, n)));
  if (best.valid)
    result.best = make_record(DigitSet::canonical(n, mask_digits(best.mask)));
  return result;
}

namespace {

/// Digit membership with incrementally maintained ordered-pair counts.
class FlipState {
public:
  explicit FlipState(std::int64_t n)
      : n_(n), member_(static_cast<std::size_t>(n), 0), counts_(static_cast<std::size_t>(2 * n - 1), 0) {}

  std::int64_t base() const { return n_; }
  std::int64_t size() const { return size_; }
  bool has(std::int64_t x) const { return member_[static_cast<std::size_t>(x)] != 0; }
  const std::vector<std::uint8_t>& members() const { return member_; }

  void flip(std::int64_t x) {
    const bool adding = !has(x);
    if (!adding)
      member_[static_cast<std::size_t>(x)] = 0;
    const std::int64_t delta = adding ? 1 : -1;
    for (std::int64_t y = 0; y < n_; ++y)
      if (member_[static_cast<std::size_t>(y)])
        counts_[static_cast<std::size_t>(x + y)] += 2 * delta;
    counts_[static_cast<std::size_t>(2 * x)] += delta;
    if (adding)
      member_[static_cast<std::size_t>(x)] = 1;
    size_ += delta;
  }

  bool good() const {
    for (std::size_t l = 1; l < counts_.size(); ++l)
      if (counts_[l] == 0 && counts_[l - 1] == 0)
        return false;
    return true;
  }

  AdjacencyMatrix matrix() const {
    AdjacencyMatrix m;
    auto at = [&](std::int64_t l) {
      return (l < 0 || l >= static_cast<std::int64_t>(counts_.size())) ? 0 : counts_[static_cast<std::size_t>(l)];
    };
    for (std::int64_t l = 0; l < 2 * n_; ++l) {
      const bool lower = l < n_;
      if (at(l) == 1 && at(l - 1) == 0)
        ++(lower ? m.a : m.c);
      else if (at(l - 1) == 1 && at(l) == 0)
        ++(lower ? m.b : m.d);
    }
    return m;
  }

  std::vector<std::int64_t> digits() const {
    std::vector<std::int64_t> out;
    for (std::int64_t i = 0; i < n_; ++i)
      if (has(i))
        out.push_back(i);
    return out;
  }

private:
  std::int64_t n_;
  std::vector<std::uint8_t> member_;
  std::vector<std::int64_t> counts_;
  std::int64_t size_ = 0;
};

bool member_lex_less(const std::vector<std::uint8_t>& x, const std::vector<std::uint8_t>& y) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i])
      return x[i] != 0;
  return false;
}

} // namespace

SearchResult search_heuristic(std::int64_t n, std::uint64_t budget, std::uint64_t seed,
                              const SearchConstraints& constraints) {
  if (n < 3)
    throw precondition_error("heuristic search needs n >= 3");
  std::mt19937_64 rng(seed);
  const double exceed_lambda = std::exp((conjectured_bound() + kDimTolerance) * std::log(static_cast<double>(n)));
  const std::uint64_t patience = static_cast<std::uint64_t>(50 * n);

  std::vector<std::vector<std::int64_t>> seeds;
  if (n >= 9) {
    try {
      const auto chain = chain_to_target(n);
      const auto d = chain.last().digits.digits();
      seeds.emplace_back(d.begin(), d.end());
    } catch (const std::exception&) {
      // no tower seed for this n
    }
  }

  SearchResult result;
  std::vector<std::uint8_t> best_members;
  double best_lambda = 0.0;
  bool have_best = false;

  std::uint64_t evals = 0;
  std::size_t next_seed = 0;
  std::uniform_int_distribution<std::int64_t> pick_inner(1, n - 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto evaluate = [&](const FlipState& s) {
    const bool good = s.good();
    const auto m = s.matrix();
    const double lambda = lambda_of(m);
    const bool very_good = is_very_good(good, s.has(1), s.has(n - 2), m);
    ++evals;
    ++result.stats.evaluated;
    audit(result.stats.violations, n, s.size(), good, s.has(1), s.has(n - 2), m, lambda);
    const bool ok = feasible(constraints, good, very_good);
    if (ok) {
      ++result.stats.feasible;
      if (lambda > exceed_lambda)
        ++result.stats.conjecture_exceedances;
      if (!have_best || lambda > best_lambda + kLambdaTie ||
          (lambda > best_lambda - kLambdaTie && member_lex_less(s.members(), best_members))) {
        best_members = s.members();
        best_lambda = lambda;
        have_best = true;
      }
    }
    // Infeasible states are heavily penalised so the walk returns to the
    // feasible region before anything else.
    return ok ? lambda : lambda - 1e6;
  };

  while (evals < budget) {
    FlipState state(n);
    state.flip(0);
    state.flip(n - 1);
    if (next_seed < seeds.size()) {
      for (const auto d : seeds[next_seed])
        if (d != 0 && d != n - 1)
          state.flip(d);
      ++next_seed;
    } else {
      const double density = 0.15 + 0.45 * unit(rng);
      for (std::int64_t i = 2; i <= n - 3; ++i)
        if (unit(rng) < density)
          state.flip(i);
      // Fill in digits until A + A has no gap wider than 2.
      while (constraints.require_good && !state.good()) {
        std::vector<std::int64_t> free;
        for (std::int64_t i = 2; i <= n - 3; ++i)
          if (!state.has(i))
            free.push_back(i);
        if (free.empty())
          for (std::int64_t i = 1; i <= n - 2; ++i)
            if (!state.has(i))
              free.push_back(i);
        std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
        state.flip(free[pick(rng)]);
      }
    }

    double score = evaluate(state);
    for (std::uint64_t stall = 0; evals < budget && stall < patience && n > 2;) {
      const auto x = pick_inner(rng);
      state.flip(x);
      const double candidate = evaluate(state);
      if (candidate >= score - kLambdaTie) {
        stall = candidate > score + kLambdaTie ? 0 : stall + 1;
        score = candidate;
      } else {
        state.flip(x);
        ++stall;
      }
    }
  }

  if (have_best) {
    std::vector<std::int64_t> digits;
    for (std::int64_t i = 0; i < n; ++i)
      if (best_members[static_cast<std::size_t>(i)])
        digits.push_back(i);
    result.best = make_record(DigitSet::canonical(n, std::move(digits)));
  }
  return result;
}

std::vector<FigureRow> figure_data(std::int64_t n_lo, std::int64_t n_hi, const FigureOptions& options) {
  if (n_lo < 3 || n_hi < n_lo)
    throw precondition_error("figure range must satisfy 3 <= lo <= hi");
  std::vector<FigureRow> rows;
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    FigureRow row;
    row.n = n;
    auto consider = [&](const SearchRecord& r, const char* source) {
      if (row.source[0] == '\0' || better(r, row.record)) {
        row.record = r;
        row.source = source;
      }
    };
    if (n <= options.exhaustive_limit) {
      ExhaustiveOptions ex;
      ex.threads = options.threads;
      auto res = search_exhaustive(static_cast<int>(n), {true, false}, ex);
      row.stats = res.stats;
      if (res.best)
        consider(*res.best, "exhaustive");
    } else {
      auto res = search_heuristic(n, options.budget, options.seed + static_cast<std::uint64_t>(n), {true, false});
      row.stats = res.stats;
      if (res.best)
        consider(*res.best, "heuristic");
    }
    if (n >= 9) {
      try {
        consider(make_record(chain_to_target(n).last().digits), "tower");
      } catch (const std::exception&) {
        // no tower floor available
      }
    }
    row.best_dim = row.record.dim;
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace cantorsum
