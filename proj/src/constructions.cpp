#include "cantorsum/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "cantorsum/errors.hpp"
#include "cantorsum/io.hpp"

namespace cantorsum {

namespace {

std::int64_t isqrt(std::int64_t n) {
  auto k = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (k * k > n)
    --k;
  while ((k + 1) * (k + 1) <= n)
    ++k;
  return k;
}

void check_k(int k) {
  if (k < 0 || k > 2)
    throw precondition_error("tower index k must be 0, 1 or 2, got " + std::to_string(k));
}

} // namespace

DigitSet sqrt_construction(std::int64_t n) {
  if (n < 9)
    throw precondition_error("sqrt construction needs n >= 9, got " + std::to_string(n));
  const std::int64_t k = isqrt(n);
  std::set<std::int64_t> digits;
  for (std::int64_t i = 0; i <= k; ++i) {
    digits.insert(i);
    digits.insert(n - 1 - i);
  }
  for (std::int64_t m = 0; m <= n - 1; m += k)
    digits.insert(m);
  return DigitSet::canonical(n, {digits.begin(), digits.end()});
}

DigitSet tower(const DigitSet& a, int k) {
  check_k(k);
  if (!a.is_canonical() || !analyze_uniqueness(a).very_good)
    throw precondition_error("tower needs an n-very-good digit set");
  const std::int64_t n = a.base();
  const std::int64_t shift = 2 * n - k;
  std::vector<std::int64_t> digits(a.digits().begin(), a.digits().end());
  for (const auto d : a.digits())
    digits.push_back(d + shift);
  auto out = DigitSet::canonical(3 * n - k, std::move(digits));
  if (!analyze_uniqueness(out).very_good)
    throw std::logic_error("tower output in base " + std::to_string(out.base()) + " is not very good");
  return out;
}

AdjacencyMatrix predicted_tower_matrix(const AdjacencyMatrix& m, int k) {
  check_k(k);
  const std::int64_t p = m.a + m.c;
  const std::int64_t q = m.b + m.d;
  switch (k) {
  case 0:
    return {p, q, p, q};
  case 1:
    return {p, q - 1, p - 1, q};
  default:
    return {p - 1, q - 1, p - 1, q - 1};
  }
}

TowerDim tower_dim(double lambda, std::int64_t n, int k) {
  check_k(k);
  TowerDim out;
  out.lambda = 2.0 * lambda - k;
  out.n = 3 * n - k;
  out.dim = std::log(out.lambda) / std::log(static_cast<double>(out.n));
  return out;
}

bool TowerChain::direct_matches_predicted() const {
  return std::all_of(steps.begin(), steps.end(),
                     [](const TowerStep& s) { return s.direct == s.predicted; });
}

const BaseTable& default_base_table() {
  static const BaseTable table = [] {
    const std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> rows = {
        {9, {0, 2, 6, 8}},
        {10, {0, 2, 6, 7, 9}},
        {11, {0, 2, 4, 8, 10}},
        {12, {0, 2, 3, 5, 9, 11}},
        {13, {0, 2, 6, 10, 12}},
        {14, {0, 2, 6, 7, 11, 13}},
        {15, {0, 2, 6, 8, 12, 14}},
        {16, {0, 2, 6, 9, 13, 15}},
        {17, {0, 2, 6, 10, 14, 16}},
        {18, {0, 2, 6, 7, 11, 15, 17}},
        {19, {0, 2, 4, 10, 12, 16, 18}},
        {20, {0, 2, 3, 5, 12, 14, 17, 19}},
        {21, {0, 2, 3, 5, 12, 14, 18, 20}},
        {22, {0, 2, 5, 7, 13, 15, 19, 21}},
        {23, {0, 2, 6, 8, 14, 16, 20, 22}},
        {24, {0, 2, 6, 8, 15, 17, 21, 23}},
        {25, {0, 2, 6, 8, 16, 18, 22, 24}},
        {26, {0, 2, 6, 8, 17, 19, 23, 25}},
        {27, {0, 2, 6, 8, 18, 20, 24, 26}},
    };
    BaseTable t;
    for (const auto& [n, digits] : rows)
      t.emplace(n, DigitSet::canonical(n, digits));
    return t;
  }();
  return table;
}

BaseTable load_base_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw missing_base("cannot open base table " + path.string());
  BaseTable table;
  std::string line;
  std::getline(in, line); // header
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#')
      continue;
    std::istringstream row(line);
    std::string n_cell, digits_cell;
    std::getline(row, n_cell, ',');
    std::getline(row, digits_cell, ',');
    const std::int64_t n = std::stoll(n_cell);
    table.insert_or_assign(n, DigitSet::canonical(n, parse_digit_list(digits_cell, ';')));
  }
  return table;
}

TowerChain chain_to_target(std::int64_t n_target, const BaseTable& table) {
  if (n_target < 9)
    throw precondition_error("tower chains need a target n >= 9");

  std::vector<int> ks;
  std::int64_t n = n_target;
  while (n > 27) {
    const int k = static_cast<int>((3 - n % 3) % 3);
    ks.push_back(k);
    n = (n + k) / 3;
  }
  std::reverse(ks.begin(), ks.end());

  const auto it = table.find(n);
  if (it == table.end())
    throw missing_base("no base set for n = " + std::to_string(n));

  TowerChain chain;
  const auto base_report = analyze_uniqueness(it->second);
  TowerStep base{-1, it->second, n, base_report.lambda, base_report.dim,
                 base_report.matrix, base_report.matrix, 0.0, 0.0};
  chain.steps.push_back(base);

  const double lambda0 = base.lambda;
  const auto n0 = static_cast<double>(n);
  for (std::size_t t = 0; t < ks.size(); ++t) {
    const auto& prev = chain.steps.back();
    const int k = ks[t];
    const auto next_dim = tower_dim(prev.lambda, prev.n, k);
    auto digits = tower(prev.digits, k);
    const auto direct = classify_intervals(sumset_profile(digits)).matrix;
    const double scale = std::ldexp(1.0, static_cast<int>(t + 1));
    TowerStep step{k,
                   std::move(digits),
                   next_dim.n,
                   next_dim.lambda,
                   next_dim.dim,
                   predicted_tower_matrix(prev.predicted, k),
                   direct,
                   1.0 - next_dim.lambda / (scale * lambda0),
                   1.0 - static_cast<double>(next_dim.n) / (std::pow(3.0, static_cast<double>(t + 1)) * n0)};
    chain.steps.push_back(std::move(step));
  }
  return chain;
}

} // namespace cantorsum
