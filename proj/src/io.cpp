#include "cantorsum/io.hpp"

#include <charconv>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "cantorsum/errors.hpp"

namespace cantorsum {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"'))
    s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view s, std::int64_t& out) {
  s = trim(s);
  if (s.empty())
    return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

} // namespace

std::vector<std::int64_t> parse_digit_list(std::string_view text, char separator) {
  std::vector<std::int64_t> out;
  text = trim(text);
  if (!text.empty() && text.front() == '[' && text.back() == ']')
    text = text.substr(1, text.size() - 2);
  while (true) {
    const auto pos = text.find(separator);
    std::int64_t v = 0;
    if (!parse_int(text.substr(0, pos), v))
      throw invalid_digit_set("malformed digit list: '" + std::string(text) + "'");
    out.push_back(v);
    if (pos == std::string_view::npos)
      break;
    text.remove_prefix(pos + 1);
  }
  return out;
}

std::pair<std::int64_t, std::int64_t> parse_range(std::string_view text) {
  std::int64_t lo = 0, hi = 0;
  if (const auto pos = text.find(".."); pos != std::string_view::npos) {
    if (!parse_int(text.substr(0, pos), lo) || !parse_int(text.substr(pos + 2), hi) || hi < lo)
      throw std::invalid_argument("malformed range: '" + std::string(text) + "'");
    return {lo, hi};
  }
  if (!parse_int(text, lo))
    throw std::invalid_argument("malformed integer: '" + std::string(text) + "'");
  return {lo, lo};
}

std::string join_digits(std::span<const std::int64_t> digits, char separator) {
  std::string s;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0)
      s.push_back(separator);
    s += std::to_string(digits[i]);
  }
  return s;
}

std::string format_decimal(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

nlohmann::json to_json(const DigitSet& a) {
  return {{"n", a.base()}, {"digits", std::vector<std::int64_t>(a.digits().begin(), a.digits().end())}};
}

DigitSet digit_set_from_json(const nlohmann::json& j) {
  try {
    return DigitSet::canonical(j.at("n").get<std::int64_t>(), j.at("digits").get<std::vector<std::int64_t>>());
  } catch (const nlohmann::json::exception& e) {
    throw invalid_digit_set(std::string("malformed digit set JSON: ") + e.what());
  }
}

nlohmann::json to_json(const Rational& r) { return {{"num", r.num}, {"den", r.den}}; }

nlohmann::json to_json(const AdjacencyMatrix& m) { return {{m.a, m.b}, {m.c, m.d}}; }

nlohmann::json to_json(const UniquenessReport& r) {
  return {{"good", r.good},          {"matrix", to_json(r.matrix)}, {"lambda", r.lambda},
          {"dim", r.dim},            {"trivial", r.trivial},        {"very_good", r.very_good}};
}

nlohmann::json to_json(const StructureReport& r) {
  auto interval = [](const std::optional<RationalInterval>& w) -> nlohmann::json {
    if (!w)
      return nullptr;
    return {{"lo", to_json(w->lo)}, {"hi", to_json(w->hi)}, {"depth", w->depth}};
  };
  nlohmann::json j = {{"case", to_string(r.structure)},
                      {"gap_witness", interval(r.gap_witness)},
                      {"interval_witness", interval(r.interval_witness)},
                      {"witness_depth_cap", r.witness_depth_cap}};
  j["points_dim_lower_bound"] =
      r.points_dim_lower_bound ? nlohmann::json(*r.points_dim_lower_bound) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const SearchRecord& r) {
  return {{"n", r.n},         {"digits", r.digits},          {"good", r.good}, {"very_good", r.very_good},
          {"matrix", to_json(r.matrix)}, {"lambda", r.lambda}, {"dim", r.dim}};
}

namespace csv {

std::string search_row(const SearchRecord& r) {
  std::ostringstream os;
  os << r.n << ',' << join_digits(r.digits) << ',' << (r.good ? "true" : "false") << ','
     << (r.very_good ? "true" : "false") << ',' << r.matrix.a << ',' << r.matrix.b << ',' << r.matrix.c << ','
     << r.matrix.d << ',' << format_decimal(r.lambda) << ',' << format_decimal(r.dim);
  return os.str();
}

std::string chain_row(std::size_t step, const TowerStep& s) {
  std::ostringstream os;
  os << step << ',' << s.n << ',' << join_digits(s.digits.digits()) << ',' << format_decimal(s.lambda) << ','
     << format_decimal(s.dim);
  return os.str();
}

void write_components(std::ostream& out, const LevelSet& level) {
  const auto den = level.denominator();
  for (const auto& c : level.components)
    out << level.depth << ',' << c.lo << ',' << c.hi << ',' << den << '\n';
}

} // namespace csv

} // namespace cantorsum
