#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cantorsum/constructions.hpp"
#include "cantorsum/digit_set.hpp"
#include "cantorsum/oracle.hpp"
#include "cantorsum/search.hpp"
#include "cantorsum/structure.hpp"
#include "cantorsum/typing.hpp"

namespace cantorsum {

/// "0,2,5,7" (or "0;2;5;7" with separator ';'). Throws invalid_digit_set.
std::vector<std::int64_t> parse_digit_list(std::string_view text, char separator = ',');

/// "a..b" inclusive, or a single integer "a". Throws std::invalid_argument.
std::pair<std::int64_t, std::int64_t> parse_range(std::string_view text);

std::string join_digits(std::span<const std::int64_t> digits, char separator = ';');

/// Fixed notation with ten digits after the point.
std::string format_decimal(double v, int precision = 10);

nlohmann::json to_json(const DigitSet& a);
DigitSet digit_set_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Rational& r);
nlohmann::json to_json(const AdjacencyMatrix& m);
nlohmann::json to_json(const UniquenessReport& r);
nlohmann::json to_json(const StructureReport& r);
nlohmann::json to_json(const SearchRecord& r);

namespace csv {

inline constexpr std::string_view search_header = "n,digits,good,very_good,a,b,c,d,lambda,dim";
inline constexpr std::string_view chain_header = "step,n,digits,lambda,dim";
inline constexpr std::string_view components_header = "depth,start_numerator,end_numerator,denominator";
inline constexpr std::string_view figure_header = "n,best_dim,reference";

std::string search_row(const SearchRecord& r);
std::string chain_row(std::size_t step, const TowerStep& s);
void write_components(std::ostream& out, const LevelSet& level);

} // namespace csv

} // namespace cantorsum
