// Command-line front end: analyze, search, tower, construct, structure,
// oracle and figure. Exit codes: 2 malformed input, 3 infeasible exhaustive
// search, 4 missing tower base, 5 oracle budget exceeded.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "cantorsum/constructions.hpp"
#include "cantorsum/errors.hpp"
#include "cantorsum/io.hpp"
#include "cantorsum/oracle.hpp"
#include "cantorsum/search.hpp"
#include "cantorsum/structure.hpp"
#include "cantorsum/typing.hpp"

namespace {

using namespace cantorsum;
using nlohmann::json;

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kMalformed = 2,
  kInfeasible = 3,
  kMissingBase = 4,
  kBudget = 5,
};

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::uint64_t parse_count(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size() || v < 0 || v != std::floor(v))
    throw std::invalid_argument("malformed count: '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

void print_exceedance_warning(const SearchStats& stats, std::int64_t n) {
  if (stats.conjecture_exceedances == 0)
    return;
  std::cerr << "\n!!! CONJECTURE MONITOR: " << stats.conjecture_exceedances << " record(s) at n = " << n
            << " exceed log 2 / log 3 + 1e-9 !!!\n";
  for (const auto& r : stats.exceedance_examples)
    std::cerr << "!!!   " << csv::search_row(r) << '\n';
}

struct Common {
  std::int64_t n = 0;
  std::string digits;
  bool json_out = false;
};

DigitSet read_digit_set(const Common& c) { return DigitSet::canonical(c.n, parse_digit_list(c.digits)); }

int cmd_analyze(const Common& c, std::ostream& out) {
  const auto a = read_digit_set(c);
  const auto profile = sumset_profile(a);
  const auto typing = classify_intervals(profile);
  const auto report = uniqueness_report(typing, a, is_n_good(profile));
  const auto structure = classify_structure(a);
  if (c.json_out) {
    json j = to_json(report);
    j["digit_set"] = to_json(a);
    j["typing"] = typing.to_string();
    j["structure"] = to_json(structure);
    j["corollary_bound_holds"] = check_corollary_bound(a, report);
    out << j.dump(2) << '\n';
    return kOk;
  }
  const auto& m = report.matrix;
  out << "n          " << a.base() << '\n'
      << "digits     " << join_digits(a.digits(), ',') << '\n'
      << "good       " << (report.good ? "true" : "false") << '\n'
      << "typing     " << typing.to_string() << '\n'
      << "matrix     [[" << m.a << ',' << m.b << "],[" << m.c << ',' << m.d << "]]\n"
      << "lambda     " << format_decimal(report.lambda) << '\n'
      << "dim        " << format_decimal(report.dim) << '\n'
      << "trivial    " << (report.trivial ? "true" : "false") << '\n'
      << "very_good  " << (report.very_good ? "true" : "false") << '\n'
      << "structure  " << to_string(structure.structure) << '\n';
  return kOk;
}

int cmd_construct(const Common& c, std::ostream& out) {
  const auto a = sqrt_construction(c.n);
  const auto report = analyze_uniqueness(a);
  if (c.json_out) {
    json j = to_json(a);
    j["size"] = a.size();
    j["report"] = to_json(report);
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "n        " << a.base() << '\n'
      << "digits   " << join_digits(a.digits(), ',') << '\n'
      << "size     " << a.size() << '\n'
      << "good     " << (report.good ? "true" : "false") << '\n'
      << "trivial  " << (report.trivial ? "true" : "false") << '\n';
  return kOk;
}

int cmd_structure(const Common& c, std::ostream& out) {
  const auto a = read_digit_set(c);
  const auto report = classify_structure(a);
  std::optional<CantorDimension> cantor;
  if (report.structure == StructureCase::cantor_set)
    cantor = cantor_sum_dimension(a);
  if (c.json_out) {
    json j = to_json(report);
    if (cantor)
      j["cantor_dimension"] = {{"value", cantor->value}, {"lower", cantor->lower}, {"upper", cantor->upper},
                               {"exact", cantor->exact}};
    out << j.dump(2) << '\n';
    return kOk;
  }
  auto show = [](const std::optional<RationalInterval>& w, bool open) {
    if (!w)
      return std::string("-");
    return std::string(open ? "(" : "[") + to_string(w->lo) + ", " + to_string(w->hi) + (open ? ")" : "]") +
           " at depth " + std::to_string(w->depth);
  };
  out << "case              " << to_string(report.structure) << '\n'
      << "gap_witness       " << show(report.gap_witness, true) << '\n'
      << "interval_witness  " << show(report.interval_witness, false) << '\n';
  if (report.points_dim_lower_bound)
    out << "points_dim_lb     " << format_decimal(*report.points_dim_lower_bound) << '\n';
  if (cantor)
    out << "cantor_dim        " << format_decimal(cantor->value) << (cantor->exact ? " (exact)" : "")
        << " bracket [" << format_decimal(cantor->lower) << ", " << format_decimal(cantor->upper) << "]\n";
  return kOk;
}

struct SearchArgs {
  std::string range;
  bool exhaustive = false;
  bool heuristic = false;
  bool require_good = false;
  bool require_very_good = false;
  bool figure = false;
  bool stream = false;
  std::string budget = "100000";
  std::uint64_t seed = 1;
  std::string csv_out;
  unsigned threads = 0;
  int exhaustive_limit = 20;
};

void emit_figure(std::int64_t lo, std::int64_t hi, const SearchArgs& s, std::ostream& out) {
  FigureOptions options;
  options.budget = parse_count(s.budget);
  options.seed = s.seed;
  options.exhaustive_limit = s.exhaustive_limit;
  options.threads = s.threads;
  out << csv::figure_header << '\n';
  for (const auto& row : figure_data(lo, hi, options)) {
    out << row.n << ',' << format_decimal(row.best_dim) << ',' << format_decimal(row.reference) << '\n';
    std::cerr << "n=" << row.n << " best " << format_decimal(row.best_dim) << " via " << row.source << " {"
              << join_digits(row.record.digits, ',') << "}\n";
    print_exceedance_warning(row.stats, row.n);
  }
}

int cmd_search(SearchArgs s, std::ostream& out) {
  const auto [lo, hi] = parse_range(s.range);
  if (lo < 3)
    throw invalid_digit_set("n must be at least 3");
  if (s.figure) {
    emit_figure(lo, hi, s, out);
    return kOk;
  }
  if (!s.heuristic)
    s.exhaustive = true;
  const SearchConstraints constraints{s.require_good || s.require_very_good, s.require_very_good};
  std::ofstream stream_file;
  if (!s.csv_out.empty()) {
    stream_file.open(s.csv_out);
    if (!stream_file)
      throw std::runtime_error("cannot open " + s.csv_out);
    stream_file << csv::search_header << '\n';
  }

  out << csv::search_header << '\n';
  for (std::int64_t n = lo; n <= hi; ++n) {
    SearchResult result;
    if (s.exhaustive) {
      if (n > kMaxExhaustiveN)
        throw infeasible_search("exhaustive search refuses n = " + std::to_string(n) + "; use --heuristic");
      ExhaustiveOptions options;
      options.threads = s.threads;
      if (s.stream && stream_file)
        options.sink = [&](const SearchRecord& r) { stream_file << csv::search_row(r) << '\n'; };
      result = search_exhaustive(static_cast<int>(n), constraints, options);
    } else {
      result = search_heuristic(n, parse_count(s.budget), s.seed, constraints);
    }
    if (result.best) {
      out << csv::search_row(*result.best) << '\n';
      if (stream_file && !s.stream)
        stream_file << csv::search_row(*result.best) << '\n';
    }
    std::cerr << "n=" << n << " evaluated " << result.stats.evaluated << " feasible " << result.stats.feasible
              << " invariant violations " << result.stats.violations.total() << '\n';
    print_exceedance_warning(result.stats, n);
  }
  return kOk;
}

struct TowerArgs {
  std::int64_t target = 0;
  std::string base_table;
  bool verify_direct = false;
  bool json_out = false;
};

int cmd_tower(const TowerArgs& t, std::ostream& out) {
  BaseTable table = t.base_table.empty() ? default_base_table() : load_base_table(t.base_table);
  const auto start = std::chrono::steady_clock::now();
  const auto chain = chain_to_target(t.target, table);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (t.json_out) {
    json rows = json::array();
    for (std::size_t i = 0; i < chain.steps.size(); ++i) {
      const auto& s = chain.steps[i];
      rows.push_back({{"step", i}, {"k", s.k}, {"n", s.n}, {"size", s.digits.size()}, {"lambda", s.lambda},
                      {"dim", s.dim}, {"predicted", to_json(s.predicted)}, {"direct", to_json(s.direct)}});
    }
    out << json{{"steps", rows}, {"direct_matches_predicted", chain.direct_matches_predicted()}}.dump(2) << '\n';
  } else {
    out << csv::chain_header << '\n';
    for (std::size_t i = 0; i < chain.steps.size(); ++i)
      out << csv::chain_row(i, chain.steps[i]) << '\n';
  }
  if (t.verify_direct) {
    const bool ok = chain.direct_matches_predicted();
    const auto& m = chain.last().direct;
    std::cerr << "direct typing at n=" << chain.last().n << ": [[" << m.a << ',' << m.b << "],[" << m.c << ','
              << m.d << "]] " << (ok ? "matches" : "DOES NOT MATCH") << " the predicted matrix ("
              << format_decimal(seconds, 3) << " s)\n";
    return ok ? kOk : kFailure;
  }
  return kOk;
}

struct OracleArgs {
  bool em = false;
  bool typing = false;
  bool growth = false;
  bool general = false;
  int depth = 0;
};

int cmd_oracle(const Common& c, const OracleArgs& o, std::ostream& out) {
  const auto digits = parse_digit_list(c.digits);
  const auto a = o.general ? DigitSet::general(c.n, digits) : DigitSet::canonical(c.n, digits);
  const auto config = OracleConfig::from_env();
  const int modes = int{o.em} + int{o.typing} + int{o.growth};
  if (modes != 1)
    throw std::invalid_argument("choose exactly one of --em, --typing, --growth");

  if (o.em) {
    const int depth = o.depth > 0 ? o.depth : 8;
    const auto level = oracle_em_intervals(a, depth, config);
    out << csv::components_header << '\n';
    csv::write_components(out, level);
    std::cerr << level.components.size() << " component(s) at depth " << depth << '\n';
  } else if (o.typing) {
    const int depth = o.depth > 0 ? o.depth : 6;
    const auto t = oracle_level_typing(a, depth, config);
    if (c.json_out)
      out << json{{"depth", t.depth}, {"L", t.left}, {"R", t.right}}.dump() << '\n';
    else
      out << "depth=" << t.depth << " L=" << t.left << " R=" << t.right << '\n';
  } else {
    const int depth = o.depth > 0 ? o.depth : 6;
    const auto orientation = resolve_orientation(config);
    const auto g = oracle_growth_check(a, depth, orientation.orientation, config);
    out << "depth,L,R,predicted_L,predicted_R,ratio,estimate\n";
    for (std::size_t i = 0; i < g.observed.size(); ++i) {
      const auto& t = g.observed[i];
      const double ratio =
          i == 0 ? 0.0
                 : static_cast<double>(t.left + t.right) /
                       static_cast<double>(g.observed[i - 1].left + g.observed[i - 1].right);
      out << t.depth << ',' << t.left << ',' << t.right << ',' << g.predicted[i].left << ',' << g.predicted[i].right
          << ',' << format_decimal(ratio, 6) << ',' << format_decimal(g.estimates[i]) << '\n';
    }
    std::cerr << "orientation " << to_string(g.orientation) << (g.orientation_ambiguous ? " (ambiguous: b = c)" : "")
              << ", evolution " << (g.evolution_matches ? "matches" : "DOES NOT MATCH") << ", dim "
              << format_decimal(g.dim) << ", final error " << format_decimal(g.final_error(), 4) << '\n';
    return g.evolution_matches ? kOk : kFailure;
  }
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minkowski self-sums of linear Cantor sets"};
  app.require_subcommand(1);
  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "Write a run manifest JSON to this path");

  Common common;
  auto add_set = [&](CLI::App* sub, bool need_digits) {
    sub->add_option("-n", common.n, "Base n")->required();
    auto* opt = sub->add_option("-A,--digits", common.digits, "Comma-separated digits, e.g. 0,2,5,7");
    if (need_digits)
      opt->required();
    sub->add_flag("--json", common.json_out, "JSON output");
  };

  auto* analyze = app.add_subcommand("analyze", "Goodness, typing, matrix, dimension, structure");
  add_set(analyze, true);
  auto* construct = app.add_subcommand("construct", "Square-root sized good set with trivial U_A");
  add_set(construct, false);
  auto* structure = app.add_subcommand("structure", "Full interval / Cantor set / mixed classification");
  add_set(structure, true);

  SearchArgs search_args;
  auto* search = app.add_subcommand("search", "Exhaustive or heuristic search maximising dim U_A");
  search->add_option("-n", search_args.range, "n or a..b")->required();
  search->add_flag("--exhaustive", search_args.exhaustive);
  search->add_flag("--heuristic", search_args.heuristic);
  search->add_flag("--require-good", search_args.require_good);
  search->add_flag("--require-very-good", search_args.require_very_good);
  search->add_flag("--figure", search_args.figure, "Emit figure CSV (n,best_dim,reference)");
  search->add_flag("--stream", search_args.stream, "With --csv-out, write every feasible record");
  search->add_option("--budget", search_args.budget, "Heuristic evaluations (e.g. 1e6)");
  search->add_option("--seed", search_args.seed);
  search->add_option("--csv-out", search_args.csv_out);
  search->add_option("--threads", search_args.threads);
  search->add_option("--exhaustive-limit", search_args.exhaustive_limit, "Figure: exhaustive up to this n");

  SearchArgs figure_args;
  figure_args.figure = true;
  auto* figure = app.add_subcommand("figure", "Largest known dim U_A per n");
  figure->add_option("-n", figure_args.range, "a..b")->required();
  figure->add_option("--budget", figure_args.budget);
  figure->add_option("--seed", figure_args.seed);
  figure->add_option("--threads", figure_args.threads);
  figure->add_option("--exhaustive-limit", figure_args.exhaustive_limit);

  TowerArgs tower_args;
  auto* tower = app.add_subcommand("tower", "Tower chain from the base table to a target n");
  tower->add_option("--target", tower_args.target)->required();
  tower->add_option("--base-table", tower_args.base_table, "CSV n,digits overriding the built-in table");
  tower->add_flag("--verify-direct", tower_args.verify_direct);
  tower->add_flag("--json", tower_args.json_out);

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "Depth-bounded brute force");
  add_set(oracle, true);
  oracle->add_flag("--em", oracle_args.em, "Components of E_m (CSV)");
  oracle->add_flag("--typing", oracle_args.typing, "L_m and R_m counts");
  oracle->add_flag("--growth", oracle_args.growth, "Matrix-power evolution and growth estimates");
  oracle->add_flag("--general", oracle_args.general, "Allow digits outside {0..n-1}");
  oracle->add_option("--depth", oracle_args.depth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kMalformed;
  }

  const auto started = std::chrono::steady_clock::now();
  std::ostringstream out;
  int code = kOk;
  CLI::App* active = app.get_subcommands().front();
  try {
    if (active == analyze)
      code = cmd_analyze(common, out);
    else if (active == construct)
      code = cmd_construct(common, out);
    else if (active == structure)
      code = cmd_structure(common, out);
    else if (active == search)
      code = cmd_search(search_args, out);
    else if (active == figure)
      code = cmd_search(figure_args, out);
    else if (active == tower)
      code = cmd_tower(tower_args, out);
    else if (active == oracle)
      code = cmd_oracle(common, oracle_args, out);
  } catch (const infeasible_search& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = kInfeasible;
  } catch (const missing_base& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = kMissingBase;
  } catch (const budget_exceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = kBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = kMalformed;
  } catch (const precondition_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = kMalformed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = kFailure;
  }

  const std::string text = out.str();
  std::cout << text << std::flush;

  if (!manifest_path.empty()) {
    json params = json::object();
    for (const auto* opt : active->get_options())
      if (opt->count() > 0 && !opt->get_name().empty())
        params[opt->get_name()] = opt->as<std::string>();
    const json manifest = {
        {"command", active->get_name()},
        {"parameters", params},
        {"seed", active == search ? search_args.seed : (active == figure ? figure_args.seed : 0)},
        {"tool_version", CANTORSUM_VERSION},
        {"wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()},
        {"exit_code", code},
        {"output_sha256", sha256_hex(text)},
    };
    std::ofstream(manifest_path) << manifest.dump(2) << '\n';
  }
  return code;
}
