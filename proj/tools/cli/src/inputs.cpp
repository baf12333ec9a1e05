#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "tlif/error.hpp"
#include "tlif/format.hpp"
#include "tlif_cli/cli.hpp"

namespace tlif::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  for (;;) {
    const auto pos = s.find(sep);
    parts.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) return parts;
    s.remove_prefix(pos + 1);
  }
}

double number(std::string_view text, std::string_view what) {
  const auto v = parse_double(text);
  if (!v || !std::isfinite(*v)) {
    raise(ErrorCode::InvalidParameter, std::string(what) + ": '" + std::string(text) + "' is not a number");
  }
  return *v;
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::measure: return "measure";
    case Command::if_curve: return "if-curve";
    case Command::variance: return "variance";
    case Command::verify: return "verify";
    case Command::mc_study: return "mc-study";
    case Command::compare_ge: return "compare-ge";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (auto c : {Command::measure, Command::if_curve, Command::variance, Command::verify, Command::mc_study,
                 Command::compare_ge}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

GridSpec parse_grid(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4) raise(ErrorCode::InvalidParameter, "grid must look like min:max:count:log|lin");
  GridSpec g;
  g.min = number(parts[0], "grid min");
  g.max = number(parts[1], "grid max");
  const double count = number(parts[2], "grid count");
  if (count < 1 || count != std::floor(count) || count > 1e6) {
    raise(ErrorCode::InvalidParameter, "grid count must be an integer >= 1");
  }
  g.count = static_cast<std::size_t>(count);
  const auto spacing = trim(parts[3]);
  if (spacing == "log") {
    g.log_spacing = true;
  } else if (spacing != "lin") {
    raise(ErrorCode::InvalidParameter, "grid spacing must be 'log' or 'lin'");
  }
  if (g.min > g.max) raise(ErrorCode::InvalidParameter, "grid min exceeds max");
  return g;
}

Distribution parse_distribution(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    raise(ErrorCode::InvalidParameter, "distribution must look like kind:p1[,p2...]");
  }
  const auto kind_name = trim(text.substr(0, colon));
  std::vector<double> params;
  for (auto p : split(text.substr(colon + 1), ',')) params.push_back(number(p, "distribution parameter"));

  struct Entry {
    std::string_view name;
    Kind kind;
    std::size_t arity;
  };
  static constexpr std::array<Entry, 7> kinds{{{"exp", Kind::exponential, 1},
                                                {"pareto", Kind::pareto, 2},
                                                {"lognormal", Kind::lognormal, 2},
                                                {"uniform", Kind::uniform, 2},
                                                {"sm", Kind::singh_maddala, 3},
                                                {"dirac", Kind::dirac, 1},
                                                {"exponential", Kind::exponential, 1}}};
  const auto it = std::find_if(kinds.begin(), kinds.end(), [&](const Entry& e) { return e.name == kind_name; });
  if (it == kinds.end()) raise(ErrorCode::InvalidParameter, "unknown distribution kind '" + std::string(kind_name) + "'");
  if (params.size() != it->arity) {
    raise(ErrorCode::InvalidParameter, std::string(kind_name) + " takes " + std::to_string(it->arity) +
                                           " parameter(s)");
  }
  return make_distribution(it->kind, params);
}

Sample parse_income_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t row = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++row;
    std::string_view view = line;
    if (row == 1 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
    view = trim(view);
    if (view.empty()) continue;
    const bool first = !seen_content;
    seen_content = true;
    if (first && view == "income") continue;
    const auto v = parse_double(view);
    if (!v || !std::isfinite(*v)) {
      throw RowError(ErrorCode::ParseError,
                     "row " + std::to_string(row) + ": cannot parse '" + std::string(view) + "' as an income", row);
    }
    if (*v < 0.0) {
      throw RowError(ErrorCode::NegativeIncome,
                     "row " + std::to_string(row) + ": negative income " + std::string(view), row);
    }
    values.push_back(*v);
  }
  if (values.empty()) raise(ErrorCode::EmptyInput, "input contains no incomes");
  return Sample::from_values(std::move(values));
}

Sample ingest_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::InvalidParameter, "cannot open input file '" + path + "'");
  return parse_income_csv(in);
}

}  // namespace tlif::cli
