#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tlif/distribution.hpp"
#include "tlif/sample.hpp"

namespace tlif::cli {

inline constexpr int kSchemaVersion = 1;

enum class Command { measure, if_curve, variance, verify, mc_study, compare_ge };
enum class Format { csv, json };

std::string_view to_string(Command command);
std::optional<Command> parse_command(std::string_view name);

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  bool log_spacing = false;
};

/// "min:max:count:log|lin". Throws InvalidParameter.
GridSpec parse_grid(std::string_view text);

/// "kind:p1[,p2...]" with kind in exp, pareto, lognormal, uniform, sm, dirac.
/// Throws InvalidParameter.
Distribution parse_distribution(std::string_view text);

/// One income per line, optional "income" header, blank lines skipped.
/// Row numbers are 1-based physical line numbers. Throws RowError
/// (ParseError, NegativeIncome) or Error(EmptyInput).
Sample parse_income_csv(std::istream& in);
Sample ingest_csv(const std::string& path);

struct RunConfig {
  Command command = Command::measure;
  std::vector<std::string> measure_ids;  // "all" expands to the registry
  std::optional<std::string> distribution;
  std::optional<std::string> input_path;
  std::optional<GridSpec> grid;
  /// Comparison tolerances for verify and compare-ge: a point passes when
  /// |closed - oracle| <= max(tol, rel_tol |closed|).
  std::optional<double> tol;
  std::optional<double> rel_tol;
  std::uint64_t seed = 42;
  std::optional<std::string> out_path;
  Format format = Format::csv;
  bool oracle = true;  // if-curve: also evaluate the Gateaux oracle
  std::size_t n = 20000;
  std::size_t reps = 400;
};

/// Exit codes: 0 success, 1 usage, 2 numeric failure, 3 normative FAIL in verify.
enum ExitCode : int { kOk = 0, kUsage = 1, kNumeric = 2, kVerifyFail = 3 };

/// Throws InvalidParameter when the config breaks its invariants.
void validate(const RunConfig& config);

/// Executes the command. The report goes to `out_path` (written atomically)
/// or to `out`; diagnostics go to `err`. With JSON output, failures are also
/// rendered as a JSON error object on `out`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point, argv[1] being the command.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tlif::cli
