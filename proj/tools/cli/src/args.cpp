#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "tlif/error.hpp"
#include "tlif_cli/cli.hpp"

namespace tlif::cli {

namespace {

void add_common_options(CLI::App& sub, RunConfig& config, std::vector<std::string>& ids,
                        std::string& ids_csv, std::string& grid, std::string& format) {
  sub.add_option("--id", ids, "Measure id (repeatable), e.g. theil, ge:2, gini");
  sub.add_option("--ids", ids_csv, "Comma-separated measure ids, or 'all'");
  auto* dist = sub.add_option("--dist", config.distribution, "Parametric law, e.g. exp:1, pareto:3,1");
  auto* input = sub.add_option("--input", config.input_path, "CSV file with one income per row");
  dist->excludes(input);
  sub.add_option("--grid", grid, "z grid min:max:count:log|lin");
  sub.add_option("--tol", config.tol, "Absolute comparison tolerance (verify, compare-ge); default 1e-5");
  sub.add_option("--rel-tol", config.rel_tol, "Relative comparison tolerance (verify, compare-ge); default 1e-4");
  sub.add_option("--seed", config.seed, "Generator seed")->capture_default_str();
  sub.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  sub.add_option("--out", config.out_path, "Report path (stdout when omitted)");
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inequality measures and their influence functions"};
  app.name("tlif");
  app.require_subcommand(1);

  RunConfig config;
  std::vector<std::string> ids;
  std::string ids_csv, grid, format = "csv";
  bool no_oracle = false;

  const std::vector<std::pair<Command, std::string>> commands = {
      {Command::measure, "Evaluate measures (plug-in for --input, population for --dist)"},
      {Command::if_curve, "Closed-form influence function and Gateaux oracle over a grid"},
      {Command::variance, "Asymptotic variance, the integral of IF^2 dF"},
      {Command::verify, "Check every archived IF formula against the Gateaux oracle"},
      {Command::mc_study, "Monte Carlo check of the asymptotic variance"},
      {Command::compare_ge, "GE influence with and without the leading coefficient"},
  };
  for (const auto& [command, help] : commands) {
    auto* sub = app.add_subcommand(std::string(to_string(command)), help);
    add_common_options(*sub, config, ids, ids_csv, grid, format);
    if (command == Command::if_curve) sub->add_flag("--no-oracle", no_oracle, "Skip the Gateaux oracle");
    if (command == Command::mc_study) {
      sub->add_option("--n", config.n, "Sample size")->capture_default_str();
      sub->add_option("--reps", config.reps, "Replica count")->capture_default_str();
    }
    sub->callback([&config, command = command] { config.command = command; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  config.format = format == "json" ? Format::json : Format::csv;
  config.oracle = !no_oracle;
  config.measure_ids = ids;
  if (!ids_csv.empty()) {
    std::stringstream ss(ids_csv);
    for (std::string id; std::getline(ss, id, ',');) {
      if (!id.empty()) config.measure_ids.push_back(id);
    }
  }
  if (!grid.empty()) {
    try {
      config.grid = parse_grid(grid);
    } catch (const Error& e) {
      err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
      return kUsage;
    }
  }
  return run(config, out, err);
}

}  // namespace tlif::cli
