#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "report.hpp"
#include "tlif/error.hpp"
#include "tlif/estimation.hpp"
#include "tlif/format.hpp"
#include "tlif/influence.hpp"
#include "tlif/measures.hpp"
#include "tlif_cli/cli.hpp"

namespace tlif::cli {

namespace {

using I64 = std::int64_t;

Cell opt(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvergence:
    case ErrorCode::MomentDiverges:
    case ErrorCode::NoisyLimit:
    case ErrorCode::DegenerateDenominator:
    case ErrorCode::DomainError:
    case ErrorCode::KinkPoint: return kNumeric;
    default: return kUsage;
  }
}

std::string describe_error(const Error& e) { return std::string(to_string(e.code())) + ": " + e.what(); }

std::vector<std::string> expand_ids(const RunConfig& config, std::vector<std::string> fallback) {
  std::vector<std::string> ids;
  for (const auto& id : config.measure_ids) {
    if (id == "all") {
      const auto all = registry_ids();
      ids.insert(ids.end(), all.begin(), all.end());
    } else {
      ids.push_back(id);
    }
  }
  if (ids.empty()) ids = std::move(fallback);
  if (ids.empty()) raise(ErrorCode::InvalidParameter, "no measure id given (use --id or --ids)");
  return ids;
}

struct Input {
  Distribution f;
  std::optional<Sample> sample;
};

Input load_input(const RunConfig& config) {
  if (config.input_path) {
    auto s = ingest_csv(*config.input_path);
    return Input{empirical(s), std::move(s)};
  }
  return Input{parse_distribution(*config.distribution), std::nullopt};
}

std::vector<double> grid_for(const RunConfig& config, const Distribution& f) {
  if (!config.grid) return default_grid(f);
  const auto& g = *config.grid;
  return make_grid(g.min, g.max, g.count, g.log_spacing);
}

Report base_report(const RunConfig& config, const Input& input) {
  Report r;
  r.meta = {{"schema_version", I64{kSchemaVersion}},
            {"registry_version", I64{kRegistryVersion}},
            {"seed", static_cast<I64>(config.seed)},
            {"command", std::string(to_string(config.command))}};
  if (config.input_path) {
    r.meta.emplace_back("input", *config.input_path);
    r.meta.emplace_back("n", static_cast<I64>(input.sample->size()));
  } else {
    r.meta.emplace_back("distribution", input.f.describe());
  }
  return r;
}

struct Outcome {
  Report report;
  int code = kOk;
};

Outcome run_measure(const RunConfig& config, const Input& input) {
  Outcome o{base_report(config, input)};
  o.report.columns = {"measure_id", "estimator", "value", "value_6dp", "note"};
  for (const auto& id : expand_ids(config, {})) {
    const auto t = parse_measure_id(id);
    const std::string estimator = input.sample ? "plugin" : "population";
    try {
      const double v = input.sample ? t.evaluate(*input.sample) : t.evaluate(input.f);
      o.report.rows.push_back({t.id(), estimator, v, format_fixed(v, 6), std::string()});
    } catch (const Error& e) {
      o.code = std::max(o.code, exit_code_for(e.code()));
      o.report.rows.push_back({t.id(), estimator, Cell{}, Cell{}, describe_error(e)});
    }
  }
  return o;
}

Outcome run_variance(const RunConfig& config, const Input& input) {
  Outcome o{base_report(config, input)};
  o.report.columns = {"measure_id", "sigma2", "note"};
  for (const auto& id : expand_ids(config, {})) {
    const auto t = parse_measure_id(id);
    try {
      o.report.rows.push_back({t.id(), asymptotic_variance(t, input.f), std::string()});
    } catch (const Error& e) {
      o.code = std::max(o.code, exit_code_for(e.code()));
      o.report.rows.push_back({t.id(), Cell{}, describe_error(e)});
    }
  }
  return o;
}

Outcome run_if_curve(const RunConfig& config, const Input& input) {
  Outcome o{base_report(config, input)};
  o.report.columns = {"measure_id", "z", "if_closed", "if_oracle", "abs_err", "note"};
  const auto grid = grid_for(config, input.f);
  for (const auto& id : expand_ids(config, {})) {
    const auto curve = if_curve(id, input.f, grid, config.oracle);
    for (const auto& p : curve.points) {
      Cell err;
      if (p.closed_form && p.oracle) err = std::abs(*p.closed_form - *p.oracle);
      o.report.rows.push_back({curve.measure_id, p.z, opt(p.closed_form), opt(p.oracle), err, p.error});
    }
  }
  return o;
}

Outcome run_verify(const RunConfig& config, const Input& input) {
  Outcome o{base_report(config, input)};
  VerifyOptions options;
  if (config.tol) options.abs_tol = *config.tol;
  if (config.rel_tol) options.rel_tol = *config.rel_tol;
  o.report.meta.emplace_back("abs_tol", options.abs_tol);
  o.report.meta.emplace_back("rel_tol", options.rel_tol);
  o.report.columns = {"measure_id", "formula_source", "normative", "points", "max_abs_err", "verdict", "note"};
  const auto grid = grid_for(config, input.f);
  I64 normative_failures = 0;
  for (const auto& id : expand_ids(config, registry_ids())) {
    const auto t = parse_measure_id(id);
    for (const auto& row : verify_measure(t, input.f, grid, options)) {
      if (row.normative && row.verdict == Verdict::fail) ++normative_failures;
      o.report.rows.push_back({row.measure_id, std::string(to_string(row.source)), row.normative,
                               static_cast<I64>(row.points), row.max_abs_err, std::string(to_string(row.verdict)),
                               row.note});
    }
  }
  o.report.summary.emplace_back("normative_failures", normative_failures);
  if (normative_failures > 0) o.code = kVerifyFail;
  return o;
}

Outcome run_compare_ge(const RunConfig& config, const Input& input) {
  Outcome o{base_report(config, input)};
  const auto ids = expand_ids(config, {"ge:2"});
  if (ids.size() != 1) raise(ErrorCode::InvalidParameter, "compare-ge takes a single GE id");
  const auto t = parse_measure_id(ids.front());
  if (t.kind() != MeasureKind::theil_like || t.spec().family != Family::generalized_entropy) {
    raise(ErrorCode::InvalidParameter, "compare-ge needs a ge:<alpha> id");
  }
  const double abs_tol = config.tol.value_or(1e-5);
  const double rel_tol = config.rel_tol.value_or(1e-4);
  o.report.meta.emplace_back("measure_id", t.id());
  o.report.meta.emplace_back("abs_tol", abs_tol);
  o.report.meta.emplace_back("rel_tol", rel_tol);
  o.report.columns = {"z", "if_with_coefficient", "if_without_coefficient", "if_oracle", "abs_err_with",
                      "abs_err_without"};

  const auto with = theorem1_if(t.spec(), input.f);
  const auto without = ge_without_coefficient_if(t.spec(), input.f);
  double max_with = 0.0, max_without = 0.0, worst_with = 0.0, worst_without = 0.0;
  for (double z : grid_for(config, input.f)) {
    const double a = with(z), b = without(z);
    const double oracle = gateaux_if(t, input.f, z).value;
    const double ea = std::abs(a - oracle), eb = std::abs(b - oracle);
    const double allowed = std::max(abs_tol, rel_tol * std::abs(oracle));
    max_with = std::max(max_with, ea);
    max_without = std::max(max_without, eb);
    worst_with = std::max(worst_with, ea / allowed);
    worst_without = std::max(worst_without, eb / allowed);
    o.report.rows.push_back({z, a, b, oracle, ea, eb});
  }
  o.report.summary = {{"max_abs_err_with", max_with},
                      {"max_abs_err_without", max_without},
                      {"tolerance_ratio_with", worst_with},
                      {"tolerance_ratio_without", worst_without},
                      {"with_matches_oracle", worst_with <= 1.0},
                      {"without_exceeds_10x_tolerance", worst_without > 10.0}};
  return o;
}

Outcome run_mc_study(const RunConfig& config, const Input& input) {
  if (input.sample) raise(ErrorCode::InvalidParameter, "mc-study needs a parametric --dist");
  Outcome o{base_report(config, input)};
  o.report.columns = {"measure_id", "distribution", "n", "reps", "seed", "population_value", "mc_variance",
                      "replica_variance", "if_variance", "ratio", "degenerate", "rejected"};
  for (const auto& id : expand_ids(config, {})) {
    const auto t = parse_measure_id(id);
    const auto r = mc_variance_study(t, input.f, config.n, config.reps, config.seed);
    o.report.rows.push_back({r.measure_id, r.distribution, static_cast<I64>(r.n), static_cast<I64>(r.reps),
                             static_cast<I64>(r.seed), r.population_value, r.mc_variance, r.replica_variance,
                             r.if_variance, opt(r.ratio), r.degenerate, static_cast<I64>(r.rejected)});
  }
  return o;
}

void render(const Report& report, Format format, std::ostream& out) {
  if (format == Format::json) {
    write_json(report, out);
  } else {
    write_csv(report, out);
  }
}

void render_error(const RunConfig& config, const Error& e, int code, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["registry_version"] = kRegistryVersion;
  doc["seed"] = config.seed;
  doc["command"] = std::string(to_string(config.command));
  nlohmann::ordered_json err;
  err["code"] = std::string(to_string(e.code()));
  err["message"] = e.what();
  if (const auto* row = dynamic_cast<const RowError*>(&e)) err["row"] = row->row();
  doc["error"] = std::move(err);
  doc["exit_code"] = code;
  out << doc.dump(2) << '\n';
}

}  // namespace

void validate(const RunConfig& config) {
  if (config.distribution.has_value() == config.input_path.has_value()) {
    raise(ErrorCode::InvalidParameter, "give exactly one of --dist or --input");
  }
  if (config.grid && config.grid->count < 1) raise(ErrorCode::InvalidParameter, "grid count must be >= 1");
  if (config.tol && !(*config.tol > 0.0)) raise(ErrorCode::InvalidParameter, "--tol must be positive");
  if (config.rel_tol && !(*config.rel_tol >= 0.0)) raise(ErrorCode::InvalidParameter, "--rel-tol must be non-negative");
  if (config.command == Command::mc_study && (config.n < 1 || config.reps < 2)) {
    raise(ErrorCode::InvalidParameter, "mc-study needs --n >= 1 and --reps >= 2");
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    const Input input = load_input(config);
    Outcome o;
    switch (config.command) {
      case Command::measure: o = run_measure(config, input); break;
      case Command::if_curve: o = run_if_curve(config, input); break;
      case Command::variance: o = run_variance(config, input); break;
      case Command::verify: o = run_verify(config, input); break;
      case Command::mc_study: o = run_mc_study(config, input); break;
      case Command::compare_ge: o = run_compare_ge(config, input); break;
    }
    std::ostringstream text;
    render(o.report, config.format, text);
    if (config.out_path) {
      write_atomically(*config.out_path, text.str());
    } else {
      out << text.str();
    }
    if (o.code == kNumeric) err << "error: numeric failure for at least one measure (see note column)\n";
    if (o.code == kVerifyFail) err << "verify: at least one normative formula FAILED\n";
    return o.code;
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    if (config.format == Format::json) render_error(config, e, code, out);
    return code;
  }
}

}  // namespace tlif::cli
