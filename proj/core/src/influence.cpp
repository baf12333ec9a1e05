#include "tlif/influence.hpp"

#include <algorithm>
#include <cmath>

#include "tlif/error.hpp"
#include "tlif/format.hpp"

namespace tlif {

namespace {

double checked(double v, const std::string& what, double z) {
  if (!std::isfinite(v)) {
    raise(ErrorCode::DomainError, what + ": influence undefined at z = " + format_shortest(z));
  }
  return v;
}

// Pieces shared by the closed forms: mu, E h(X) and, where a printed form
// needs it, E log X.
struct Moments {
  double mu;
  double eh;
  double index;
};

Moments theil_like_moments(const TheilLikeSpec& spec, const Distribution& f, const Tolerance& tol) {
  const auto fv = functional_value(spec, f, tol);
  return Moments{fv.mean, fv.expected_h, fv.index};
}

double expected_log(const Distribution& f, const Tolerance& tol) {
  try {
    return expect(f, [](double x) { return std::log(x); }, tol);
  } catch (const NonConvergence& e) {
    raise(ErrorCode::MomentDiverges, std::string("E log X does not converge: ") + e.what());
  }
}

InfluenceFunction smooth(RealFunction fn) { return InfluenceFunction{std::move(fn), {}}; }

void require_family(const TheilLikeSpec& spec, Family family, const char* what) {
  if (spec.family != family) raise(ErrorCode::InvalidParameter, std::string(what) + " applies to one family only");
}

}  // namespace

// ---------------------------------------------------------------------------

InfluenceFunction theorem1_if(const TheilLikeSpec& spec, const Distribution& f, const Tolerance& tol) {
  const auto m = theil_like_moments(spec, f, tol);
  const double h1 = spec.h1(m.mu);
  const double slope = spec.h1_prime(m.mu) * m.eh / (h1 * h1) + spec.h2_prime(m.mu);
  const double tp = spec.tau_prime(m.index);
  if (!std::isfinite(tp) || tp == 0.0 || !std::isfinite(slope)) {
    raise(ErrorCode::DomainError, spec.id() + ": tau'(I) must be finite and non-zero");
  }
  const std::string id = spec.id();
  return smooth([h = spec.h, tp, slope, mu = m.mu, eh = m.eh, h1, id](double z) {
    const double hz = checked(h(z), id, z);
    return tp * (-slope * (z - mu) + (hz - eh) / h1);
  });
}

double if_theorem1(const TheilLikeSpec& spec, const Distribution& f, double z, const Tolerance& tol) {
  return theorem1_if(spec, f, tol)(z);
}

InfluenceFunction specialized_if(const TheilLikeSpec& spec, const Distribution& f, const Tolerance& tol) {
  const auto m = theil_like_moments(spec, f, tol);
  const double mu = m.mu;
  const std::string id = spec.id();
  switch (spec.family) {
    case Family::generalized_entropy: {
      const double a = spec.param, mu_a = m.eh;
      const double lead = 1.0 / (a * (a - 1.0) * std::pow(mu, a));
      const double slope = mu_a / ((a - 1.0) * std::pow(mu, a + 1.0));
      return smooth([=](double z) {
        return checked(lead * (std::pow(z, a) - mu_a) - slope * (z - mu), id, z);
      });
    }
    case Family::theil: {
      const double nu = m.eh;
      return smooth([=](double z) {
        const double zlz = z > 0.0 ? z * std::log(z) : 0.0;
        return (zlz - nu) / mu - (nu + mu) / (mu * mu) * (z - mu);
      });
    }
    case Family::mld: {
      const double elog = -m.eh;
      return smooth([=](double z) { return checked((z - mu) / mu - (std::log(z) - elog), id, z); });
    }
    case Family::atkinson: {
      const double b = spec.param, nu = m.eh;
      const double root = std::pow(nu, 1.0 / b);
      const double lead = std::pow(nu, 1.0 / b - 1.0) / (b * mu);
      return smooth([=](double z) {
        return checked(root * (z - mu) / (mu * mu) - lead * (std::pow(z, b) - nu), id, z);
      });
    }
    case Family::champernowne: {
      const double elog = m.eh;
      const double ratio = std::exp(elog) / mu;
      return smooth([=](double z) {
        return checked(ratio * ((z - mu) / mu - (std::log(z) - elog)), id, z);
      });
    }
    case Family::kolm: {
      const double a = spec.param, mgf = m.eh;
      return smooth([=](double z) { return (z - mu) + (std::exp(-a * z) / mgf - 1.0) / a; });
    }
  }
  raise(ErrorCode::InvalidParameter, "unknown family");
}

double if_special(std::string_view measure_id, const Distribution& f, double z, const Tolerance& tol) {
  const auto t = parse_measure_id(measure_id);
  return specialized_if(t.spec(), f, tol)(z);
}

InfluenceFunction ge_without_coefficient_if(const TheilLikeSpec& spec, const Distribution& f,
                                            const Tolerance& tol) {
  require_family(spec, Family::generalized_entropy, "coefficient-free GE form");
  const auto m = theil_like_moments(spec, f, tol);
  const double a = spec.param, mu = m.mu, mu_a = m.eh;
  const double slope = mu_a / ((a - 1.0) * std::pow(mu, a + 1.0));
  const std::string id = spec.id();
  return smooth([=](double z) { return checked((std::pow(z, a) - mu_a) - slope * (z - mu), id, z); });
}

// Printed variants archived for comparison against the oracle. Each is
// coded literally, with only an unambiguous symbol substitution.
namespace {

InfluenceFunction section2_printed_if(const TheilLikeSpec& spec, const Distribution& f,
                                      const Tolerance& tol) {
  const auto m = theil_like_moments(spec, f, tol);
  const double mu = m.mu;
  const std::string id = spec.id();
  switch (spec.family) {
    case Family::mld: {
      const double elog = -m.eh;
      return smooth([=](double z) { return checked((z - mu) / mu + (std::log(z) - elog), id, z); });
    }
    case Family::theil: {
      const double nu = m.eh;
      const double elog = expected_log(f, tol);
      return smooth([=](double z) {
        const double zlz = z > 0.0 ? z * std::log(z) : 0.0;
        return (zlz - nu) / mu - (mu + elog) / (mu * mu);
      });
    }
    case Family::generalized_entropy: {
      const double a = spec.param, mu_a = m.eh;
      const double lead = 1.0 / (a * (a - 1.0) * std::pow(mu, a));
      const double product = mu_a * (a - 1.0) * std::pow(mu, a + 1.0);
      return smooth([=](double z) {
        return checked(lead * (std::pow(z, a) - mu_a) - product * (z - mu), id, z);
      });
    }
    case Family::atkinson: {
      const double b = spec.param, nu = m.eh;
      const double norm = std::pow(nu, 1.0 / b);
      return smooth([=](double z) {
        return checked(norm / mu * ((z - mu) / mu - (std::pow(z, b) - nu) / (b * mu * nu)), id, z);
      });
    }
    case Family::champernowne: return specialized_if(spec, f, tol);
    case Family::kolm: {
      const double a = spec.param, mgf = m.eh;
      return smooth([=](double z) { return ((z - mu) - (std::exp(-a * mu) / mgf - 1.0)) / a; });
    }
  }
  raise(ErrorCode::InvalidParameter, "unknown family");
}

InfluenceFunction appendix_printed_if(const TheilLikeSpec& spec, const Distribution& f,
                                      const Tolerance& tol) {
  switch (spec.family) {
    case Family::generalized_entropy:
    case Family::theil: return specialized_if(spec, f, tol);
    case Family::mld: {
      const auto m = theil_like_moments(spec, f, tol);
      const double mu = m.mu, nu = -m.eh;
      const std::string id = spec.id();
      return smooth([=](double z) { return checked(-(std::log(z) - nu) + (z - mu) / mu, id, z); });
    }
    case Family::atkinson: {
      // inequality-aversion parameterization e = 1 - alpha
      const auto m = theil_like_moments(spec, f, tol);
      const double e = 1.0 - spec.param, mu = m.mu, nu = m.eh;
      const double p = 1.0 / (1.0 - e);
      const std::string id = spec.id();
      return smooth([=](double z) {
        return checked(-std::pow(nu, p - 1.0) / ((1.0 - e) * mu) * (std::pow(z, 1.0 - e) - nu) +
                           std::pow(nu, p) / (mu * mu) * (z - mu),
                       id, z);
      });
    }
    default: raise(ErrorCode::InvalidParameter, spec.id() + " has no listed appendix form");
  }
}

InfluenceFunction gini_if_impl(const Distribution& f, const Tolerance& tol, bool divide_by_mean) {
  const auto parts = gini_parts(f, tol);
  const double r = parts.lorenz_area;
  const double mu = f.mean();
  return smooth([f, r, mu, divide_by_mean](double z) {
    const double fz = f.cdf(z);
    double c = cumulative_functional(f, fz);
    if (divide_by_mean) c /= mu;
    return 2.0 * (r - c + z / mu * (r - (1.0 - fz)));
  });
}

void check_qsr_kink(const QsrParts& parts, double z) {
  for (double q : {parts.q20, parts.q80}) {
    if (std::abs(z - q) <= 1e-6 * std::max(1.0, std::abs(q))) {
      raise(ErrorCode::KinkPoint, "qsr influence is not defined at the quintile boundary " +
                                      format_shortest(q));
    }
  }
}

}  // namespace

InfluenceFunction gini_if(const Distribution& f, const Tolerance& tol) {
  return gini_if_impl(f, tol, true);
}

double if_gini(const Distribution& f, double z, const Tolerance& tol) { return gini_if(f, tol)(z); }

InfluenceFunction qsr_if(const Distribution& f, const Tolerance& tol) {
  const auto p = qsr_parts(f, tol);
  const double n = p.top, d = p.bottom, q2 = p.q20, q8 = p.q80;
  const double d2 = d * d;
  return InfluenceFunction{
      [=](double z) {
        if (z <= q2) return (-z * n + 0.2 * q8 * d + 0.8 * q2 * n) / d2;
        if (z < q8) return (0.2 * q8 * d - 0.2 * q2 * n) / d2;
        return (z * d - 0.8 * q8 * d - 0.2 * q2 * n) / d2;
      },
      {q2, q8}};
}

double if_qsr(const Distribution& f, double z, const Tolerance& tol) {
  check_qsr_kink(qsr_parts(f, tol), z);
  return qsr_if(f, tol)(z);
}

InfluenceFunction closed_form_if(const MeasureFunctional& t, const Distribution& f, const Tolerance& tol) {
  switch (t.kind()) {
    case MeasureKind::theil_like: return theorem1_if(t.spec(), f, tol);
    case MeasureKind::gini: return gini_if(f, tol);
    case MeasureKind::qsr: return qsr_if(f, tol);
    case MeasureKind::mean: return smooth([mu = f.mean()](double z) { return z - mu; });
  }
  raise(ErrorCode::InvalidParameter, "unknown measure kind");
}

// ---------------------------------------------------------------------------

std::string_view to_string(FormulaSource source) {
  switch (source) {
    case FormulaSource::theorem1: return "theorem1";
    case FormulaSource::specialized: return "specialized";
    case FormulaSource::section2_printed: return "section2_printed";
    case FormulaSource::appendix_printed: return "appendix_printed";
    case FormulaSource::appendix_corrected: return "appendix_corrected";
    case FormulaSource::coefficient_free: return "coefficient_free";
  }
  return "unknown";
}

std::vector<FormulaVariant> formula_variants(const MeasureFunctional& t) {
  const std::string& id = t.id();
  std::vector<FormulaVariant> out;
  const auto add = [&](FormulaSource s, bool normative, std::string printed, std::string normal) {
    out.push_back(FormulaVariant{id, s, normative, std::move(printed), std::move(normal)});
  };

  switch (t.kind()) {
    case MeasureKind::mean:
      add(FormulaSource::specialized, true, "z - mu", "z - mu");
      return out;
    case MeasureKind::gini:
      add(FormulaSource::appendix_printed, false, "2[R - C(F,F(z)) + (z/mu)(R - (1 - F(z)))]",
          "2[R - C(F,F(z))/mu + (z/mu)(R - (1 - F(z)))]");
      add(FormulaSource::appendix_corrected, true, "2[R - C(F,F(z))/mu + (z/mu)(R - (1 - F(z)))]",
          "2[R - C(F,F(z))/mu + (z/mu)(R - (1 - F(z)))]");
      return out;
    case MeasureKind::qsr: {
      const std::string pieces =
          "[-zN + 0.2 Q8 D + 0.8 Q2 N]/D^2 on [0,Q2]; [0.2 Q8 D - 0.2 Q2 N]/D^2 on (Q2,Q8); "
          "[zD - 0.8 Q8 D - 0.2 Q2 N]/D^2 on [Q8,uep]";
      add(FormulaSource::appendix_printed, true, pieces, pieces);
      return out;
    }
    case MeasureKind::theil_like: break;
  }

  const auto& spec = t.spec();
  add(FormulaSource::theorem1, true,
      "tau'(I)[-(h1'(mu) Eh/h1(mu)^2 + h2'(mu))(z - mu) + (h(X) - Eh)/h1(mu)]",
      "tau'(I)[-(h1'(mu) Eh/h1(mu)^2 + h2'(mu))(z - mu) + (h(z) - Eh)/h1(mu)]");
  switch (spec.family) {
    case Family::generalized_entropy: {
      const std::string normal = "(z^a - mu_a)/(a(a-1)mu^a) - mu_a (z - mu)/((a-1)mu^(a+1))";
      add(FormulaSource::specialized, true, normal, normal);
      add(FormulaSource::section2_printed, false,
          "(z^a - mu_a)/(a(a-1)mu^a) - mu_a (a-1) mu^(a+1) (z - mu)", normal);
      add(FormulaSource::appendix_printed, false, normal, normal);
      add(FormulaSource::coefficient_free, false, "(z^a - mu_a) - mu_a (z - mu)/((a-1)mu^(a+1))",
          normal);
      break;
    }
    case Family::theil: {
      const std::string normal = "(z log z - nu)/mu - (nu + mu)(z - mu)/mu^2, nu = E X log X";
      add(FormulaSource::specialized, true, normal, normal);
      add(FormulaSource::section2_printed, false,
          "(z log z - E X log X)/mu - (mu + E log X)/mu^2", normal);
      add(FormulaSource::appendix_printed, false, normal, normal);
      break;
    }
    case Family::mld: {
      const std::string normal = "(z - mu)/mu - (log z - E log X)";
      add(FormulaSource::specialized, true, normal, normal);
      add(FormulaSource::section2_printed, false, "(z - mu)/mu + (log z - E log X)", normal);
      add(FormulaSource::appendix_printed, false, "-(log z - E log X) + (z - mu)/mu", normal);
      break;
    }
    case Family::atkinson: {
      const std::string normal = "nu^(1/b)(z - mu)/mu^2 - nu^(1/b-1)(z^b - nu)/(b mu), nu = E X^b";
      add(FormulaSource::specialized, true, normal, normal);
      add(FormulaSource::section2_printed, false,
          "(nu^(1/b)/mu)((z - mu)/mu - (z^b - nu)/(b mu nu))", normal);
      add(FormulaSource::appendix_printed, false,
          "-nu^(1/(1-e)-1)(z^(1-e) - nu)/((1-e)mu) + nu^(1/(1-e))(z - mu)/mu^2, e = 1 - b", normal);
      break;
    }
    case Family::champernowne: {
      const std::string normal = "(e^(E log X)/mu)((z - mu)/mu - (log z - E log X))";
      add(FormulaSource::specialized, true, normal, normal);
      add(FormulaSource::section2_printed, false, normal, normal);
      break;
    }
    case Family::kolm: {
      const std::string normal = "(z - mu) + (e^(-a z)/E e^(-aX) - 1)/a";
      add(FormulaSource::specialized, true, normal, normal);
      add(FormulaSource::section2_printed, false, "(1/a)((z - mu) - (e^(-a mu)/E e^(-aX) - 1))",
          normal);
      break;
    }
  }
  return out;
}

InfluenceFunction variant_if(const MeasureFunctional& t, FormulaSource source, const Distribution& f,
                             const Tolerance& tol) {
  switch (t.kind()) {
    case MeasureKind::mean:
      if (source == FormulaSource::specialized) return closed_form_if(t, f, tol);
      break;
    case MeasureKind::gini:
      if (source == FormulaSource::appendix_printed) return gini_if_impl(f, tol, false);
      if (source == FormulaSource::appendix_corrected) return gini_if_impl(f, tol, true);
      break;
    case MeasureKind::qsr:
      if (source == FormulaSource::appendix_printed) return qsr_if(f, tol);
      break;
    case MeasureKind::theil_like: {
      const auto& spec = t.spec();
      switch (source) {
        case FormulaSource::theorem1: return theorem1_if(spec, f, tol);
        case FormulaSource::specialized: return specialized_if(spec, f, tol);
        case FormulaSource::section2_printed: return section2_printed_if(spec, f, tol);
        case FormulaSource::appendix_printed: return appendix_printed_if(spec, f, tol);
        case FormulaSource::coefficient_free: return ge_without_coefficient_if(spec, f, tol);
        default: break;
      }
      break;
    }
  }
  raise(ErrorCode::InvalidParameter,
        t.id() + " has no formula variant '" + std::string(to_string(source)) + "'");
}

// ---------------------------------------------------------------------------

LimitEstimate gateaux_if(const DistributionFunctional& t, const Distribution& f, double z,
                         const OracleOptions& options) {
  const double base = t(f);
  const RealFunction phi = [&](double eps) { return t(contaminate(f, eps, z)) - base; };
  return derivative_at_zero_plus(phi, options.schedule, options.extrapolation);
}

LimitEstimate gateaux_if(const MeasureFunctional& t, const Distribution& f, double z,
                         const OracleOptions& options) {
  const Tolerance tol = options.tol;
  return gateaux_if([&t, tol](const Distribution& g) { return t.evaluate(g, tol); }, f, z, options);
}

double asymptotic_variance(const MeasureFunctional& t, const Distribution& f, const Tolerance& tol) {
  const auto inf = closed_form_if(t, f, tol);
  const double v = expect(
      f,
      [&inf](double x) {
        const double d = inf(x);
        return d * d;
      },
      tol, inf.kinks);
  return std::max(v, 0.0);
}

// ---------------------------------------------------------------------------

std::vector<double> make_grid(double lo, double hi, std::size_t count, bool log_spacing) {
  if (count == 0) raise(ErrorCode::InvalidParameter, "grid needs at least one point");
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi || lo < 0.0) {
    raise(ErrorCode::InvalidParameter, "grid requires finite 0 <= min <= max");
  }
  if (count > 1 && lo == hi) raise(ErrorCode::InvalidParameter, "grid with several points needs min < max");
  if (log_spacing && lo <= 0.0) raise(ErrorCode::InvalidParameter, "log grid requires min > 0");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / last;
    out[i] = log_spacing ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                         : lo + t * (hi - lo);
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> default_grid(const Distribution& f) {
  const double lo = f.quantile(0.01);
  const double hi = f.quantile(0.99);
  if (!(lo < hi)) return {lo};
  return make_grid(lo, hi, 20, lo > 0.0);
}

IFCurve if_curve(std::string_view measure_id, const Distribution& f, std::span<const double> grid,
                 bool with_oracle, const OracleOptions& options) {
  if (grid.empty()) raise(ErrorCode::InvalidParameter, "if_curve needs a non-empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0 || (i > 0 && !(grid[i] > grid[i - 1]))) {
      raise(ErrorCode::InvalidParameter, "grid must be strictly increasing and non-negative");
    }
  }
  const auto t = parse_measure_id(measure_id);
  IFCurve curve{t.id(), f.describe(), {}, 0.0};
  curve.points.reserve(grid.size());

  std::optional<InfluenceFunction> closed;
  std::optional<QsrParts> quintiles;
  std::string setup_error;
  try {
    closed = closed_form_if(t, f, options.tol);
    if (t.kind() == MeasureKind::qsr) quintiles = qsr_parts(f, options.tol);
  } catch (const Error& e) {
    setup_error = std::string(to_string(e.code())) + ": " + e.what();
  }

  for (double z : grid) {
    IFPoint p{z, std::nullopt, std::nullopt, std::nullopt, setup_error};
    if (closed) {
      try {
        if (quintiles) check_qsr_kink(*quintiles, z);
        p.closed_form = (*closed)(z);
      } catch (const Error& e) {
        p.error = std::string(to_string(e.code())) + ": " + e.what();
      }
    }
    if (with_oracle) {
      try {
        const auto est = gateaux_if(t, f, z, options);
        p.oracle = est.value;
        p.oracle_error = est.error;
      } catch (const Error& e) {
        if (p.error.empty()) p.error = std::string(to_string(e.code())) + ": " + e.what();
      }
    }
    if (p.closed_form && p.oracle) {
      curve.max_abs_discrepancy = std::max(curve.max_abs_discrepancy, std::abs(*p.closed_form - *p.oracle));
    }
    curve.points.push_back(std::move(p));
  }
  return curve;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::skipped: return "SKIPPED";
  }
  return "unknown";
}

std::vector<double> qsr_safe_grid(const Distribution& f, std::span<const double> grid, double margin) {
  std::vector<double> out;
  for (double z : grid) {
    const double u = f.cdf(z);
    if (std::abs(u - 0.2) > margin && std::abs(u - 0.8) > margin) out.push_back(z);
  }
  return out;
}

std::vector<VerificationRow> verify_measure(const MeasureFunctional& t, const Distribution& f,
                                            std::span<const double> grid, const VerifyOptions& options) {
  const auto variants = formula_variants(t);
  std::vector<double> points(grid.begin(), grid.end());
  if (t.kind() == MeasureKind::qsr) points = qsr_safe_grid(f, grid, options.kink_margin);

  std::vector<VerificationRow> rows;
  for (const auto& v : variants) {
    rows.push_back(VerificationRow{t.id(), v.source, v.normative, points.size(), 0.0, Verdict::pass, {}});
  }

  const auto skip_all = [&](const std::string& note) {
    for (auto& r : rows) {
      r.verdict = Verdict::skipped;
      r.note = note;
    }
    return rows;
  };

  try {
    (void)closed_form_if(t, f, options.oracle.tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MomentDiverges) return skip_all("moment diverges");
    throw;
  }
  if (points.empty()) return skip_all("no grid points outside kink neighbourhoods");

  std::vector<std::optional<InfluenceFunction>> prepared;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    try {
      prepared.emplace_back(variant_if(t, variants[i].source, f, options.oracle.tol));
    } catch (const Error& e) {
      prepared.emplace_back(std::nullopt);
      rows[i].verdict = e.code() == ErrorCode::MomentDiverges ? Verdict::skipped : Verdict::fail;
      rows[i].note = std::string(to_string(e.code())) + ": " + e.what();
    }
  }

  for (double z : points) {
    std::optional<double> oracle;
    std::string oracle_failure;
    try {
      oracle = gateaux_if(t, f, z, options.oracle).value;
    } catch (const Error& e) {
      oracle_failure = std::string(to_string(e.code())) + " at z = " + format_shortest(z);
    }
    for (std::size_t i = 0; i < variants.size(); ++i) {
      auto& row = rows[i];
      if (!prepared[i]) continue;
      if (!oracle) {
        row.verdict = Verdict::fail;
        if (row.note.empty()) row.note = "oracle failed: " + oracle_failure;
        continue;
      }
      double cf = 0.0;
      try {
        cf = (*prepared[i])(z);
      } catch (const Error& e) {
        row.verdict = Verdict::fail;
        if (row.note.empty()) row.note = std::string(to_string(e.code())) + " at z = " + format_shortest(z);
        continue;
      }
      const double err = std::abs(cf - *oracle);
      row.max_abs_err = std::max(row.max_abs_err, err);
      if (!(err <= std::max(options.abs_tol, options.rel_tol * std::abs(cf)))) row.verdict = Verdict::fail;
    }
  }
  return rows;
}

}  // namespace tlif
