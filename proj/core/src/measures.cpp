#include "tlif/measures.hpp"

#include <cmath>

#include "tlif/error.hpp"
#include "tlif/format.hpp"

namespace tlif {

namespace {

double constant_zero(double) { return 0.0; }
double constant_one(double) { return 1.0; }
double identity(double s) { return s; }

double x_log_x(double s) { return s > 0.0 ? s * std::log(s) : 0.0; }

}  // namespace

std::string TheilLikeSpec::id() const {
  switch (family) {
    case Family::generalized_entropy: return "ge:" + format_shortest(param);
    case Family::theil: return "theil";
    case Family::mld: return "mld";
    case Family::atkinson: return "atkinson:" + format_shortest(param);
    case Family::champernowne: return "champernowne";
    case Family::kolm: return "kolm:" + format_shortest(param);
  }
  return "unknown";
}

TheilLikeSpec make_spec(Family family, double param) {
  TheilLikeSpec s{family, 0.0, {}, {}, {}, {}, {}, {}, {}, {}};
  const auto need_finite = [&] {
    if (!std::isfinite(param)) raise(ErrorCode::InvalidParameter, "family parameter must be finite");
  };
  switch (family) {
    case Family::generalized_entropy: {
      need_finite();
      if (param == 0.0) {
        raise(ErrorCode::InvalidParameter, "generalized entropy needs alpha != 0; use mld for the limit");
      }
      if (param == 1.0) {
        raise(ErrorCode::InvalidParameter, "generalized entropy needs alpha != 1; use theil for the limit");
      }
      const double a = param;
      const double c = 1.0 / (a * (a - 1.0));
      s.param = a;
      s.tau = [c](double v) { return (v - 1.0) * c; };
      s.tau_prime = [c](double) { return c; };
      s.h = [a](double v) { return std::pow(v, a); };
      s.h_prime = [a](double v) { return a * std::pow(v, a - 1.0); };
      s.h1 = s.h;
      s.h1_prime = s.h_prime;
      s.h2 = constant_zero;
      s.h2_prime = constant_zero;
      break;
    }
    case Family::theil:
      s.tau = identity;
      s.tau_prime = constant_one;
      s.h = x_log_x;
      s.h_prime = [](double v) { return std::log(v) + 1.0; };
      s.h1 = identity;
      s.h1_prime = constant_one;
      s.h2 = [](double v) { return std::log(v); };
      s.h2_prime = [](double v) { return 1.0 / v; };
      break;
    case Family::mld:
      s.tau = identity;
      s.tau_prime = constant_one;
      s.h = [](double v) { return -std::log(v); };
      s.h_prime = [](double v) { return -1.0 / v; };
      s.h1 = constant_one;
      s.h1_prime = constant_zero;
      s.h2 = s.h;
      s.h2_prime = s.h_prime;
      break;
    case Family::atkinson: {
      need_finite();
      if (!(param < 1.0) || param == 0.0) {
        raise(ErrorCode::InvalidParameter, "atkinson needs alpha < 1 and alpha != 0");
      }
      const double a = param;
      s.param = a;
      s.tau = [a](double v) { return 1.0 - std::pow(v, 1.0 / a); };
      s.tau_prime = [a](double v) { return -std::pow(v, 1.0 / a - 1.0) / a; };
      s.h = [a](double v) { return std::pow(v, a); };
      s.h_prime = [a](double v) { return a * std::pow(v, a - 1.0); };
      s.h1 = s.h;
      s.h1_prime = s.h_prime;
      s.h2 = constant_zero;
      s.h2_prime = constant_zero;
      break;
    }
    case Family::champernowne:
      s.tau = [](double v) { return -std::expm1(v); };
      s.tau_prime = [](double v) { return -std::exp(v); };
      s.h = [](double v) { return std::log(v); };
      s.h_prime = [](double v) { return 1.0 / v; };
      s.h1 = constant_one;
      s.h1_prime = constant_zero;
      s.h2 = s.h;
      s.h2_prime = s.h_prime;
      break;
    case Family::kolm: {
      need_finite();
      if (!(param > 0.0)) raise(ErrorCode::InvalidParameter, "kolm needs alpha > 0");
      const double a = param;
      s.param = a;
      s.tau = [a](double v) { return std::log(v) / a; };
      s.tau_prime = [a](double v) { return 1.0 / (a * v); };
      s.h = [a](double v) { return std::exp(-a * v); };
      s.h_prime = [a](double v) { return -a * std::exp(-a * v); };
      s.h1 = s.h;
      s.h1_prime = s.h_prime;
      s.h2 = constant_zero;
      s.h2_prime = constant_zero;
      break;
    }
  }
  return s;
}

TheilLikeSpec atkinson_aversion(double aversion) {
  return make_spec(Family::atkinson, 1.0 - aversion);
}

FunctionalValue functional_value(const TheilLikeSpec& spec, const Distribution& f,
                                 const Tolerance& tol) {
  for (const auto& a : f.atoms()) {
    if (!std::isfinite(spec.h(a.location))) {
      raise(ErrorCode::DomainError,
            spec.id() + ": h is undefined at income " + format_shortest(a.location));
    }
  }
  double eh = 0.0;
  try {
    eh = expect(f, spec.h, tol);
  } catch (const NonConvergence& e) {
    raise(ErrorCode::MomentDiverges, spec.id() + ": E h(X) does not converge on " +
                                         f.describe() + " (" + e.what() + ")");
  }
  if (!std::isfinite(eh)) raise(ErrorCode::DomainError, spec.id() + ": E h(X) is not finite");

  const double mu = f.mean();
  const double h1 = spec.h1(mu);
  if (h1 == 0.0 || !std::isfinite(h1)) {
    raise(ErrorCode::DegenerateDenominator, spec.id() + ": h1(mu_F) vanishes");
  }
  const double index = eh / h1 - spec.h2(mu);
  const double value = spec.tau(index);
  if (!std::isfinite(value)) raise(ErrorCode::DomainError, spec.id() + ": tau(I) is not finite");
  return FunctionalValue{value, index, mu, eh};
}

double plugin_estimate(const TheilLikeSpec& spec, const Sample& s) {
  return functional_value(spec, empirical(s)).value;
}

MomentCheck check_moments(const TheilLikeSpec& spec, const Distribution& f, const Tolerance& tol) {
  const auto converges = [&](const RealFunction& g) {
    try {
      return std::isfinite(expect(f, g, tol));
    } catch (const NonConvergence&) {
      return false;
    }
  };
  const bool first = converges([&](double x) { return std::abs(spec.h(x)); });
  const bool second = first && converges([&](double x) {
    const double v = spec.h(x);
    return v * v;
  });
  return MomentCheck{first, second};
}

// R(F) * mu = integral of (1 - s) Q(s) ds, evaluated in income space. Each
// atom a of mass m occupies the probability band [G(a-), G(a)]; the
// continuous part contributes integral x (1 - G(x)) dG_c(x), which splits
// into base-law moments and partial means at the atoms.
GiniParts gini_parts(const Distribution& f, const Tolerance& tol) {
  const double mu = f.mean();
  double area = 0.0;
  if (const Sample* s = f.sample()) {
    const auto v = s->values();
    const double n = static_cast<double>(v.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      acc += v[i] * (2.0 * n - 2.0 * static_cast<double>(i) - 1.0);
    }
    area = acc / (2.0 * n * n * mu);
  } else {
    const double w = f.law_weight();
    double below = 0.0;
    double total = 0.0;
    for (const auto& a : f.atoms()) {
      const double g_left = (f.law() ? w * f.law()->cdf(a.location) : 0.0) + below;
      total += a.location * a.mass * (1.0 - g_left - 0.5 * a.mass);
      below += a.mass;
    }
    if (const auto& law = f.law()) {
      const double mu_b = law->mean();
      const double cross = expect_law(*law, [&law](double x) { return x * law->cdf(x); }, tol);
      double upper = 0.0;
      for (const auto& a : f.atoms()) upper += a.mass * (mu_b - law->partial_mean(a.location));
      total += w * (mu_b - w * cross - upper);
    }
    area = total / mu;
  }
  return GiniParts{1.0 - 2.0 * area, area};
}

double gini(const Distribution& f, const Tolerance& tol) { return gini_parts(f, tol).gini; }

double gini_plugin(const Sample& s) { return gini(empirical(s)); }

QsrParts qsr_parts(const Distribution& f, const Tolerance& /*tol*/) {
  const double bottom = quantile_integral(f, 0.2);
  const double top = f.mean() - quantile_integral(f, 0.8);
  if (!(bottom > 0.0)) {
    raise(ErrorCode::DegenerateDenominator, "qsr: bottom-quintile income mass is zero");
  }
  return QsrParts{top / bottom, top, bottom, f.quantile(0.2), f.quantile(0.8)};
}

double qsr(const Distribution& f, const Tolerance& tol) { return qsr_parts(f, tol).value; }

double qsr_plugin(const Sample& s) { return qsr(empirical(s)); }

// ---------------------------------------------------------------------------

MeasureFunctional MeasureFunctional::theil_like(TheilLikeSpec spec) {
  MeasureFunctional m(MeasureKind::theil_like, spec.id());
  m.spec_.push_back(std::move(spec));
  return m;
}

MeasureFunctional MeasureFunctional::gini() { return {MeasureKind::gini, "gini"}; }
MeasureFunctional MeasureFunctional::qsr() { return {MeasureKind::qsr, "qsr"}; }
MeasureFunctional MeasureFunctional::mean() { return {MeasureKind::mean, "mean"}; }

const TheilLikeSpec& MeasureFunctional::spec() const {
  if (spec_.empty()) raise(ErrorCode::InvalidParameter, id_ + " is not a Theil-like measure");
  return spec_.front();
}

bool MeasureFunctional::is_relative() const noexcept {
  switch (kind_) {
    case MeasureKind::theil_like: return spec_.front().family != Family::kolm;
    case MeasureKind::gini:
    case MeasureKind::qsr: return true;
    case MeasureKind::mean: return false;
  }
  return false;
}

double MeasureFunctional::evaluate(const Distribution& f, const Tolerance& tol) const {
  switch (kind_) {
    case MeasureKind::theil_like: return functional_value(spec_.front(), f, tol).value;
    case MeasureKind::gini: return tlif::gini(f, tol);
    case MeasureKind::qsr: return tlif::qsr(f, tol);
    case MeasureKind::mean: return f.mean();
  }
  return 0.0;
}

double MeasureFunctional::evaluate(const Sample& s) const {
  switch (kind_) {
    case MeasureKind::theil_like: return plugin_estimate(spec_.front(), s);
    case MeasureKind::gini: return gini_plugin(s);
    case MeasureKind::qsr: return qsr_plugin(s);
    case MeasureKind::mean: return s.mean();
  }
  return 0.0;
}

MeasureFunctional parse_measure_id(std::string_view id) {
  const auto colon = id.find(':');
  const std::string_view name = id.substr(0, colon);
  const bool has_param = colon != std::string_view::npos;
  const auto param = [&]() -> double {
    if (!has_param) raise(ErrorCode::InvalidParameter, "measure id '" + std::string(id) + "' needs :<parameter>");
    const auto v = parse_double(id.substr(colon + 1));
    if (!v) raise(ErrorCode::InvalidParameter, "bad parameter in measure id '" + std::string(id) + "'");
    return *v;
  };
  const auto no_param = [&] {
    if (has_param) raise(ErrorCode::InvalidParameter, "measure id '" + std::string(id) + "' takes no parameter");
  };

  if (name == "ge") return MeasureFunctional::theil_like(make_spec(Family::generalized_entropy, param()));
  if (name == "atkinson") return MeasureFunctional::theil_like(make_spec(Family::atkinson, param()));
  if (name == "kolm") return MeasureFunctional::theil_like(make_spec(Family::kolm, param()));
  if (name == "theil") return no_param(), MeasureFunctional::theil_like(make_spec(Family::theil));
  if (name == "mld") return no_param(), MeasureFunctional::theil_like(make_spec(Family::mld));
  if (name == "champernowne") {
    return no_param(), MeasureFunctional::theil_like(make_spec(Family::champernowne));
  }
  if (name == "gini") return no_param(), MeasureFunctional::gini();
  if (name == "qsr") return no_param(), MeasureFunctional::qsr();
  if (name == "mean") return no_param(), MeasureFunctional::mean();
  raise(ErrorCode::InvalidParameter, "unknown measure id '" + std::string(id) + "'");
}

std::vector<std::string> registry_ids() {
  return {"ge:-1", "ge:0.5", "ge:2", "theil", "mld", "atkinson:0.5",
          "champernowne", "kolm:1", "gini", "qsr"};
}

}  // namespace tlif
