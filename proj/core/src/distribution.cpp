#include "tlif/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "tlif/error.hpp"
#include "tlif/format.hpp"

namespace tlif {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double v) { return format_shortest(v); }

std::string join_params(std::span<const double> params) {
  std::string out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ',';
    out += format_number(params[i]);
  }
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

void require(bool ok, const char* message) {
  if (!ok) raise(ErrorCode::InvalidParameter, message);
}

std::size_t expected_param_count(Kind kind) {
  switch (kind) {
    case Kind::exponential:
    case Kind::dirac: return 1;
    case Kind::pareto:
    case Kind::lognormal:
    case Kind::uniform: return 2;
    case Kind::singh_maddala: return 3;
    default: return 0;
  }
}

}  // namespace

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::pareto: return "pareto";
    case Kind::exponential: return "exp";
    case Kind::lognormal: return "lognormal";
    case Kind::singh_maddala: return "sm";
    case Kind::uniform: return "uniform";
    case Kind::dirac: return "dirac";
    case Kind::contaminated: return "contaminated";
    case Kind::empirical: return "empirical";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// ContinuousLaw

ContinuousLaw::ContinuousLaw(Kind kind, std::span<const double> params, double offset)
    : kind_(kind), offset_(offset) {
  const std::size_t want = expected_param_count(kind);
  require(kind != Kind::dirac && kind != Kind::contaminated && kind != Kind::empirical,
          "continuous law must be pareto, exp, lognormal, sm or uniform");
  require(params.size() == want, "wrong number of distribution parameters");
  for (double p : params) require(std::isfinite(p), "distribution parameters must be finite");
  require(std::isfinite(offset), "location offset must be finite");
  std::copy(params.begin(), params.end(), params_.begin());
  count_ = want;

  const auto& p = params_;
  switch (kind_) {
    case Kind::pareto:
      require(p[0] > 1.0, "pareto shape a must exceed 1 (finite mean)");
      require(p[1] > 0.0, "pareto scale x_m must be positive");
      break;
    case Kind::exponential:
      require(p[0] > 0.0, "exponential rate must be positive");
      break;
    case Kind::lognormal:
      require(p[1] > 0.0, "lognormal sigma must be positive");
      break;
    case Kind::singh_maddala:
      require(p[0] > 0.0 && p[1] > 0.0, "singh-maddala a and b must be positive");
      require(p[2] * p[0] > 1.0, "singh-maddala q must exceed 1/a (finite mean)");
      break;
    case Kind::uniform:
      require(p[0] >= 0.0 && p[0] < p[1], "uniform requires 0 <= lo < hi");
      break;
    default: break;
  }
  mean_ = offset_ + mean0();
  require(lep() >= 0.0, "support must lie in [0, inf)");
  require(mean_ > 0.0 && std::isfinite(mean_), "mean must be finite and positive");
}

double ContinuousLaw::mean0() const {
  const auto& p = params_;
  switch (kind_) {
    case Kind::pareto: return p[0] * p[1] / (p[0] - 1.0);
    case Kind::exponential: return 1.0 / p[0];
    case Kind::lognormal: return std::exp(p[0] + 0.5 * p[1] * p[1]);
    case Kind::singh_maddala: {
      const double a = p[0], b = p[1], q = p[2];
      return b * std::exp(std::lgamma(1.0 + 1.0 / a) + std::lgamma(q - 1.0 / a) - std::lgamma(q));
    }
    case Kind::uniform: return 0.5 * (p[0] + p[1]);
    default: return 0.0;
  }
}

double ContinuousLaw::cdf0(double y) const {
  const auto& p = params_;
  switch (kind_) {
    case Kind::pareto: return y <= p[1] ? 0.0 : 1.0 - std::pow(p[1] / y, p[0]);
    case Kind::exponential: return y <= 0.0 ? 0.0 : -std::expm1(-p[0] * y);
    case Kind::lognormal: return y <= 0.0 ? 0.0 : normal_cdf((std::log(y) - p[0]) / p[1]);
    case Kind::singh_maddala:
      return y <= 0.0 ? 0.0 : -std::expm1(-p[2] * std::log1p(std::pow(y / p[1], p[0])));
    case Kind::uniform:
      if (y <= p[0]) return 0.0;
      if (y >= p[1]) return 1.0;
      return (y - p[0]) / (p[1] - p[0]);
    default: return 0.0;
  }
}

double ContinuousLaw::pdf0(double y) const {
  const auto& p = params_;
  switch (kind_) {
    case Kind::pareto: return y < p[1] ? 0.0 : p[0] * std::pow(p[1], p[0]) / std::pow(y, p[0] + 1.0);
    case Kind::exponential: return y < 0.0 ? 0.0 : p[0] * std::exp(-p[0] * y);
    case Kind::lognormal: {
      if (y <= 0.0) return 0.0;
      const double t = (std::log(y) - p[0]) / p[1];
      return std::exp(-0.5 * t * t) / (y * p[1] * std::sqrt(2.0 * std::numbers::pi));
    }
    case Kind::singh_maddala: {
      if (y <= 0.0) return 0.0;
      const double a = p[0], b = p[1], q = p[2];
      const double v = std::pow(y / b, a);
      return a * q * v / y * std::exp(-(q + 1.0) * std::log1p(v));
    }
    case Kind::uniform: return (y < p[0] || y > p[1]) ? 0.0 : 1.0 / (p[1] - p[0]);
    default: return 0.0;
  }
}

double ContinuousLaw::quantile0(double u) const {
  const auto& p = params_;
  switch (kind_) {
    case Kind::pareto: return p[1] * std::pow(1.0 - u, -1.0 / p[0]);
    case Kind::exponential: return -std::log1p(-u) / p[0];
    case Kind::lognormal: return std::exp(p[0] + p[1] * normal_quantile(u));
    case Kind::singh_maddala:
      return p[1] * std::pow(std::expm1(-std::log1p(-u) / p[2]), 1.0 / p[0]);
    case Kind::uniform: return p[0] + u * (p[1] - p[0]);
    default: return 0.0;
  }
}

double ContinuousLaw::partial_mean0(double y) const {
  const auto& p = params_;
  switch (kind_) {
    case Kind::pareto:
      return y <= p[1] ? 0.0 : mean0() * (1.0 - std::pow(p[1] / y, p[0] - 1.0));
    case Kind::exponential: {
      if (y <= 0.0) return 0.0;
      const double t = p[0] * y;
      return (-std::expm1(-t) - t * std::exp(-t)) / p[0];
    }
    case Kind::lognormal:
      return y <= 0.0 ? 0.0 : mean0() * normal_cdf((std::log(y) - p[0] - p[1] * p[1]) / p[1]);
    case Kind::singh_maddala: {
      if (y <= 0.0) return 0.0;
      const double a = p[0], q = p[2];
      const double v = std::pow(y / p[1], a);
      if (!std::isfinite(v)) return mean0();
      return mean0() * boost::math::ibeta(1.0 + 1.0 / a, q - 1.0 / a, v / (1.0 + v));
    }
    case Kind::uniform: {
      const double c = std::clamp(y, p[0], p[1]);
      return (c - p[0]) * (c + p[0]) / (2.0 * (p[1] - p[0]));
    }
    default: return 0.0;
  }
}

double ContinuousLaw::cdf(double x) const { return cdf0(x - offset_); }
double ContinuousLaw::pdf(double x) const { return pdf0(x - offset_); }

double ContinuousLaw::quantile(double p) const {
  if (p <= 0.0) return lep();
  if (p >= 1.0) return uep();
  return offset_ + quantile0(p);
}

double ContinuousLaw::partial_mean(double x) const {
  const double y = x - offset_;
  return offset_ * cdf0(y) + partial_mean0(y);
}

double ContinuousLaw::lep() const {
  switch (kind_) {
    case Kind::pareto: return offset_ + params_[1];
    case Kind::uniform: return offset_ + params_[0];
    default: return offset_;
  }
}

double ContinuousLaw::uep() const { return kind_ == Kind::uniform ? offset_ + params_[1] : kInf; }

ContinuousLaw ContinuousLaw::scaled(double c) const {
  std::array<double, 3> p = params_;
  switch (kind_) {
    case Kind::pareto: p[1] *= c; break;
    case Kind::exponential: p[0] /= c; break;
    case Kind::lognormal: p[0] += std::log(c); break;
    case Kind::singh_maddala: p[1] *= c; break;
    case Kind::uniform: p[0] *= c; p[1] *= c; break;
    default: break;
  }
  return ContinuousLaw(kind_, std::span<const double>(p.data(), count_), offset_ * c);
}

ContinuousLaw ContinuousLaw::shifted(double c) const {
  return ContinuousLaw(kind_, params(), offset_ + c);
}

std::string ContinuousLaw::describe() const {
  std::string base = std::string(to_string(kind_)) + ":" + join_params(params());
  if (offset_ != 0.0) return "shift(" + base + ";" + format_number(offset_) + ")";
  return base;
}

// ---------------------------------------------------------------------------
// Distribution

Distribution Distribution::from_law(const ContinuousLaw& law) {
  Distribution d;
  d.kind_ = law.kind();
  d.law_ = law;
  d.law_weight_ = 1.0;
  d.finish();
  return d;
}

Distribution Distribution::from_parts(Kind kind, std::optional<ContinuousLaw> law,
                                      double law_weight, std::vector<Atom> atoms) {
  Distribution d;
  d.kind_ = kind;
  if (law && law_weight > 0.0) {
    d.law_ = std::move(law);
    d.law_weight_ = law_weight;
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& l, const Atom& r) { return l.location < r.location; });
  for (const auto& a : atoms) {
    if (!(a.mass > 0.0)) continue;
    if (!d.atoms_.empty() && d.atoms_.back().location == a.location) {
      d.atoms_.back().mass += a.mass;
    } else {
      d.atoms_.push_back(a);
    }
  }
  d.finish();
  return d;
}

Distribution Distribution::from_sample(const Sample& sample) {
  Distribution d;
  d.kind_ = Kind::empirical;
  const auto values = sample.values();
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    d.atoms_.push_back(Atom{values[i], static_cast<double>(j - i) / n});
    i = j;
  }
  d.sample_ = sample;
  d.finish();
  return d;
}

void Distribution::finish() {
  if (sample_) {
    mean_ = sample_->mean();
  } else {
    double m = law_ ? law_weight_ * law_->mean() : 0.0;
    for (const auto& a : atoms_) m += a.mass * a.location;
    mean_ = m;
  }
  lep_ = kInf;
  uep_ = -kInf;
  if (law_) {
    lep_ = law_->lep();
    uep_ = law_->uep();
  }
  if (!atoms_.empty()) {
    lep_ = std::min(lep_, atoms_.front().location);
    uep_ = std::max(uep_, atoms_.back().location);
  }
  require(!atoms_.empty() || law_.has_value(), "distribution has no mass");
  require(lep_ >= 0.0, "income distributions must live on [0, inf)");
  require(mean_ > 0.0 && std::isfinite(mean_), "mean must be finite and positive");
}

double Distribution::cdf(double x) const {
  if (sample_) {
    const auto v = sample_->values();
    const auto count = std::upper_bound(v.begin(), v.end(), x) - v.begin();
    return static_cast<double>(count) / static_cast<double>(v.size());
  }
  double c = law_ ? law_weight_ * law_->cdf(x) : 0.0;
  for (const auto& a : atoms_) {
    if (a.location > x) break;
    c += a.mass;
  }
  return std::min(c, 1.0);
}

double Distribution::pdf(double x) const { return law_ ? law_weight_ * law_->pdf(x) : 0.0; }

double Distribution::mass_at(double x) const {
  if (sample_) {
    const auto v = sample_->values();
    const auto [lo, hi] = std::equal_range(v.begin(), v.end(), x);
    return static_cast<double>(hi - lo) / static_cast<double>(v.size());
  }
  const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                                   [](const Atom& a, double v) { return a.location < v; });
  return (it != atoms_.end() && it->location == x) ? it->mass : 0.0;
}

double Distribution::partial_mean(double x) const {
  if (sample_) {
    double sum = 0.0;
    for (double v : sample_->values()) {
      if (v > x) break;
      sum += v;
    }
    return sum / static_cast<double>(sample_->size());
  }
  double s = law_ ? law_weight_ * law_->partial_mean(x) : 0.0;
  for (const auto& a : atoms_) {
    if (a.location > x) break;
    s += a.mass * a.location;
  }
  return s;
}

double Distribution::quantile(double p) const {
  if (std::isnan(p) || p < 0.0 || p > 1.0) {
    raise(ErrorCode::InvalidParameter, "quantile level must lie in [0, 1]");
  }
  if (p == 0.0) return lep_;
  if (p == 1.0) return uep_;

  if (sample_) {
    const auto v = sample_->values();
    const std::size_t n = v.size();
    const double nd = static_cast<double>(n);
    // smallest k with k/n >= p, compared on the same k/n doubles the cdf uses
    auto k = static_cast<std::size_t>(std::ceil(p * nd));
    k = std::clamp<std::size_t>(k, 1, n);
    while (k > 1 && static_cast<double>(k - 1) / nd >= p) --k;
    while (k < n && static_cast<double>(k) / nd < p) ++k;
    return v[k - 1];
  }

  double below = 0.0;  // atom mass at or below the start of the current segment
  double prev = -kInf;
  for (std::size_t j = 0;; ++j) {
    const double next = j < atoms_.size() ? atoms_[j].location : kInf;
    if (law_) {
      const double u = (p - below) / law_weight_;
      if (u <= 1.0) {
        const double x = law_->quantile(std::max(u, 0.0));
        if (x < next) return std::max(x, prev);
      }
    }
    if (j == atoms_.size()) break;
    below += atoms_[j].mass;
    const double at_atom = (law_ ? law_weight_ * law_->cdf(next) : 0.0) + below;
    if (at_atom >= p) return next;
    prev = next;
  }
  return uep_;
}

std::string Distribution::describe() const {
  if (sample_) return "empirical:n=" + std::to_string(sample_->size());
  if (kind_ == Kind::dirac) return "dirac:" + format_number(atoms_.front().location);
  if (kind_ != Kind::contaminated && law_) return law_->describe();
  std::string out = "mixture(";
  bool first = true;
  if (law_) {
    out += format_number(law_weight_) + "*" + law_->describe();
    first = false;
  }
  for (const auto& a : atoms_) {
    if (!first) out += "+";
    out += format_number(a.mass) + "*dirac:" + format_number(a.location);
    first = false;
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// Free functions

Distribution make_distribution(Kind kind, std::span<const double> params) {
  if (kind == Kind::dirac) {
    require(params.size() == 1, "dirac takes one parameter");
    require(std::isfinite(params[0]) && params[0] > 0.0, "dirac location c must be positive");
    return Distribution::from_parts(Kind::dirac, std::nullopt, 0.0, {Atom{params[0], 1.0}});
  }
  require(kind != Kind::contaminated && kind != Kind::empirical,
          "use contaminate() or empirical() for mixture and sample kinds");
  return Distribution::from_law(ContinuousLaw(kind, params));
}

Distribution exponential(double rate) {
  const std::array p{rate};
  return make_distribution(Kind::exponential, p);
}
Distribution pareto(double shape, double scale) {
  const std::array p{shape, scale};
  return make_distribution(Kind::pareto, p);
}
Distribution lognormal(double m, double sigma) {
  const std::array p{m, sigma};
  return make_distribution(Kind::lognormal, p);
}
Distribution singh_maddala(double a, double b, double q) {
  const std::array p{a, b, q};
  return make_distribution(Kind::singh_maddala, p);
}
Distribution uniform(double lo, double hi) {
  const std::array p{lo, hi};
  return make_distribution(Kind::uniform, p);
}
Distribution dirac(double c) {
  const std::array p{c};
  return make_distribution(Kind::dirac, p);
}
Distribution empirical(const Sample& sample) { return Distribution::from_sample(sample); }

Distribution contaminate(const Distribution& base, double epsilon, double z) {
  require(epsilon >= 0.0 && epsilon <= 1.0, "contamination weight epsilon must lie in [0, 1]");
  require(std::isfinite(z) && z >= 0.0, "contamination point z must be finite and non-negative");
  std::vector<Atom> atoms;
  atoms.reserve(base.atoms().size() + 1);
  for (const auto& a : base.atoms()) atoms.push_back(Atom{a.location, (1.0 - epsilon) * a.mass});
  atoms.push_back(Atom{z, epsilon});
  return Distribution::from_parts(Kind::contaminated, base.law(),
                                  (1.0 - epsilon) * base.law_weight(), std::move(atoms));
}

Distribution scaled(const Distribution& f, double c) {
  require(std::isfinite(c) && c > 0.0, "scale factor must be positive");
  if (const Sample* s = f.sample()) {
    std::vector<double> v(s->values().begin(), s->values().end());
    for (double& x : v) x *= c;
    return empirical(Sample::from_values(std::move(v)));
  }
  std::vector<Atom> atoms(f.atoms().begin(), f.atoms().end());
  for (auto& a : atoms) a.location *= c;
  std::optional<ContinuousLaw> law;
  if (f.law()) law = f.law()->scaled(c);
  if (f.kind() != Kind::contaminated && law) return Distribution::from_law(*law);
  return Distribution::from_parts(f.kind(), law, f.law_weight(), std::move(atoms));
}

Distribution shifted(const Distribution& f, double c) {
  require(std::isfinite(c), "shift must be finite");
  if (const Sample* s = f.sample()) {
    std::vector<double> v(s->values().begin(), s->values().end());
    for (double& x : v) x += c;
    return empirical(Sample::from_values(std::move(v)));
  }
  std::vector<Atom> atoms(f.atoms().begin(), f.atoms().end());
  for (auto& a : atoms) a.location += c;
  std::optional<ContinuousLaw> law;
  if (f.law()) law = f.law()->shifted(c);
  if (f.kind() != Kind::contaminated && law) return Distribution::from_law(*law);
  return Distribution::from_parts(f.kind(), law, f.law_weight(), std::move(atoms));
}

double expect_law(const ContinuousLaw& law, const RealFunction& g, const Tolerance& tol,
                  std::span<const double> breakpoints) {
  std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
  cuts.push_back(law.median());
  const RealFunction integrand = [&law, &g](double x) {
    const double w = law.pdf(x);
    if (w == 0.0) return 0.0;
    return g(x) * w;
  };
  return integrate_piecewise(integrand, law.lep(), law.uep(), cuts, tol);
}

double expect(const Distribution& f, const RealFunction& g, const Tolerance& tol,
              std::span<const double> breakpoints) {
  if (const Sample* s = f.sample()) {
    double sum = 0.0;
    for (double v : s->values()) sum += g(v);
    return sum / static_cast<double>(s->size());
  }
  double total = 0.0;
  if (f.law()) total += f.law_weight() * expect_law(*f.law(), g, tol, breakpoints);
  for (const auto& a : f.atoms()) total += a.mass * g(a.location);
  return total;
}

double quantile(const Distribution& f, double p) { return f.quantile(p); }

double quantile_integral(const Distribution& f, double p) {
  require(!std::isnan(p) && p >= 0.0 && p <= 1.0, "probability level must lie in [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return f.mean();
  const double x = f.quantile(p);
  return f.partial_mean(x) - x * (f.cdf(x) - p);
}

double lorenz(const Distribution& f, double p, const Tolerance& /*tol*/) {
  require(!std::isnan(p) && p >= 0.0 && p <= 1.0, "Lorenz level must lie in [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  return quantile_integral(f, p) / f.mean();
}

double cumulative_functional(const Distribution& f, double p, const Tolerance& /*tol*/) {
  require(!std::isnan(p) && p >= 0.0 && p <= 1.0, "probability level must lie in [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return f.mean();
  return f.partial_mean(f.quantile(p));
}

}  // namespace tlif
