#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tlif/numeric.hpp"
#include "tlif/sample.hpp"

namespace tlif {

enum class Kind {
  pareto,
  exponential,
  lognormal,
  singh_maddala,
  uniform,
  dirac,
  contaminated,
  empirical,
};

std::string_view to_string(Kind kind);

/// Point mass of weight `mass` at `location`.
struct Atom {
  double location;
  double mass;
};

/// An absolutely continuous parametric income law, optionally translated
/// by a location offset (X = offset + Y).
///
/// Parameter layouts:
///   pareto         {shape a, scale x_m}
///   exponential    {rate}
///   lognormal      {m, sigma}          log X ~ N(m, sigma^2)
///   singh_maddala  {a, b, q}           F(x) = 1 - (1 + (x/b)^a)^(-q)
///   uniform        {lo, hi}
class ContinuousLaw {
 public:
  ContinuousLaw(Kind kind, std::span<const double> params, double offset = 0.0);

  Kind kind() const noexcept { return kind_; }
  std::span<const double> params() const noexcept { return {params_.data(), count_}; }
  double offset() const noexcept { return offset_; }

  double cdf(double x) const;
  double pdf(double x) const;
  double quantile(double p) const;
  double mean() const noexcept { return mean_; }
  double median() const { return quantile(0.5); }
  /// Integral of y dF(y) over y <= x, in closed form.
  double partial_mean(double x) const;
  double lep() const;
  double uep() const;

  ContinuousLaw scaled(double c) const;
  ContinuousLaw shifted(double c) const;
  std::string describe() const;

 private:
  double cdf0(double y) const;
  double pdf0(double y) const;
  double quantile0(double p) const;
  double partial_mean0(double y) const;
  double mean0() const;

  Kind kind_;
  std::array<double, 3> params_{};
  std::size_t count_ = 0;
  double offset_ = 0.0;
  double mean_ = 0.0;
};

/// Immutable income distribution: a weighted continuous law plus a sorted
/// list of atoms. Empirical distributions keep the sample so that
/// expectations are plain sample averages.
class Distribution {
 public:
  Kind kind() const noexcept { return kind_; }

  double cdf(double x) const;
  /// Density of the continuous part (already weighted); atoms excluded.
  double pdf(double x) const;
  double quantile(double p) const;
  double mean() const noexcept { return mean_; }
  double lep() const noexcept { return lep_; }
  double uep() const noexcept { return uep_; }
  double mass_at(double x) const;
  /// Integral of y dF(y) over y <= x, atoms at or below x included.
  double partial_mean(double x) const;

  const std::optional<ContinuousLaw>& law() const noexcept { return law_; }
  double law_weight() const noexcept { return law_weight_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  const Sample* sample() const noexcept { return sample_ ? &*sample_ : nullptr; }

  std::string describe() const;

  static Distribution from_law(const ContinuousLaw& law);
  static Distribution from_parts(Kind kind, std::optional<ContinuousLaw> law, double law_weight,
                                 std::vector<Atom> atoms);
  static Distribution from_sample(const Sample& sample);

 private:
  Distribution() = default;
  void finish();

  Kind kind_ = Kind::dirac;
  std::optional<ContinuousLaw> law_;
  double law_weight_ = 0.0;
  std::vector<Atom> atoms_;
  std::optional<Sample> sample_;
  double mean_ = 0.0;
  double lep_ = 0.0;
  double uep_ = 0.0;
};

/// Validating factory for the parametric kinds and dirac {c}.
Distribution make_distribution(Kind kind, std::span<const double> params);

Distribution exponential(double rate);
Distribution pareto(double shape, double scale);
Distribution lognormal(double m, double sigma);
Distribution singh_maddala(double a, double b, double q);
Distribution uniform(double lo, double hi);
Distribution dirac(double c);
Distribution empirical(const Sample& sample);

/// (1 - epsilon) F + epsilon * delta_z, kept exact through an explicit atom.
Distribution contaminate(const Distribution& base, double epsilon, double z);

/// Law of cX and of X + c.
Distribution scaled(const Distribution& f, double c);
Distribution shifted(const Distribution& f, double c);

/// E_F[g(X)]. Atoms contribute exactly; empirical kinds return the sample
/// average; the continuous part is integrated, split at the median and at
/// any supplied breakpoints. Throws NonConvergence on a divergent integral.
double expect(const Distribution& f, const RealFunction& g, const Tolerance& tol = {},
              std::span<const double> breakpoints = {});

/// Integral of g dF over the continuous law alone (unweighted).
double expect_law(const ContinuousLaw& law, const RealFunction& g, const Tolerance& tol = {},
                  std::span<const double> breakpoints = {});

/// Generalized inverse inf{x : F(x) >= p}; Q(0) = lep and Q(1) = uep.
double quantile(const Distribution& f, double p);

/// L(F, p) = (integral of Q over [0, p]) / mean.
double lorenz(const Distribution& f, double p, const Tolerance& tol = {});

/// Integral of Q over [0, p], with an atom at Q(p) split fractionally.
double quantile_integral(const Distribution& f, double p);

/// C(F, p): integral of x dF(x) over x <= Q(p), atoms included whole.
double cumulative_functional(const Distribution& f, double p, const Tolerance& tol = {});

}  // namespace tlif
