#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "tlif/distribution.hpp"
#include "tlif/numeric.hpp"
#include "tlif/sample.hpp"

namespace tlif {

/// Version of the measure-id grammar below; reports carry it.
inline constexpr int kRegistryVersion = 1;

enum class Family { generalized_entropy, theil, mld, atkinson, champernowne, kolm };

/// One member of the Theil-like family
///   T(F) = tau( E h(X) / h1(mu_F) - h2(mu_F) ),
/// stored as the quadruple (tau, h, h1, h2) with analytic derivatives.
struct TheilLikeSpec {
  Family family;
  double param = 0.0;
  RealFunction tau, tau_prime;
  RealFunction h, h_prime;
  RealFunction h1, h1_prime;
  RealFunction h2, h2_prime;

  /// Stable registry id, e.g. "ge:2", "theil", "atkinson:0.5".
  std::string id() const;
};

/// Parameter constraints: GE alpha not in {0, 1}; Atkinson alpha < 1,
/// alpha != 0; Kolm alpha > 0. The parameter is ignored for theil, mld and
/// champernowne. Throws InvalidParameter.
TheilLikeSpec make_spec(Family family, double param = 0.0);

/// Atkinson in the inequality-aversion parameterization
///   A(e) = 1 - (E X^(1-e))^(1/(1-e)) / mu,
/// i.e. make_spec(atkinson, 1 - e).
TheilLikeSpec atkinson_aversion(double aversion);

struct FunctionalValue {
  double value;       // T(F)
  double index;       // I
  double mean;        // mu_F
  double expected_h;  // E h(X)
};

/// Population functional and its intermediates. Throws MomentDiverges when
/// E h(X) does not converge, DegenerateDenominator when h1(mu_F) = 0 and
/// DomainError when h is undefined on an atom (e.g. log 0).
FunctionalValue functional_value(const TheilLikeSpec& spec, const Distribution& f,
                                 const Tolerance& tol = {});

/// Equals functional_value(spec, empirical(s)).value.
double plugin_estimate(const TheilLikeSpec& spec, const Sample& s);

struct MomentCheck {
  bool first_finite;   // E |h(X)| < inf
  bool second_finite;  // E h(X)^2 < inf
};

/// Numerical check of the moment condition E h^j(X) < inf, j = 1, 2.
MomentCheck check_moments(const TheilLikeSpec& spec, const Distribution& f,
                          const Tolerance& tol = {});

struct GiniParts {
  double gini;
  double lorenz_area;  // R(F): integral of L(F, p) over [0, 1]
};

GiniParts gini_parts(const Distribution& f, const Tolerance& tol = {});
double gini(const Distribution& f, const Tolerance& tol = {});
double gini_plugin(const Sample& s);

struct QsrParts {
  double value;
  double top;     // N(F): income mass of the top quintile
  double bottom;  // D(F): income mass of the bottom quintile
  double q20;
  double q80;
};

/// Quintile masses are quantile integrals, so an atom sitting on a quintile
/// boundary is split fractionally. Throws DegenerateDenominator if D(F) = 0.
QsrParts qsr_parts(const Distribution& f, const Tolerance& tol = {});
double qsr(const Distribution& f, const Tolerance& tol = {});
double qsr_plugin(const Sample& s);

enum class MeasureKind { theil_like, gini, qsr, mean };

/// Uniform "distribution -> real" handle over every implemented measure.
class MeasureFunctional {
 public:
  static MeasureFunctional theil_like(TheilLikeSpec spec);
  static MeasureFunctional gini();
  static MeasureFunctional qsr();
  /// The mean functional; not an inequality measure, kept as a reference
  /// functional with an exactly linear contamination path.
  static MeasureFunctional mean();

  MeasureKind kind() const noexcept { return kind_; }
  const std::string& id() const noexcept { return id_; }
  /// Throws InvalidParameter when the functional is not Theil-like.
  const TheilLikeSpec& spec() const;
  /// Invariant under X -> cX.
  bool is_relative() const noexcept;

  double evaluate(const Distribution& f, const Tolerance& tol = {}) const;
  double evaluate(const Sample& s) const;

 private:
  MeasureFunctional(MeasureKind kind, std::string id) : kind_(kind), id_(std::move(id)) {}

  MeasureKind kind_;
  std::string id_;
  std::vector<TheilLikeSpec> spec_;  // one entry for theil_like
};

/// Parses "ge:<a>", "theil", "mld", "atkinson:<a>", "champernowne",
/// "kolm:<a>", "gini", "qsr", "mean". Throws InvalidParameter.
MeasureFunctional parse_measure_id(std::string_view id);

/// Ids behind "all": every inequality measure at its reference parameter.
std::vector<std::string> registry_ids();

}  // namespace tlif
