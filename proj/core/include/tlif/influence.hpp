#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlif/distribution.hpp"
#include "tlif/measures.hpp"
#include "tlif/numeric.hpp"

namespace tlif {

/// A closed-form influence function z -> IF(z; T, F) with every
/// F-dependent constant precomputed. `kinks` lists the incomes where the
/// function is not smooth.
struct InfluenceFunction {
  RealFunction eval;
  std::vector<double> kinks;

  double operator()(double z) const { return eval(z); }
};

// Theil-like family -------------------------------------------------------

/// Unified closed form for any Theil-like quadruple:
///   IF(z) = tau'(I) [ -(h1'(mu) E h / h1(mu)^2 + h2'(mu)) (z - mu)
///                     + (h(z) - E h) / h1(mu) ].
InfluenceFunction theorem1_if(const TheilLikeSpec& spec, const Distribution& f,
                              const Tolerance& tol = {});
double if_theorem1(const TheilLikeSpec& spec, const Distribution& f, double z,
                   const Tolerance& tol = {});

/// Hand-substituted per-family forms of the unified formula.
InfluenceFunction specialized_if(const TheilLikeSpec& spec, const Distribution& f,
                                 const Tolerance& tol = {});
double if_special(std::string_view measure_id, const Distribution& f, double z,
                  const Tolerance& tol = {});

/// GE(alpha) influence with the leading 1/(alpha(alpha-1)mu^alpha) factor on
/// the first term dropped. Kept for comparison; it is not an influence function.
InfluenceFunction ge_without_coefficient_if(const TheilLikeSpec& spec, const Distribution& f,
                                            const Tolerance& tol = {});

// Gini and QSR ------------------------------------------------------------

/// IF(z) = 2 [ R(F) - C(F, F(z)) / mu + (z / mu) (R(F) - (1 - F(z))) ].
InfluenceFunction gini_if(const Distribution& f, const Tolerance& tol = {});
double if_gini(const Distribution& f, double z, const Tolerance& tol = {});

/// Piecewise quintile-share-ratio influence over [0, Q(.2)], (Q(.2), Q(.8))
/// and [Q(.8), uep]. if_qsr throws KinkPoint within 1e-6 of a boundary.
InfluenceFunction qsr_if(const Distribution& f, const Tolerance& tol = {});
double if_qsr(const Distribution& f, double z, const Tolerance& tol = {});

/// The normative closed form for any registered functional.
InfluenceFunction closed_form_if(const MeasureFunctional& t, const Distribution& f,
                                 const Tolerance& tol = {});

// Printed-formula ledger --------------------------------------------------

enum class FormulaSource {
  theorem1,
  specialized,
  section2_printed,
  appendix_printed,
  appendix_corrected,
  coefficient_free,
};

std::string_view to_string(FormulaSource source);

struct FormulaVariant {
  std::string measure_id;
  FormulaSource source;
  bool normative;
  std::string printed_form;
  std::string normative_form;
};

/// Every archived closed form for a functional (normative and printed).
std::vector<FormulaVariant> formula_variants(const MeasureFunctional& t);

InfluenceFunction variant_if(const MeasureFunctional& t, FormulaSource source,
                             const Distribution& f, const Tolerance& tol = {});

// Numerical Gateaux oracle ------------------------------------------------

using DistributionFunctional = std::function<double(const Distribution&)>;

struct OracleOptions {
  std::vector<double> schedule = default_epsilon_schedule();
  ExtrapolationOptions extrapolation{};
  Tolerance tol{};
};

/// lim_{eps -> 0+} (T((1 - eps) F + eps delta_z) - T(F)) / eps by Richardson
/// extrapolation. Throws NoisyLimit at non-differentiable points.
LimitEstimate gateaux_if(const DistributionFunctional& t, const Distribution& f, double z,
                         const OracleOptions& options = {});
LimitEstimate gateaux_if(const MeasureFunctional& t, const Distribution& f, double z,
                         const OracleOptions& options = {});

/// sigma^2 = integral of IF(x)^2 dF(x), split at the kinks of IF.
double asymptotic_variance(const MeasureFunctional& t, const Distribution& f,
                           const Tolerance& tol = {});

// Curves and verification -------------------------------------------------

struct IFPoint {
  double z;
  std::optional<double> closed_form;
  std::optional<double> oracle;
  std::optional<double> oracle_error;
  std::string error;  // empty when both requested values were produced
};

struct IFCurve {
  std::string measure_id;
  std::string distribution;
  std::vector<IFPoint> points;
  double max_abs_discrepancy = 0.0;
};

/// Fails with InvalidParameter on an empty, unsorted or negative grid;
/// per-point failures are recorded in the curve.
IFCurve if_curve(std::string_view measure_id, const Distribution& f, std::span<const double> grid,
                 bool with_oracle, const OracleOptions& options = {});

/// `count` points from lo to hi, geometric when `log_spacing`.
std::vector<double> make_grid(double lo, double hi, std::size_t count, bool log_spacing);

/// 20 log-spaced points from Q(0.01) to Q(0.99).
std::vector<double> default_grid(const Distribution& f);

enum class Verdict { pass, fail, skipped };
std::string_view to_string(Verdict verdict);

struct VerifyOptions {
  double abs_tol = 1e-5;
  double rel_tol = 1e-4;
  /// QSR grid points with |F(z) - p| <= kink_margin, p in {0.2, 0.8}, are
  /// left out of the comparison.
  double kink_margin = 0.02;
  OracleOptions oracle{};
};

struct VerificationRow {
  std::string measure_id;
  FormulaSource source;
  bool normative;
  std::size_t points;
  double max_abs_err;
  Verdict verdict;
  std::string note;
};

/// Compares every formula variant of `t` against the Gateaux oracle on the
/// grid. A point passes when |closed - oracle| <= max(abs_tol, rel_tol |closed|).
std::vector<VerificationRow> verify_measure(const MeasureFunctional& t, const Distribution& f,
                                            std::span<const double> grid,
                                            const VerifyOptions& options = {});

/// Drops grid points inside the QSR kink neighbourhoods.
std::vector<double> qsr_safe_grid(const Distribution& f, std::span<const double> grid,
                                  double margin);

}  // namespace tlif
