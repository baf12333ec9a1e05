#pragma once

// Deterministic numerical primitives shared by every module: adaptive
// Gauss-Kronrod quadrature on finite and semi-infinite intervals, the
// one-sided limit phi(eps)/eps as eps -> 0+, and bracketed root finding.

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace tlif {

using RealFunction = std::function<double(double)>;

struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 2000;

  /// Throws InvalidParameter unless all three fields are positive.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

/// Integral of g over [a, b]. b may be +infinity, in which case the
/// interval is mapped through x = a + t/(1-t), t in [0, 1).
/// Throws InvalidInterval for a >= b, NonConvergence when the subdivision
/// budget is exhausted or the integrand is not finite.
QuadratureResult integrate_detailed(const RealFunction& g, double a, double b,
                                    const Tolerance& tol = {});

double integrate(const RealFunction& g, double a, double b,
                 const Tolerance& tol = {});

/// integrate over [a, b] split at each breakpoint strictly inside (a, b).
double integrate_piecewise(const RealFunction& g, double a, double b,
                           std::span<const double> breakpoints,
                           const Tolerance& tol = {});

struct LimitEstimate {
  double value = 0.0;
  double error = 0.0;
};

struct ExtrapolationOptions {
  int order = 2;
  /// NoisyLimit is raised when error > noise_abs + noise_rel * |value|.
  double noise_abs = 1e-4;
  double noise_rel = 1e-4;
};

/// Richardson (Neville) extrapolation of phi(eps)/eps to eps = 0 over a
/// strictly decreasing positive step sequence of at least three entries.
LimitEstimate derivative_at_zero_plus(const RealFunction& phi,
                                      std::span<const double> steps,
                                      const ExtrapolationOptions& options = {});

std::vector<double> default_epsilon_schedule();

/// Bisection for a sign change of f on [lo, hi]. Throws InvalidInterval if
/// f(lo) and f(hi) share a sign.
double find_root_bisect(const RealFunction& f, double lo, double hi,
                        double x_tol = 1e-12, int max_iter = 400);

}  // namespace tlif
