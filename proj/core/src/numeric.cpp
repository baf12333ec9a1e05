#include "tlif/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tlif/error.hpp"

namespace tlif {

void Tolerance::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1) {
    raise(ErrorCode::InvalidParameter,
          "tolerance requires abs_tol > 0, rel_tol > 0 and max_subdivisions >= 1");
  }
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
  double a;
  double b;
  double value;
  double error;
  double resabs;
};

// 21-point Kronrod rule with embedded 10-point Gauss rule; error estimate
// scaled as in QUADPACK's qk21.
Segment gauss_kronrod21(const RealFunction& f, double a, double b) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<double, 21> fv{};
  fv[0] = f(center);
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double dx = half * xk[i];
    fv[2 * i - 1] = f(center - dx);
    fv[2 * i] = f(center + dx);
  }

  double kronrod = wk[0] * fv[0];
  double gauss = 0.0;
  double resabs = wk[0] * std::abs(fv[0]);
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double pair = fv[2 * i - 1] + fv[2 * i];
    kronrod += wk[i] * pair;
    resabs += wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
    // Gauss nodes sit at the odd Kronrod abscissae.
    if (i % 2 == 1) gauss += wg[i / 2] * pair;
  }

  const double mean = 0.5 * kronrod;
  double resasc = wk[0] * std::abs(fv[0] - mean);
  for (std::size_t i = 1; i < xk.size(); ++i) {
    resasc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
  }

  const double scale = std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  resabs *= scale;
  resasc *= scale;
  if (resasc != 0.0 && error != 0.0) {
    error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    error = std::max(50.0 * kEps * resabs, error);
  }
  return Segment{a, b, kronrod * half, error, resabs};
}

bool by_error(const Segment& lhs, const Segment& rhs) { return lhs.error < rhs.error; }

QuadratureResult adaptive(const RealFunction& f, double a, double b, const Tolerance& tol) {
  std::vector<Segment> heap;
  heap.reserve(static_cast<std::size_t>(tol.max_subdivisions) + 1);
  heap.push_back(gauss_kronrod21(f, a, b));
  std::vector<Segment> frozen;

  int subdivisions = 0;
  for (;;) {
    double value = 0.0;
    double error = 0.0;
    double roundoff = 0.0;
    for (const auto& s : heap) {
      value += s.value;
      error += s.error;
      roundoff += 50.0 * kEps * s.resabs;
    }
    for (const auto& s : frozen) {
      value += s.value;
      error += s.error;
      roundoff += 50.0 * kEps * s.resabs;
    }
    if (!std::isfinite(value) || !std::isfinite(error)) {
      throw NonConvergence("integrand is not finite on the interval", value, error);
    }
    const double target = std::max(tol.abs_tol, tol.rel_tol * std::abs(value)) + roundoff;
    if (error <= target) return QuadratureResult{value, error, subdivisions};

    if (subdivisions >= tol.max_subdivisions || heap.empty()) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge after " << subdivisions
          << " subdivisions (estimate " << value << ", error bound " << error << ")";
      throw NonConvergence(msg.str(), value, error);
    }

    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      frozen.push_back(worst);
      continue;
    }
    heap.push_back(gauss_kronrod21(f, worst.a, mid));
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(gauss_kronrod21(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end(), by_error);
    ++subdivisions;
  }
}

}  // namespace

QuadratureResult integrate_detailed(const RealFunction& g, double a, double b,
                                    const Tolerance& tol) {
  tol.validate();
  if (std::isnan(a) || std::isnan(b) || !(a < b) || std::isinf(a)) {
    raise(ErrorCode::InvalidInterval, "integration interval requires finite a < b");
  }
  if (std::isfinite(b)) return adaptive(g, a, b, tol);

  const RealFunction mapped = [&g, a](double t) {
    const double one_minus = 1.0 - t;
    const double x = a + t / one_minus;
    if (!std::isfinite(x)) return 0.0;
    return g(x) / (one_minus * one_minus);
  };
  return adaptive(mapped, 0.0, 1.0, tol);
}

double integrate(const RealFunction& g, double a, double b, const Tolerance& tol) {
  return integrate_detailed(g, a, b, tol).value;
}

double integrate_piecewise(const RealFunction& g, double a, double b,
                           std::span<const double> breakpoints, const Tolerance& tol) {
  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(b);

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate(g, cuts[i], cuts[i + 1], tol);
  }
  return total;
}

LimitEstimate derivative_at_zero_plus(const RealFunction& phi, std::span<const double> steps,
                                      const ExtrapolationOptions& options) {
  const std::size_t n = steps.size();
  if (n < 3) raise(ErrorCode::InvalidParameter, "step schedule needs at least three entries");
  if (options.order < 1) raise(ErrorCode::InvalidParameter, "extrapolation order must be >= 1");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(steps[i] > 0.0) || (i > 0 && !(steps[i] < steps[i - 1]))) {
      raise(ErrorCode::InvalidParameter, "steps must be positive and strictly decreasing");
    }
  }

  const std::size_t depth = std::min<std::size_t>(static_cast<std::size_t>(options.order), n - 1);
  // table[i][j]: extrapolant through quotients i-j..i.
  std::vector<std::vector<double>> table(n, std::vector<double>(depth + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    table[i][0] = phi(steps[i]) / steps[i];
    for (std::size_t j = 1; j <= std::min(i, depth); ++j) {
      const double diff = table[i][j - 1] - table[i - 1][j - 1];
      table[i][j] = table[i][j - 1] + diff * steps[i] / (steps[i - j] - steps[i]);
    }
  }

  const double value = table[n - 1][depth];
  double error = std::abs(value - table[n - 1][depth - 1]);
  if (n - 2 >= depth) error = std::max(error, std::abs(value - table[n - 2][depth]));

  if (!std::isfinite(value) || error > options.noise_abs + options.noise_rel * std::abs(value)) {
    std::ostringstream msg;
    msg << "extrapolants disagree: estimate " << value << ", spread " << error;
    throw NoisyLimit(msg.str(), value, error);
  }
  return LimitEstimate{value, error};
}

std::vector<double> default_epsilon_schedule() { return {1e-2, 1e-3, 1e-4, 1e-5}; }

double find_root_bisect(const RealFunction& f, double lo, double hi, double x_tol, int max_iter) {
  if (!(lo < hi)) raise(ErrorCode::InvalidInterval, "bisection requires lo < hi");
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    raise(ErrorCode::InvalidInterval, "bisection bracket does not contain a sign change");
  }
  for (int it = 0; it < max_iter && hi - lo > x_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace tlif
