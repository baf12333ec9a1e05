#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "tlif/error.hpp"
#include "tlif/influence.hpp"

using namespace tlif;

namespace {

constexpr double kGamma = std::numbers::egamma;

double centering(const MeasureFunctional& t, const Distribution& f) {
  const auto inf = closed_form_if(t, f);
  return expect(f, inf.eval, Tolerance{1e-12, 1e-10}, inf.kinks);
}

}  // namespace

TEST(Theorem1, CenteredTheilOnExponential) {
  EXPECT_NEAR(centering(parse_measure_id("theil"), exponential(1)), 0.0, 1e-8);
}

TEST(Theorem1, MldClosedValues) {
  const auto mld = make_spec(Family::mld);
  // (z - mu)/mu - (log z - E log X) with E log X = -gamma
  EXPECT_NEAR(if_theorem1(mld, exponential(1), 1.0), -kGamma, 1e-9);
  EXPECT_NEAR(if_theorem1(mld, exponential(1), std::numbers::e), (std::numbers::e - 1) - (1 + kGamma), 1e-9);
}

TEST(Theorem1, Ge2MatchesOracle) {
  const auto t = parse_measure_id("ge:2");
  const auto f = exponential(1);
  for (double z : {0.5, 1.0, 2.0, 5.0}) {
    EXPECT_NEAR(if_theorem1(t.spec(), f, z), gateaux_if(t, f, z).value, 1e-5) << z;
    // GE(2) on Exp(1): (z^2 - 2)/2 - 2(z - 1)
    EXPECT_NEAR(if_theorem1(t.spec(), f, z), (z * z - 2) / 2 - 2 * (z - 1), 1e-9);
  }
}

TEST(Specialized, AgreesWithTheorem1) {
  for (const char* id : {"ge:-1", "ge:0.5", "ge:2", "theil", "mld", "atkinson:0.5", "champernowne", "kolm:1"}) {
    const auto t = parse_measure_id(id);
    for (const auto& f : {pareto(3, 1), lognormal(0, 0.5)}) {
      const auto a = theorem1_if(t.spec(), f), b = specialized_if(t.spec(), f);
      for (double z : {0.3, 1.0, 2.5, 8.0}) EXPECT_NEAR(a(z), b(z), 1e-10 * std::max(1.0, std::abs(a(z)))) << id;
    }
  }
}

TEST(Specialized, MldValueAtE) {
  EXPECT_NEAR(if_special("mld", exponential(1), std::numbers::e), 0.141066, 5e-7);
}

TEST(Specialized, TheilVanishesAtEqualityMean) {
  EXPECT_NEAR(if_special("theil", uniform(1, 1 + 1e-9), 1 + 0.5e-9), 0.0, 1e-6);
}

TEST(Specialized, GeCarriesLeadingCoefficient) {
  const auto f = exponential(1);
  const double z = 2.0;
  const double mu = 1.0, mu2 = 2.0, a = 2.0;
  const double expected = (z * z - mu2) / (a * (a - 1) * std::pow(mu, a)) - mu2 / ((a - 1) * std::pow(mu, a + 1)) * (z - mu);
  EXPECT_NEAR(if_special("ge:2", f, z), expected, 1e-9);
}

TEST(Gini, CorrectedFormValues) {
  // R = 1/3, C(F, 0.5) = 0.125, mu = 1/2: 2[1/3 - 0.25 + (1/3 - 0.5)] = -1/6
  EXPECT_NEAR(if_gini(uniform(0, 1), 0.5), -1.0 / 6.0, 1e-12);
  EXPECT_NEAR(gateaux_if(MeasureFunctional::gini(), uniform(0, 1), 0.5).value, -1.0 / 6.0, 1e-7);
}

TEST(Gini, CenteredAndMatchesOracle) {
  const auto f = exponential(1);
  EXPECT_NEAR(centering(MeasureFunctional::gini(), f), 0.0, 1e-7);
  for (double z : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    EXPECT_NEAR(if_gini(f, z), gateaux_if(MeasureFunctional::gini(), f, z).value, 1e-5) << z;
  }
}

TEST(Gini, PrintedFormFailsCenteringWhenMeanIsNotOne) {
  const auto t = MeasureFunctional::gini();
  const auto f = uniform(0, 1);
  const auto printed = variant_if(t, FormulaSource::appendix_printed, f);
  const double c = expect(f, printed.eval);
  EXPECT_GT(std::abs(c), 0.1);
}

TEST(Qsr, UniformValues) {
  const auto f = uniform(0, 1);
  EXPECT_NEAR(if_qsr(f, 0.5), -10.0, 1e-9);
  EXPECT_NEAR(if_qsr(f, 0.3), if_qsr(f, 0.7), 1e-12);
  EXPECT_NEAR(centering(MeasureFunctional::qsr(), f), 0.0, 1e-6);
  EXPECT_NEAR(gateaux_if(MeasureFunctional::qsr(), f, 0.5).value, -10.0, 1e-6);
}

TEST(Qsr, KinkPoint) {
  try {
    if_qsr(uniform(0, 1), 0.2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::KinkPoint);
  }
}

TEST(Qsr, OutsideKinksMatchesOracle) {
  const auto f = exponential(1);
  for (double z : {0.05, 0.6, 1.0, 3.0}) {
    EXPECT_NEAR(if_qsr(f, z), gateaux_if(MeasureFunctional::qsr(), f, z).value, 1e-4) << z;
  }
}

TEST(Gateaux, MeanFunctionalIsExact) {
  // The path is linear, so only roundoff amplified by 1/eps_min = 1e5 remains.
  const auto f = lognormal(0, 0.5);
  for (double z : {0.2, 1.0, 3.0}) {
    EXPECT_NEAR(gateaux_if(MeasureFunctional::mean(), f, z).value, z - f.mean(), 1e-10);
  }
}

TEST(Gateaux, ConstantFunctional) {
  const DistributionFunctional c = [](const Distribution&) { return 4.0; };
  EXPECT_EQ(gateaux_if(c, exponential(1), 2.0).value, 0.0);
}

TEST(Gateaux, TheilAgreesWithClosedForm) {
  const auto t = parse_measure_id("theil");
  EXPECT_NEAR(gateaux_if(t, exponential(1), 2.0).value, if_theorem1(t.spec(), exponential(1), 2.0), 1e-5);
}

TEST(Gateaux, OneSidedLimitExistsAtQsrKink) {
  // The QSR influence is continuous at the quintiles; only its slope jumps.
  const auto f = uniform(0, 1);
  EXPECT_NEAR(gateaux_if(MeasureFunctional::qsr(), f, 0.8).value, -10.0, 1e-6);
  EXPECT_NEAR(gateaux_if(MeasureFunctional::qsr(), f, 0.2).value, -10.0, 1e-6);
  EXPECT_NEAR(qsr_if(f)(0.8), -10.0, 1e-12);
}

TEST(Gateaux, NoisyWhereTheFunctionalIsNotDifferentiable) {
  // |mu_F - 1| has no one-sided derivative at mu_F = 1 in directions that
  // oscillate; a path with alternating slopes stands in for it.
  const DistributionFunctional t = [](const Distribution& g) {
    const double d = g.mean() - 1.0;
    return d == 0.0 ? 0.0 : d * (std::fmod(std::floor(-std::log10(std::abs(d)) + 1e-9), 2.0) < 0.5 ? 1.0 : 3.0);
  };
  EXPECT_THROW(gateaux_if(t, exponential(1), 2.0), NoisyLimit);
}

TEST(AsymptoticVariance, KnownValues) {
  EXPECT_NEAR(asymptotic_variance(MeasureFunctional::mean(), exponential(1)), 1.0, 1e-9);
  EXPECT_NEAR(asymptotic_variance(parse_measure_id("theil"), uniform(1, 1 + 1e-9)), 0.0, 1e-12);
  // MLD on Exp(1): Var(X - log X) = 1 + pi^2/6 - 2 Cov(X, log X) = pi^2/6 - 1
  EXPECT_NEAR(asymptotic_variance(parse_measure_id("mld"), exponential(1)), std::numbers::pi * std::numbers::pi / 6 - 1,
              1e-8);
  EXPECT_NEAR(asymptotic_variance(MeasureFunctional::gini(), exponential(1)), 1.0 / 12.0, 1e-8);
}

TEST(Curve, MldAgreesWithOracle) {
  const std::vector<double> grid{0.5, 1, 2};
  const auto c = if_curve("mld", exponential(1), grid, true);
  EXPECT_LE(c.max_abs_discrepancy, 1e-5);
  ASSERT_EQ(c.points.size(), 3u);
  for (const auto& p : c.points) EXPECT_TRUE(p.closed_form && p.oracle);
}

TEST(Curve, GiniWithoutOracle) {
  const std::vector<double> grid{0.5};
  const auto c = if_curve("gini", uniform(0, 1), grid, false);
  ASSERT_TRUE(c.points[0].closed_form);
  EXPECT_NEAR(*c.points[0].closed_form, -1.0 / 6.0, 1e-12);
  EXPECT_FALSE(c.points[0].oracle);
}

TEST(Curve, Validation) {
  const std::vector<double> empty, unsorted{2, 1}, negative{-1, 1};
  EXPECT_THROW(if_curve("mld", exponential(1), empty, true), Error);
  EXPECT_THROW(if_curve("mld", exponential(1), unsorted, true), Error);
  EXPECT_THROW(if_curve("mld", exponential(1), negative, true), Error);
}

TEST(Curve, PerPointErrorsAreRecorded) {
  const std::vector<double> grid{0.0, 1.0};
  const auto c = if_curve("mld", exponential(1), grid, false);
  EXPECT_FALSE(c.points[0].closed_form);
  EXPECT_FALSE(c.points[0].error.empty());
  EXPECT_TRUE(c.points[1].closed_form);
}

TEST(Grid, Construction) {
  const auto lin = make_grid(0, 1, 5, false);
  EXPECT_EQ(lin, (std::vector<double>{0, 0.25, 0.5, 0.75, 1}));
  const auto lg = make_grid(1, 100, 3, true);
  EXPECT_EQ(lg.front(), 1);
  EXPECT_NEAR(lg[1], 10, 1e-12);
  EXPECT_EQ(lg.back(), 100);
  EXPECT_THROW(make_grid(0, 1, 3, true), Error);
  EXPECT_THROW(make_grid(0, 1, 0, false), Error);
  const auto d = default_grid(exponential(1));
  EXPECT_EQ(d.size(), 20u);
  EXPECT_NEAR(d.front(), -std::log(0.99), 1e-14);
  EXPECT_NEAR(d.back(), -std::log(0.01), 1e-12);
}

TEST(Verify, LedgerOnExponential) {
  const auto grid = default_grid(exponential(1));
  for (const auto& id : registry_ids()) {
    for (const auto& row : verify_measure(parse_measure_id(id), exponential(1), grid)) {
      if (row.normative) EXPECT_NE(row.verdict, Verdict::fail) << id << " " << to_string(row.source);
    }
  }
}

TEST(Verify, PrintedMldSignIsRejected) {
  const auto grid = default_grid(exponential(1));
  const auto rows = verify_measure(parse_measure_id("mld"), exponential(1), grid);
  bool seen = false;
  for (const auto& r : rows) {
    if (r.source == FormulaSource::section2_printed) {
      seen = true;
      EXPECT_EQ(r.verdict, Verdict::fail);
      EXPECT_FALSE(r.normative);
    }
  }
  EXPECT_TRUE(seen);
}

TEST(Verify, QsrSafeGridDropsKinkNeighbourhoods) {
  const auto f = uniform(0, 1);
  const auto grid = make_grid(0.05, 0.95, 19, false);
  for (double z : qsr_safe_grid(f, grid, 0.02)) {
    EXPECT_GT(std::abs(z - 0.2), 0.02);
    EXPECT_GT(std::abs(z - 0.8), 0.02);
  }
}

TEST(Verify, DivergentPairsAreSkipped) {
  const auto grid = default_grid(exponential(1));
  for (const auto& r : verify_measure(parse_measure_id("ge:-1"), exponential(1), grid)) {
    EXPECT_EQ(r.verdict, Verdict::skipped);
  }
}

TEST(Invariants, ScaleEquivarianceOfTheilInfluence) {
  const auto t = parse_measure_id("theil");
  const auto f = exponential(1);
  const auto g = scaled(f, 3.0);
  for (double z : {0.3, 1.0, 2.0, 5.0}) {
    EXPECT_NEAR(gateaux_if(t, g, 3 * z).value, gateaux_if(t, f, z).value, 1e-8) << z;
    EXPECT_NEAR(if_theorem1(t.spec(), g, 3 * z), if_theorem1(t.spec(), f, z), 1e-12);
  }
}

TEST(Invariants, AsymptoticVarianceNonNegative) {
  for (const auto& id : registry_ids()) {
    const auto t = parse_measure_id(id);
    for (const auto& f : {uniform(0.5, 1.5), lognormal(0, 0.5)}) {
      EXPECT_GT(asymptotic_variance(t, f), 1e-6) << id;
    }
    if (t.kind() != MeasureKind::qsr) EXPECT_LE(asymptotic_variance(t, dirac(2)), 1e-10) << id;
  }
}

TEST(AsymptoticVariance, HeavyTailDivergenceIsReported) {
  try {
    asymptotic_variance(parse_measure_id("ge:2"), pareto(3, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonConvergence);
  }
}

TEST(Ledger, EveryVariantIsConstructible) {
  for (const auto& id : registry_ids()) {
    const auto t = parse_measure_id(id);
    ASSERT_FALSE(formula_variants(t).empty());
    int normative = 0;
    for (const auto& v : formula_variants(t)) {
      normative += v.normative;
      EXPECT_FALSE(v.printed_form.empty());
      EXPECT_NO_THROW(variant_if(t, v.source, lognormal(0, 0.5)));
    }
    EXPECT_GE(normative, 1) << id;
  }
}
