#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "tmm/error.hpp"
#include "tmm/xi.hpp"

using namespace tmm;

namespace {

const XiEvaluator& evaluator() {
  static const XiEvaluator e({}, load_zero_table(TMM_DATA_DIR "/zeta_zeros_100.txt"));
  return e;
}

// xi(1/2) to 30 digits, computed independently with mpmath.
constexpr double kXiHalf = 0.497120778188314109912773739685;
constexpr double kFirstOrdinate = 14.134725141734693790;

}  // namespace

TEST(Zeta, BorweinAgainstKnownValues) {
  EXPECT_NEAR(zeta_borwein(2.0), std::numbers::pi * std::numbers::pi / 6.0, 1e-15);
  EXPECT_NEAR(zeta_borwein(4.0), std::pow(std::numbers::pi, 4) / 90.0, 1e-15);
  EXPECT_NEAR(zeta_borwein(0.5), -1.4603545088095868129, 1e-14);
  EXPECT_NEAR(xi_at_zero_closed_form(), kXiHalf, 1e-15);
}

TEST(Xi, ValueAtZeroAndEvenness) {
  const XiEvaluator& e = evaluator();
  const XiEvaluator::Value v = e.derivative(0.0, 0);
  EXPECT_NEAR(v.value, kXiHalf, 1e-14);
  EXPECT_LE(v.error, 1e-13);
  EXPECT_LE(xi_evenness_residual(e), 1e-12);
  // Odd derivatives vanish at 0.
  EXPECT_EQ(e.deriv(0.0), 0.0);
  EXPECT_LT(e.deriv2(0.0), 0.0);
}

TEST(Xi, PhiIsEvenAndPositive) {
  const XiEvaluator& e = evaluator();
  for (double u : {0.0, 0.1, 0.5, 1.0, 2.0}) {
    EXPECT_GT(e.phi(u), 0.0);
    EXPECT_NEAR(e.phi(u), e.phi(-u), 1e-15 * e.phi(u));
  }
}

TEST(Xi, FirstRootMatchesTable) {
  const double root = xi_first_root(evaluator());
  EXPECT_NEAR(root, kFirstOrdinate, 1e-9);
  EXPECT_NEAR(root, evaluator().zero_table().front(), 1e-4);
}

TEST(Xi, DerivativesMatchFiniteDifferences) {
  const XiEvaluator& e = evaluator();
  for (double z : {0.7, 3.0, 9.5}) {
    const double h = 1e-4;
    EXPECT_NEAR(e.deriv(z), (e.eval(z + h) - e.eval(z - h)) / (2 * h), 1e-9);
    EXPECT_NEAR(e.deriv2(z), (e.eval(z + h) - 2 * e.eval(z) + e.eval(z - h)) / (h * h), 1e-6);
  }
}

TEST(Xi, DomainLimits) {
  EXPECT_THROW(evaluator().eval(60.0), DomainError);
  EXPECT_THROW(xi_taylor(evaluator(), 15.0, 4), DomainError);
}

TEST(Xi, TaylorSeriesConsistentAndStable) {
  const XiEvaluator& e = evaluator();
  const SeriesWithError s = xi_taylor(e, 0.0, 20);
  EXPECT_NEAR(s.series.eval(1.0), e.eval(1.0), 1e-13);
  for (int n = 1; n <= 19; n += 2) EXPECT_EQ(s.series[n], 0.0);
  // Node doubling moves each coefficient by less than the combined bars.
  const SeriesWithError f = xi_taylor(e.refined(), 0.0, 20);
  for (int n = 0; n <= 20; ++n)
    EXPECT_LE(std::abs(s.series[n] - f.series[n]), s.error[n] + f.error[n] + 1e-300) << n;
  const SeriesWithError l = xi_neg_log_taylor(e, 0.0, 12);
  EXPECT_NEAR(l.series[0], -std::log(kXiHalf), 1e-14);
  EXPECT_GT(l.series[2], 0.0);
}

TEST(Xi, ReciprocalZeroSum) {
  // sum_{gamma > 0} 1/(1/4 + gamma^2) = 1 + gamma_E/2 - log(4 pi)/2 ~ 0.0230957.
  const double total = xi_reciprocal_zero_sum();
  EXPECT_NEAR(total, 0.023095708966121, 1e-14);
  double partial = 0.0;
  for (double g : evaluator().zero_table()) partial += 1.0 / (0.25 + g * g);
  // The omitted tail is close to the density estimate log(G/2pi) / (2 pi G).
  const double g = evaluator().zero_table().back();
  const double estimate = std::log(g / (2 * std::numbers::pi)) / (2 * std::numbers::pi * g);
  EXPECT_NEAR(total - partial, estimate, 0.3 * estimate);
}

TEST(Verdicts, Bands) {
  EXPECT_EQ(classify(0.0, 1e-12), Verdict::Pass);
  EXPECT_EQ(classify(-1e-12, 1e-12), Verdict::Pass);
  EXPECT_EQ(classify(-2e-12, 1e-12), Verdict::Inconclusive);
  EXPECT_EQ(classify(-4e-12, 1e-12), Verdict::Fail);
  EXPECT_EQ(combine(Verdict::Pass, Verdict::Inconclusive), Verdict::Inconclusive);
  EXPECT_EQ(combine(Verdict::Fail, Verdict::Inconclusive), Verdict::Fail);
  EXPECT_EQ(to_string(Verdict::Inconclusive), "INCONCLUSIVE");
}

TEST(RhShadows, HankelCriteriaPassAtZero) {
  const RhHankelReport r = rh_hankel_report(evaluator(), 0.0, 4, 2);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_EQ(r.items.size(), 2u * 3u * 2u);
  EXPECT_TRUE(r.weighted_implies_unweighted);
  EXPECT_LE(r.schur_residual, 1e-14);
  for (const HankelItem& it : r.items) EXPECT_GE(it.min_eig, -it.error_bar);
}

TEST(RhShadows, ProductSeriesPassesAndDefectFails) {
  const std::vector<double>& zeros = evaluator().zero_table();
  const RhHankelReport ok = hankel_report(product_neg_log_taylor(zeros, 0.0, 16), 4, 2);
  EXPECT_EQ(ok.verdict, Verdict::Pass);
  const RhHankelReport bad = hankel_report(product_neg_log_taylor(zeros, 0.0, 16, ZeroDefect{}), 4, 1);
  EXPECT_EQ(bad.verdict, Verdict::Fail);
  bool failed_at_4 = false;
  for (const HankelItem& it : bad.items) failed_at_4 |= it.m == 4 && it.verdict == Verdict::Fail;
  EXPECT_TRUE(failed_at_4);
}

TEST(RhShadows, ProductSeriesAgreesWithQuadrature) {
  const std::vector<double>& zeros = evaluator().zero_table();
  const SeriesWithError q = xi_neg_log_taylor(evaluator(), 0.0, 8);
  const SeriesWithError p = product_neg_log_taylor(zeros, 0.0, 8);
  // Omitted zeros: with density log(g/2pi)/2pi, sum_{g > G} g^-4 is about
  // log(G/2pi) / (6 pi G^3); allow twice that.
  const double g = zeros.back();
  const double s4 = 2.0 * std::log(g / (2 * std::numbers::pi)) / (6 * std::numbers::pi * g * g * g);
  EXPECT_NEAR(q.series[2], p.series[2], s4 / 4 + q.error[2]);
  EXPECT_NEAR(q.series[4], p.series[4], s4 + q.error[4]);
  EXPECT_NEAR(q.series[6], p.series[6], s4 / (g * g) + q.error[6]);
  EXPECT_GT(std::abs(q.series[4] - p.series[4]), 0.1 * s4 / 2);  // the model really is truncated
}

TEST(RhShadows, MatrixChecks) {
  const RhMatrixReport r = rh_matrix_checks(evaluator(), 3, 200, 5);
  EXPECT_GE(r.trace_minmax_min, -1e-7);
  EXPECT_GE(r.convexity_min, -1e-7);
  EXPECT_LE(r.duality_max_residual, 1e-7);
  EXPECT_GE(r.monotone_pair_min, -1e-7);
  EXPECT_GE(r.monotone_loewner_min, -1e-7);
  EXPECT_THROW(rh_matrix_checks(evaluator(), 2, 10, 1, {-15.0, 15.0}), InvalidInput);
}

TEST(CrossValidation, QuadratureVsProduct) {
  const CrossValidation c = cross_validate(evaluator(), evaluator().zero_table());
  EXPECT_TRUE(c.all_within);
  EXPECT_EQ(c.rows.size(), 41u);
  EXPECT_NEAR(c.xi0_quadrature, c.xi0_closed_form, 1e-14);
  for (const CrossRow& r : c.rows) EXPECT_LE(r.relative_difference, r.bound);
}

TEST(ZeroTable, RejectsBadInput) {
  EXPECT_THROW(load_zero_table("/nonexistent"), InvalidInput);
  EXPECT_EQ(load_zero_table(TMM_DATA_DIR "/zeta_zeros_100.txt").size(), 100u);
}
