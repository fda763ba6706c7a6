#include <cmath>

#include <gtest/gtest.h>

#include "tmm/error.hpp"
#include "tmm/scalar_function.hpp"

#include "oracles.hpp"

using namespace tmm;

TEST(ScalarFunction, DerivativesMatchFiniteDifferences) {
  for (const RegistryEntry& e : builtin_registry()) {
    const ScalarFunction& f = e.f;
    const Interval w = e.interval.bounded() ? e.interval : Interval{0.5, 3.0};
    for (double s : {0.25, 0.5, 0.75}) {
      const double x = w.lo + s * w.width();
      if (!f.domain().contains(x)) continue;
      const double scale = std::max(1.0, std::abs(f.deriv(x)));
      EXPECT_NEAR(f.deriv(x), oracle::diff([&](double y) { return f(y); }, x), 1e-6 * scale) << f.name() << " at " << x;
      if (f.derivative_count() >= 2) {
        const double s2 = std::max(1.0, std::abs(f.deriv2(x)));
        EXPECT_NEAR(f.deriv2(x), oracle::diff2([&](double y) { return f(y); }, x), 1e-5 * s2) << f.name();
      }
    }
  }
}

TEST(ScalarFunction, TaylorCoefficientsMatchDerivatives) {
  for (const RegistryEntry& e : builtin_registry()) {
    const ScalarFunction& f = e.f;
    if (!f.has_taylor()) continue;
    const double c = e.interval.bounded() ? 0.5 * (e.interval.lo + e.interval.hi) : 1.5;
    const PowerSeries p = f.taylor(c, 4);
    EXPECT_NEAR(p[0], f(c), 1e-13 * std::max(1.0, std::abs(f(c)))) << f.name();
    EXPECT_NEAR(p[1], f.deriv(c), 1e-12 * std::max(1.0, std::abs(f.deriv(c)))) << f.name();
    if (f.derivative_count() >= 2) EXPECT_NEAR(p[2], 0.5 * f.deriv2(c), 1e-12 * std::max(1.0, std::abs(f.deriv2(c)))) << f.name();
  }
}

TEST(ScalarFunction, DomainErrorsCarryThePoint) {
  const ScalarFunction f = fn::neg_log();
  try {
    f(-1.0);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.point(), -1.0);
  }
  EXPECT_THROW(fn::neg_log_one_minus(1.0)(1.5), DomainError);
}

TEST(ScalarFunction, Combinators) {
  const ScalarFunction s = fn::sum(fn::square(), fn::linear());
  EXPECT_DOUBLE_EQ(s(2.0), 6.0);
  EXPECT_DOUBLE_EQ(s.deriv(2.0), 5.0);
  const ScalarFunction p = fn::product(fn::linear(), fn::linear());
  EXPECT_DOUBLE_EQ(p.deriv2(3.0), 2.0);
  EXPECT_DOUBLE_EQ(fn::scaled(3.0, fn::cube())(2.0), 24.0);
  const ScalarFunction g = fn::exp_of_neg(fn::square());
  EXPECT_NEAR(g(0.5), std::exp(-0.25), 1e-16);
  EXPECT_NEAR(g.deriv(0.5), -std::exp(-0.25), 1e-16);
  const ScalarFunction poly = fn::polynomial({1.0, 0.0, 2.0});
  EXPECT_DOUBLE_EQ(poly(3.0), 19.0);
  EXPECT_DOUBLE_EQ(poly.derivative()(3.0), 12.0);
}

TEST(ScalarFunction, MakeFunctionByName) {
  for (const std::string& name : builtin_function_names()) {
    FunctionSpec spec{name, {}, {}};
    if (name == "poly") spec.poly = {0.0, 1.0};
    EXPECT_NO_THROW(make_function(spec)) << name;
  }
  EXPECT_THROW(make_function({"nosuch", {}, {}}), InvalidInput);
  EXPECT_THROW(make_function({"x2", {{"bogus", 1.0}}, {}}), InvalidInput);
  const ScalarFunction f = make_function({"neglog1mx", {{"t", 0.5}, {"c", 1.0}}, {}});
  EXPECT_NEAR(f(2.0), -std::log(0.5), 1e-15);
}

TEST(ScalarFunction, TraceMinmaxRegistryIsNonempty) {
  const auto reg = trace_minmax_registry();
  EXPECT_GE(reg.size(), 8u);
  for (const RegistryEntry& e : reg) EXPECT_TRUE(e.f.domain().covers(e.interval)) << e.f.name();
}
