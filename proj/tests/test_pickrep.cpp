#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "tmm/error.hpp"
#include "tmm/pickrep.hpp"
#include "tmm/scalar_function.hpp"

using namespace tmm;

namespace {

// f from a known measure, with Taylor access through the representation.
ScalarFunction from_representation(const PickRepresentation& r) {
  std::vector<ScalarFunction::Fn> d{[r](double z) { return eval_representation(r, z); },
                                    [r](double z) { return eval_representation_derivative(r, z); }};
  auto taylor = [r](double c, int count) {
    PickRepresentation shifted = r;
    EXPECT_EQ(c, r.center);
    return representation_taylor(shifted, count).coeffs;
  };
  return ScalarFunction("measure", r.interval, std::move(d), std::move(taylor));
}

}  // namespace

TEST(Kernel, ClosedFormAndLimit) {
  // k(1, z, 0) = -log(1 - z) - z.
  EXPECT_NEAR(kernel(1.0, 0.5, 0.0), -std::log(0.5) - 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(kernel(0.0, 3.0, 1.0), 2.0);
  // Continuity at t = 0 (series branch vs. closed form).
  EXPECT_NEAR(kernel(1e-9, 0.7, 0.0), 0.245, 1e-9);
  // k = sum_{n>=2} t^{n-2} w^n / n with w = z - c.
  const double t = -2e-4, w = 0.5;
  EXPECT_NEAR(kernel(t, 0.7, 0.2), w * w / 2 + t * w * w * w / 3 + t * t * w * w * w * w / 4 +
                                          t * t * t * w * w * w * w * w / 5, 1e-16);
  const double h = 1e-6;
  EXPECT_NEAR(kernel_derivative(0.5, 0.3, 0.1), (kernel(0.5, 0.3 + h, 0.1) - kernel(0.5, 0.3 - h, 0.1)) / (2 * h), 1e-8);
}

TEST(Moments, CoefficientIdentity) {
  // -log(1 - x): a_n = 1/n, so m_k = 1 for every k (delta at t = 1).
  std::vector<double> a{0.0};
  for (int n = 1; n <= 10; ++n) a.push_back(1.0 / n);
  const MomentSequence m = coeffs_to_moments({0.0, a});
  ASSERT_EQ(m.size(), 9u);
  for (double v : m) EXPECT_NEAR(v, 1.0, 1e-15);
  const MomentSequence am = atomic_moments({{0.5, 2.0}, {-1.0, 1.0}}, 4);
  EXPECT_DOUBLE_EQ(am[0], 3.0);
  EXPECT_DOUBLE_EQ(am[1], 0.0);
  EXPECT_DOUBLE_EQ(am[3], 2.0 * 0.125 - 1.0);
}

TEST(Recovery, SingleAtom) {
  const RoundTrip r = roundtrip(fn::neg_log_one_minus(1.0), 0.0, 1);
  ASSERT_EQ(r.measure.atoms.size(), 1u);
  EXPECT_NEAR(r.measure.atoms[0].t, 1.0, 1e-8);
  EXPECT_NEAR(r.measure.atoms[0].w, 1.0, 1e-8);
  EXPECT_LE(r.residual, 1e-9);
}

TEST(Recovery, TwoAtoms) {
  FunctionSpec spec{"neglog1m1px", {}, {}};
  const RoundTrip r = roundtrip(make_function(spec), 0.0, 2);
  ASSERT_EQ(r.measure.atoms.size(), 2u);
  EXPECT_NEAR(r.measure.atoms[0].t, -1.0, 1e-8);
  EXPECT_NEAR(r.measure.atoms[1].t, 1.0, 1e-8);
  EXPECT_NEAR(r.measure.atoms[0].w, 1.0, 1e-8);
  EXPECT_NEAR(r.measure.atoms[1].w, 1.0, 1e-8);
  EXPECT_LE(r.residual, 1e-9);
}

TEST(Recovery, SquareIsAtomAtZero) {
  const RoundTrip r = roundtrip(fn::square(), 0.0, 1);
  ASSERT_EQ(r.measure.atoms.size(), 1u);
  EXPECT_EQ(r.measure.atoms[0].t, 0.0);
  EXPECT_DOUBLE_EQ(r.measure.atoms[0].w, 2.0);
  EXPECT_EQ(r.residual, 0.0);  // 2 * z^2/2 reproduces z^2 exactly
  // Asking for more atoms than the measure has flags rank deficiency.
  const RoundTrip d = roundtrip(fn::square(), 0.0, 3);
  EXPECT_TRUE(d.measure.rank_deficient);
  EXPECT_EQ(d.measure.atoms.size(), 1u);
}

TEST(Recovery, RandomThreeAtomMeasures) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> loc(-0.9, 0.9), wt(0.2, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Atom> atoms;
    while (atoms.size() < 3) {
      const double t = loc(rng);
      bool close = false;
      for (const Atom& a : atoms) close |= std::abs(a.t - t) < 0.2;
      if (!close) atoms.push_back({t, wt(rng)});
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.t < b.t; });
    const MomentSequence m = atomic_moments(atoms, 7);
    const RecoveredMeasure r = recover_measure(m, 3);
    ASSERT_EQ(r.atoms.size(), 3u);
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(r.atoms[i].t, atoms[i].t, 1e-8);
      EXPECT_NEAR(r.atoms[i].w, atoms[i].w, 1e-8);
    }
    // Push one moment below the PSD boundary.
    MomentSequence bad = m;
    bad[4] -= 0.1 + (m[4] - m[2] * m[2] / m[0]);
    EXPECT_THROW(recover_measure(bad, 3), NotAMomentSequence);
  }
}

TEST(Recovery, PerturbedSixthMomentIsRejected) {
  // Delta at 1 has m_k = 1; lowering m6 by 0.1 makes the 4x4 moment Hankel
  // indefinite.
  MomentSequence m(7, 1.0);
  m[6] -= 0.1;
  EXPECT_THROW(recover_measure(m, 3), NotAMomentSequence);
  RecoveryOptions opt;
  opt.truncate_on_failure = true;
  const RecoveredMeasure r = recover_measure(m, 3, opt);
  ASSERT_GE(r.atoms.size(), 1u);
  EXPECT_NEAR(r.atoms[0].t, 1.0, 1e-8);
}

TEST(Recovery, CubeIsNotTraceMinmax) {
  EXPECT_THROW(roundtrip(fn::cube(), 0.0, 2), NotAMomentSequence);
  try {
    recover_measure({1.0, 0.0, -1.0}, 1);
    FAIL();
  } catch (const NotAMomentSequence& e) {
    EXPECT_LT(e.pivot(), 0.0);
  }
}

TEST(Representation, TaylorMatchesEvaluation) {
  PickRepresentation r;
  r.alpha = 0.3;
  r.beta = -1.0;
  r.center = 0.25;
  r.interval = {-1.0, 1.0};
  r.atoms = {{-0.5, 0.7}, {0.0, 1.0}, {1.0 / 0.75, 0.2}};
  r.validate();
  const PowerSeries p = representation_taylor(r, 30);
  for (double z : {0.0, 0.3, 0.5}) EXPECT_NEAR(p.eval(z), eval_representation(r, z), 1e-9);
  const RoundTrip rt = roundtrip(from_representation(r), r.center, 3);
  ASSERT_EQ(rt.measure.atoms.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(rt.measure.atoms[i].t, r.atoms[i].t, 1e-8);
    EXPECT_NEAR(rt.measure.atoms[i].w, r.atoms[i].w, 1e-8);
  }
  EXPECT_LE(rt.residual, 1e-9);
}

TEST(Representation, ValidationAndJson) {
  PickRepresentation r;
  r.interval = {-1.0, 1.0};
  r.atoms = {{2.0, 1.0}};  // outside [-1, 1]
  EXPECT_THROW(r.validate(), PreconditionError);
  r.atoms = {{0.5, -1.0}};
  EXPECT_THROW(r.validate(), PreconditionError);
  r.atoms = {{0.5, 1.0}};
  r.alpha = 1.25;
  const PickRepresentation back = representation_from_json(representation_to_json(r));
  EXPECT_EQ(back.alpha, 1.25);
  EXPECT_EQ(back.atoms[0].t, 0.5);
  EXPECT_EQ(back.interval.lo, -1.0);
  PickRepresentation half;
  half.interval = Interval::positive();
  half.center = 1.0;
  EXPECT_TRUE(std::isinf(representation_from_json(representation_to_json(half)).interval.hi));
  EXPECT_THROW(representation_from_json(nlohmann::json{{"format", "x"}}), InvalidInput);
}
