#include <gtest/gtest.h>

#include <cmath>

#include "rbmo/experiments.hpp"
#include "rbmo/haar.hpp"

using namespace rbmo;

TEST(Experiments, RotationWitnessAtStandardAngles) {
  for (double th : {M_PI / 6, M_PI / 4, M_PI / 3, 2.0, 4.0}) {
    const auto r = counterexample1(th, -7, -1, 512);
    EXPECT_TRUE(r.pass()) << th;
    EXPECT_NEAR(r.exact, r.quadrature, 5e-3);
  }
}

TEST(Experiments, RightAnglesRejected) {
  EXPECT_THROW(counterexample1(M_PI / 2), std::invalid_argument);
  EXPECT_THROW(counterexample1(M_PI), std::invalid_argument);
  EXPECT_THROW(counterexample1(0.0), std::invalid_argument);
}

TEST(Experiments, UnshiftedKernelFieldHasZeroWaveletPart) {
  // sanity for the counterexample: F itself has zero coefficients on every grid rectangle
  const auto F = ce1_field();
  for (int g = 0; g < 4; ++g)
    for (const auto& R : enumerate(Rect(-1, -1, 2, 2), GridId::from_index(g), -3, -2))
      EXPECT_NEAR(coeff(*F, R), 0.0, 1e-14);
}

TEST(Experiments, SuitesAreDeterministic) {
  const auto a = run_suite("geometry", 3), b = run_suite("geometry", 3);
  EXPECT_EQ(a.junit(), b.junit());
  EXPECT_TRUE(a.passed());
  EXPECT_THROW(run_suite("nope"), std::invalid_argument);
}

TEST(Experiments, JourneSuitePasses) { EXPECT_TRUE(run_suite("journe", 1).passed()); }

TEST(Experiments, SweepRejectsBadEpsilon) {
  SweepOptions o;
  o.epsilons = {1.5};
  EXPECT_THROW(interpolation_sweep(o, sweep_family()), std::invalid_argument);
}
