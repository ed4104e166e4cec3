#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rbmo/experiments.hpp"
#include "rbmo/rotated_inner.hpp"

using namespace rbmo;

namespace {

Rect random_rect(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> K(-4, 1);
  return Rect(U(rng), U(rng), std::ldexp(1.0, K(rng)), std::ldexp(1.0, K(rng)));
}

}  // namespace

TEST(RotatedInner, IdentityAngleIsOrthonormality) {
  const Rect S(0, 0, 0.5, 0.25);
  EXPECT_NEAR(inner_product(WaveletPair(S, S, 0.0)), 1.0, 1e-14);
  EXPECT_NEAR(inner_product(WaveletPair(S, Rect(0, 0, 0.25, 0.25), 0.0)), 0.0, 1e-14);
  EXPECT_NEAR(inner_product(WaveletPair(S, Rect(0, 0.25, 0.5, 0.25), 0.0)), 0.0, 1e-14);
}

TEST(RotatedInner, QuarterTurnMapsWaveletToWavelet) {
  // φ^{π/2} maps a 1 x 2 rectangle onto a 2 x 1 one; h_S∘φ = ± h_T there
  const Rect T(0, 0, 1, 2), S(-2, 0, 2, 1);
  EXPECT_NEAR(std::abs(inner_product(WaveletPair(S, T, M_PI / 2))), 1.0, 1e-12);
}

TEST(RotatedInner, AgreesWithMonteCarlo) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> A(0.0, 2 * M_PI);
  int outside = 0, total = 0;
  for (int it = 0; it < 200; ++it) {
    const Rect S = random_rect(rng), T = random_rect(rng);
    const double th = A(rng);
    const double ip = inner_product(WaveletPair(S, T, th));
    const auto [m, se] = inner_product_mc(S, T, th, 20000, rng);
    ++total;
    if (std::abs(m - ip) > 3 * se + 1e-12) ++outside;
  }
  EXPECT_LE(outside, 4) << outside << " of " << total;
}

TEST(RotatedInner, DominatedByCaseBound) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> A(0.0, 2 * M_PI);
  for (int it = 0; it < 3000; ++it) {
    const WaveletPair pr(random_rect(rng), random_rect(rng), A(rng));
    EXPECT_LE(std::abs(inner_product(pr)), prop1_bound(pr) * (1 + 1e-9) + 1e-14)
        << to_string(classify(pr));
  }
}

TEST(RotatedInner, CauchySchwarz) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> A(0.0, 2 * M_PI);
  for (int it = 0; it < 1000; ++it) {
    const WaveletPair pr(random_rect(rng), random_rect(rng), A(rng));
    EXPECT_LE(std::abs(inner_product(pr)), 1.0 + 1e-12);
  }
}

TEST(RotatedInner, DisjointSupportsClassifyAsNoIntersection) {
  const WaveletPair pr(Rect(10, 10, 1, 1), Rect(0, 0, 1, 1), 0.3);
  EXPECT_EQ(classify(pr), IntersectionCase::NoIntersection);
  EXPECT_EQ(inner_product(pr), 0.0);
}

TEST(RotatedInner, ZeroUnlessSMeetsRotatedBoundary) {
  // S strictly inside one quadrant of φ(T): h_T∘φ^{-1} is constant on S, so the product integrates to 0
  const Rect T(-1, -1, 2, 2);
  const Rect S(0.2, 0.2, 0.1, 0.1);
  EXPECT_NEAR(inner_product(WaveletPair(S, T, 0.1)), 0.0, 1e-15);
}
