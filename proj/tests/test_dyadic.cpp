#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rbmo/dyadic.hpp"

using namespace rbmo;

TEST(Dyadic, IntervalAtContainsPoint) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-10.0, 10.0);
  for (bool sh : {false, true})
    for (int k = -8; k <= 6; ++k)
      for (int it = 0; it < 50; ++it) {
        const double x = U(rng);
        const auto I = interval_at(sh, k, x);
        EXPECT_LE(I.lo(), x);
        EXPECT_LT(x, I.hi());
        EXPECT_DOUBLE_EQ(I.len(), std::ldexp(1.0, k));
      }
}

TEST(Dyadic, ShiftedGridNests) {
  // every interval is the union of its two children, in both grids
  for (bool sh : {false, true})
    for (int k = -6; k <= 6; ++k)
      for (std::int64_t j = -5; j <= 5; ++j) {
        const DyadicInterval I{sh, k, j};
        const auto [a, b] = I.children();
        EXPECT_EQ(a.parent(), I);
        EXPECT_EQ(b.parent(), I);
        EXPECT_TRUE(a.left() == I.left());
        EXPECT_TRUE(b.left() == a.left() + pow2(k - 1));
        EXPECT_TRUE(I.contains(a));
      }
}

TEST(Dyadic, ShiftedGridAvoidsCommonEndpoints) {
  // no shifted interval of scale k >= 1 shares its left endpoint with 0
  for (int k = 1; k <= 10; ++k) {
    const auto I = interval_at(true, k, 0.0);
    EXPECT_GT(std::abs(I.lo()), 1e-9);
  }
}

TEST(Dyadic, EnumerateCoversWindow) {
  const Rect W(0.1, -0.3, 0.9, 0.7);
  for (int g = 0; g < 4; ++g) {
    double area = 0.0;
    for (const auto& R : enumerate(W, GridId::from_index(g), -3, -2)) {
      const Rect r = R.realize();
      const double w = std::min(r.x1(), W.x1()) - std::max(r.x0, W.x0);
      const double h = std::min(r.y1(), W.y1()) - std::max(r.y0, W.y0);
      EXPECT_GT(w, 0.0);
      EXPECT_GT(h, 0.0);
      area += w * h;
    }
    EXPECT_NEAR(area, W.area(), 1e-12);
  }
}

TEST(Dyadic, CoverIntervalIsSmallest) {
  const auto c = cover_interval(0.3, 0.45);
  EXPECT_LE(c.I0.lo(), 0.3);
  EXPECT_GE(c.I0.hi(), 0.45);
  EXPECT_GE(c.c, 1.0);
}

TEST(Dyadic, RationalArithmetic) {
  const Rational a = pow2(-3), b = pow2(2);
  EXPECT_TRUE(a * b == Rational(pow2(-1)));
  EXPECT_TRUE(a < b);
  EXPECT_TRUE(b - b + a == a);
}
