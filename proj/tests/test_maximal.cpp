#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rbmo/experiments.hpp"
#include "rbmo/maximal.hpp"

using namespace rbmo;

namespace {

OpenSet small_set(std::mt19937_64& rng, int n) {
  OpenSet O(Rect(0, 0, 1, 1), n, n);
  std::uniform_int_distribution<int> C(0, n - 1);
  for (int r = 0; r < 4; ++r) {
    const int i = C(rng), j = C(rng);
    for (int a = i; a < std::min(n, i + 3); ++a)
      for (int b = j; b < std::min(n, j + 2); ++b) O.set(a, b);
  }
  return O;
}

}  // namespace

TEST(Maximal, FieldMatchesDirectScan) {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 5; ++it) {
    const auto O = small_set(rng, 16);
    const auto M = strong_max_field(O);
    for (int j = 0; j < 16; ++j)
      for (int i = 0; i < 16; ++i) {
        const Point p{(i + 0.5) / 16, (j + 0.5) / 16};
        EXPECT_NEAR(M[size_t(j) * 16 + i], strong_max(O, p), 1e-15);
      }
  }
}

TEST(Maximal, MaxFunctionIsOneOnTheSet) {
  std::mt19937_64 rng(32);
  const auto O = small_set(rng, 32);
  const auto M = strong_max_field(O);
  for (int j = 0; j < 32; ++j)
    for (int i = 0; i < 32; ++i)
      if (O.get(i, j)) EXPECT_EQ(M[size_t(j) * 32 + i], 1.0);
}

TEST(Maximal, EnlargementContainsSetAndGrowsAsEpsShrinks) {
  std::mt19937_64 rng(33);
  const auto O = small_set(rng, 32);
  const auto a = enlarge(O, 0.5).result, b = enlarge(O, 0.1).result;
  EXPECT_TRUE(O.subset_of(a));
  EXPECT_TRUE(a.subset_of(b));
  EXPECT_THROW(enlarge(O, 1.0), std::invalid_argument);
}

TEST(Maximal, MaximalRectanglesMatchBruteForce) {
  std::mt19937_64 rng(34);
  for (int it = 0; it < 4; ++it) {
    const auto O = small_set(rng, 16);
    const auto all = contained_rectangles(O);
    std::vector<DyadicRectangle> brute;
    for (const auto& R : all) {
      bool maximal = true;
      for (const auto& Q : all)
        if (!(Q == R) && Q.contains(R)) maximal = false;
      if (maximal) brute.push_back(R);
    }
    auto fast = maximal_rectangles(O);
    std::sort(fast.begin(), fast.end());
    std::sort(brute.begin(), brute.end());
    EXPECT_EQ(fast, brute);
  }
}

TEST(Maximal, RotatedMaxAtZeroAngleAgrees) {
  std::mt19937_64 rng(35);
  const auto O = small_set(rng, 16);
  const Point p{0.3, 0.6};
  EXPECT_NEAR(strong_max(O, p, 0.0), strong_max(rotate_set(O, 0.0), p, 0.0), 1e-15);
}

TEST(Maximal, JourneLevelBound) {
  const auto st = journe_stats(6, {1.0 / 16, 1.0 / 64}, 7, 128);
  EXPECT_EQ(st.level_violations, 0);
  EXPECT_GT(st.runs, 0);
}

TEST(Maximal, SubmaximalPiecesHaveBoundedEccentricity) {
  const DyadicRectangle K{{false, -6, 3}, {false, -1, 0}};  // eccentricity 2^5
  for (int l = 3; l <= 8; ++l) {
    const auto parts = submaximal_split(K, l);
    double area = 0.0;
    for (const auto& P : parts) {
      EXPECT_LE(std::abs(P.iy.k - P.ix.k), l - 3);
      EXPECT_TRUE(K.contains(P));
      area += P.area();
    }
    EXPECT_NEAR(area, K.area(), 1e-15);
  }
  EXPECT_THROW(submaximal_split(K, 2), std::invalid_argument);
}

// A horizontal segment that starts in φ(K) and leaves φ(2^l K) is at least as long as the
// exit distance from the worst corner, (2^l - 1) min(κ1/|cos|, κ2/|sin|) with κ the half sides.
TEST(Maximal, HorizontalExitLength) {
  std::mt19937_64 rng(36);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int it = 0; it < 1000; ++it) {
    const double th = 0.05 + 1.4 * U(rng), k1 = 0.1 + U(rng), k2 = 0.1 + U(rng);
    const int l = 1 + int(4 * U(rng));
    const double L = std::ldexp(1.0, l), c = std::cos(th), s = std::sin(th);
    // start point q in K (unrotated frame), move along φ^{-1}(e1) = (c, -s) until leaving 2^l K
    const Point q{k1 * (2 * U(rng) - 1), k2 * (2 * U(rng) - 1)};
    const double tx = (L * k1 - q.x) / c, ty = (L * k2 + q.y) / s;
    const double t = std::min(tx, ty);
    EXPECT_GE(t, (L - 1) * std::min(k1 / c, k2 / s) * (1 - 1e-12));
  }
  // the bound is attained at a corner, below the 2^l min(...) form
  const double th = 0.6, k1 = 0.5, k2 = 0.8, L = 8.0, c = std::cos(th), s = std::sin(th);
  const double t = std::min((L * k1 - k1) / c, (L * k2 - k2) / s);
  EXPECT_LT(t, L * std::min(k1 / c, k2 / s));
}
