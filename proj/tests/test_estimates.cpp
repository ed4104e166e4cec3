#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rbmo/estimates.hpp"
#include "rbmo/rotated_inner.hpp"

using namespace rbmo;

TEST(Estimates, SegmentCountsMatchBruteForce) {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 60; ++it) {
    const auto c = sample_config(rng, false, 128);
    const auto Ks = sub_rectangles(c.K_max, c.k1, c.k2);
    for (size_t i = 0; i < Ks.size(); i += std::max<size_t>(1, Ks.size() / 4)) {
      const auto a = count_segments(c, Ks[i]), b = count_segments_bruteforce(c, Ks[i]);
      EXPECT_EQ(a.Nv, b.Nv);
      EXPECT_EQ(a.Nh, b.Nh);
      EXPECT_EQ(a.tops, b.tops);
    }
  }
}

TEST(Estimates, CorrectedCountingBoundsHold) {
  std::mt19937_64 rng(42);
  for (int it = 0; it < 100; ++it) {
    const auto c = sample_config(rng, false, 128);
    for (const auto& K : sub_rectangles(c.K_max, c.k1, c.k2)) {
      const auto s = count_segments(c, K);
      EXPECT_LE(s.Nv, nv_bound_rigorous(c));
      EXPECT_LE(s.Nh, nh_bound_rigorous(c));
      if (is_sparse(c)) EXPECT_LE(s.Nv + s.Nh, 10);
    }
  }
  for (int it = 0; it < 100; ++it) {
    const auto c = sample_config(rng, true, 128);
    for (const auto& R : r_candidates(c, RotatedRect{c.K_max.realize(), c.theta}.bbox()))
      EXPECT_LE(count_L(c, R), l_bound_rigorous(c));
    EXPECT_LE(count_M(c), m_bound_rigorous(c));
  }
}

TEST(Estimates, LambdaCapturesEveryNonzeroPair) {
  // pairs outside Λ (with no enlarged set) have zero inner product
  std::mt19937_64 rng(43);
  for (int it = 0; it < 40; ++it) {
    const auto c = sample_config(rng, false, 64);
    const Rect box = RotatedRect{c.K_max.realize(), c.theta}.bbox();
    const auto Rs = r_candidates(c, box);
    for (const auto& K : sub_rectangles(c.K_max, c.k1, c.k2))
      for (const auto& R : Rs) {
        if (in_lambda(c, R.realize(), K.realize())) continue;
        EXPECT_NEAR(inner_product(WaveletPair(R.realize(), K.realize(), c.theta)), 0.0, 1e-12);
      }
  }
}

TEST(Estimates, GammaIsOrderIndependent) {
  std::mt19937_64 rng(44);
  for (int it = 0; it < 30; ++it) {
    const auto c = sample_config(rng, false, 128);
    const double a = gamma_exact(c).total, b = gamma_exact_shuffled(c, 1000 + it);
    EXPECT_NEAR(a, b, 1e-12 * std::max(a, 1e-300));
  }
}

TEST(Estimates, GammaBelowBound) {
  std::mt19937_64 rng(45);
  for (int it = 0; it < 100; ++it) {
    const auto c = sample_config(rng, false, 256);
    const auto g = gamma_exact(c);
    const auto r = gamma_bound(c, &g);
    EXPECT_LE(g.total, r.bound * (1 + 1e-9) + 1e-20 * c.K_max.area()) << r.case_tag;
  }
}

TEST(Estimates, GammaScalesWithR1InsideHalfColumn) {
  // above the reference scale every pair keeps its geometry, so Γ halves per step of r1
  DyadicRectangle K{{false, 0, 0}, {false, 0, 0}};
  LambdaConfig c;
  c.K_max = K;
  c.theta = M_PI / 6;
  c.refresh_grid();
  for (int k1 = -4; k1 <= -2; ++k1)
    for (int k2 = -4; k2 <= -2; ++k2)
      for (int r2 = -5; r2 <= 0; ++r2) {
        c.k1 = k1;
        c.k2 = k2;
        c.l = 3 + std::abs(k2 - k1);
        c.r2 = r2;
        c.r1 = r1_lower_bound(K, c.theta, k1, k2, c.l, false);
        const double g0 = gamma_exact(c).total;
        c.r1 += 1;
        const double g1 = gamma_exact(c).total;
        c.r1 += 1;
        const double g2 = gamma_exact(c).total;
        EXPECT_NEAR(g1, 0.5 * g0, 1e-9 * g0 + 1e-24);
        EXPECT_NEAR(g2, 0.25 * g0, 1e-9 * g0 + 1e-24);
      }
}

TEST(Estimates, PerfectCancellation) {
  std::mt19937_64 rng(46);
  for (int it = 0; it < 200; ++it) {
    const auto c = sample_perfect_cancellation(rng);
    ASSERT_TRUE(is_perfect_cancellation(c));
    for (const auto& K : sub_rectangles(c.K_max, c.k1, c.k2))
      for (const auto& R : r_candidates(c, RotatedRect{K.realize(), c.theta}.bbox()))
        EXPECT_NEAR(inner_product(WaveletPair(R.realize(), K.realize(), c.theta)), 0.0, 1e-12);
    EXPECT_EQ(gamma_bound(c).bound, 0.0);
  }
}

TEST(Estimates, InadmissibleConfigRejected) {
  LambdaConfig c;
  c.K_max = DyadicRectangle{{false, 0, 0}, {false, 0, 0}};
  c.theta = 0.4;
  c.k1 = 1;  // larger than K_max
  c.k2 = 0;
  c.r1 = 3;
  c.r2 = 0;
  c.refresh_grid();
  EXPECT_FALSE(admissible(c));
  EXPECT_THROW(gamma_exact(c), std::invalid_argument);
}

TEST(Estimates, ErrorTermDecays) {
  ScanParams sp;
  sp.kmin = -4;
  sp.r2min = -6;
  const DyadicRectangle K{{false, 0, 0}, {false, 0, 0}};
  const auto res = error_term_sweep(K, M_PI / 6, {4, 6, 8}, sp);
  ASSERT_EQ(res.size(), 3u);
  EXPECT_GT(res[0].exact_total, res[2].exact_total);
  for (const auto& r : res) EXPECT_TRUE(r.exact_le_bound);
}

TEST(Estimates, ScanRejectsDivergentParameters) {
  ScanParams sp;
  sp.gamma1 = 0.1;
  EXPECT_THROW(scan_mu(sp), std::invalid_argument);
  sp = ScanParams{};
  sp.s = 0.4;
  EXPECT_THROW(scan_mu(sp), std::invalid_argument);
}
