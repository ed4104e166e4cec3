#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rbmo/haar.hpp"
#include "rbmo/norms.hpp"

using namespace rbmo;

TEST(Norms, OscillationExactVsQuadrature) {
  const auto g = power_tail(0.3);
  for (Interval I : {Interval{-3.0, 5.0}, Interval{0.5, 40.0}, Interval{-1.0, 1.0}}) {
    const double a = osc(*g, I);
    const double b = osc([&](double y) { return g->value(y); }, I);
    EXPECT_NEAR(a, b, 1e-8 * std::max(1.0, a));
  }
  EXPECT_NEAR(osc(*g, Interval{-1.0, 1.0}), 0.0, 1e-12);
}

TEST(Norms, OscillationOfStep) {
  // 1_{[0,1]} on [-1, 1]: variance 1/4
  EXPECT_NEAR(osc(*indicator(0.0, 1.0), Interval{-1.0, 1.0}), 0.5, 1e-12);
}

TEST(Norms, TailBmoDecaysWithAlpha) {
  const auto fam = tail_family();
  const double a = bmo_1d(*power_tail(0.5), fam).value;
  const double b = bmo_1d(*power_tail(0.125), fam).value;
  EXPECT_GT(a, b);
  EXPECT_GT(b, 0.0);
}

TEST(Norms, SingleWaveletCarleson) {
  // F = h_R: the normalised Carleson sum over R itself is |R|^{-1/2}
  const DyadicRectangle R{{false, -1, 0}, {false, -2, 1}};
  GridSamples F(Rect(0, 0, 1, 1), 32, 32);
  for (int j = 0; j < 32; ++j)
    for (int i = 0; i < 32; ++i) {
      const Point c = F.cell_center(i, j);
      F.at(i, j) = haar_value(R.ix, c.x) * haar_value(R.iy, c.y);
    }
  BiparamOptions o;
  o.grids = {{false, false}};
  const auto e = bmo_biparam(F, o);
  EXPECT_NEAR(e.value, 1.0 / std::sqrt(R.area()), 1e-12);
  EXPECT_NEAR(carleson_sum(coefficients(F, o.window, {}, o.kmin, o.kmax), std::vector<Rect>{R.realize()}),
              1.0 / std::sqrt(R.area()), 1e-12);
}

TEST(Norms, StrategiesAreOrderedLowerBounds) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N(0.0, 1.0);
  GridSamples F(Rect(0, 0, 1, 1), 16, 16);
  for (auto& v : F.mutable_data()) v = N(rng);
  BiparamOptions o;
  o.kmin = -4;
  o.grids = {{false, false}};
  const double singles = bmo_biparam(F, o).value;
  o.strategy = Strategy::Greedy;
  const double greedy = bmo_biparam(F, o).value;
  EXPECT_GE(greedy, singles - 1e-12);
}

TEST(Norms, SeparableMatchesGeneric) {
  const auto f = smooth_haar(0.25, 0.75, 0.25), g = bump(0.5, 0.3);
  const SeparableField F(f, g);
  BiparamOptions o;
  o.kmin = -4;
  o.grids = {{false, false}};
  const double sep = bmo_biparam_separable(F, o).value;
  const double gen = bmo_biparam(F, o).value;
  EXPECT_NEAR(sep, gen, 1e-9 * sep);
}

TEST(Norms, UnionContains) {
  const std::vector<Rect> U{Rect(0, 0, 0.5, 1), Rect(0.5, 0, 0.5, 0.5)};
  EXPECT_TRUE(union_contains(U, Rect(0.25, 0.1, 0.5, 0.3)));
  EXPECT_FALSE(union_contains(U, Rect(0.25, 0.4, 0.5, 0.3)));
}

TEST(Norms, SobolevZeroOrderIsLp) {
  const auto b = bump(0.5, 0.3);
  const ClosedExpr F([b](double x, double y) { return b->value(x) * b->value(y); });
  const auto G = GridSamples::sample_points(F, Rect(0, 0, 1, 1), 64, 64);
  EXPECT_NEAR(sobolev_norm(G, 0.0, 3.0).spectral, G.lp_norm(3.0), 1e-9);
}

TEST(Norms, SobolevMonotoneInS) {
  const auto b = bump(0.5, 0.3);
  const ClosedExpr F([b](double x, double y) { return b->value(x) * b->value(y); });
  const auto G = GridSamples::sample_points(F, Rect(0, 0, 1, 1), 64, 64);
  EXPECT_LT(sobolev_norm(G, 0.5, 2.0).spectral, sobolev_norm(G, 1.0, 2.0).spectral);
  // p = 2, s = 1: ‖(1-Δ)^{1/2}F‖_2² = ‖F‖² + ‖∇F‖², compared with finite differences
  const auto s = sobolev_norm(G, 1.0, 2.0);
  ASSERT_TRUE(s.fd.has_value());
}

TEST(Norms, SobolevRejectsCoarseGrid) {
  GridSamples G(Rect(0, 0, 1, 1), 16, 16);
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i) G.at(i, j) = ((i + j) % 2) ? 1.0 : -1.0;
  EXPECT_THROW(sobolev_norm(G, 1.0, 4.0), ResolutionError);
}
