#include <gtest/gtest.h>

#include <cmath>

#include "rbmo/transforms.hpp"

using namespace rbmo;

namespace {

const Rect kW(0, 0, 1, 1);

GridSamples periodic(int n, const std::function<double(double, double)>& f) {
  GridSamples G(kW, n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Point c = G.cell_center(i, j);
      G.at(i, j) = f(c.x, c.y);
    }
  return G;
}

double max_diff(const GridSamples& a, const GridSamples& b) {
  double m = 0.0;
  for (size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

}  // namespace

TEST(Transforms, HilbertOnPlaneWave) {
  // cos(2π(3x + y)) with v·ξ > 0 maps to sin(2π(3x + y))
  const auto F = periodic(64, [](double x, double y) { return std::cos(2 * M_PI * (3 * x + y)); });
  const auto S = periodic(64, [](double x, double y) { return std::sin(2 * M_PI * (3 * x + y)); });
  EXPECT_LE(max_diff(directional_hilbert(F, {1, 0}), S), 1e-12);
}

TEST(Transforms, HilbertSquaredIsMinusIdentity) {
  const auto F = periodic(64, [](double x, double y) {
    return std::sin(2 * M_PI * 2 * x) * std::cos(2 * M_PI * 5 * y) + std::cos(2 * M_PI * 7 * x);
  });
  auto HH = directional_hilbert(directional_hilbert(F, {1, 0}), {1, 0});
  for (auto& v : HH.mutable_data()) v = -v;
  EXPECT_LE(max_diff(HH, F), 1e-8);
}

TEST(Transforms, HilbertKillsConstants) {
  GridSamples one(kW, 32, 32, std::vector<double>(32 * 32, 2.0));
  for (double v : directional_hilbert(one, {0.6, 0.8}).data()) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Transforms, HilbertCommutesWithYTranslation) {
  const auto F = periodic(32, [](double x, double y) { return std::exp(-40 * ((x - .5) * (x - .5) + (y - .4) * (y - .4))); });
  GridSamples T(kW, 32, 32);
  for (int j = 0; j < 32; ++j)
    for (int i = 0; i < 32; ++i) T.at(i, j) = F.at(i, (j + 3) % 32);
  const auto a = directional_hilbert(F, {1, 0});
  const auto b = directional_hilbert(T, {1, 0});
  double m = 0.0;
  for (int j = 0; j < 32; ++j)
    for (int i = 0; i < 32; ++i) m = std::max(m, std::abs(b.at(i, j) - a.at(i, (j + 3) % 32)));
  EXPECT_LE(m, 1e-12);
}

TEST(Transforms, RotationConjugatesHilbert) {
  // H_v F = (H_e1[F∘φ])∘φ^{-1} with φ(e1) = v; smooth F compactly inside a large padded window.
  // The 1/t tails see periodic images, so the padding sets the error (about 1/pad).
  const double th = M_PI / 6;
  const Rect W(-2, -2, 4, 4);
  const int n = 256;
  auto f = [](double x, double y) {
    const double r = 1.0 - (x * x + 2 * y * y) / 1.96;
    return r > 0.0 ? x * std::pow(r, 4) : 0.0;
  };
  const auto F = GridSamples::sample_points(ClosedExpr(f), W, n, n);
  const auto lhs = directional_hilbert(F, {std::cos(th), std::sin(th)}, 8);
  const ClosedExpr Fphi([&](double x, double y) {
    const Point u = rotate({x, y}, th);
    return f(u.x, u.y);
  });
  const auto H = directional_hilbert(GridSamples::sample_points(Fphi, W, n, n), {1, 0}, 8);
  // bilinear lookup of H at φ^{-1}(p), done here independently of compose_rotation
  auto lookup = [&](Point p) {
    const double u = (p.x - W.x0) / H.cell_w() - 0.5, v = (p.y - W.y0) / H.cell_h() - 0.5;
    const int i = int(std::floor(u)), j = int(std::floor(v));
    const double a = u - i, b = v - j;
    return (1 - a) * (1 - b) * H.at(i, j) + a * (1 - b) * H.at(i + 1, j) + (1 - a) * b * H.at(i, j + 1) +
           a * b * H.at(i + 1, j + 1);
  };
  double m = 0.0, scale = 0.0;
  for (int j = n / 4; j < 3 * n / 4; ++j)
    for (int i = n / 4; i < 3 * n / 4; ++i) {
      m = std::max(m, std::abs(lookup(rotate(lhs.cell_center(i, j), -th)) - lhs.at(i, j)));
      scale = std::max(scale, std::abs(lhs.at(i, j)));
    }
  EXPECT_LE(m, 1e-3 * std::max(1.0, scale));
}

TEST(Transforms, RoughOperator) {
  const auto F = periodic(32, [](double x, double y) { return std::sin(2 * M_PI * (x + 2 * y)); });
  for (double v : rough_operator(F, [](double) { return 0.0; }).data()) EXPECT_EQ(v, 0.0);
  GridSamples one(kW, 32, 32, std::vector<double>(32 * 32, 1.0));
  for (double v : rough_operator(one, [](double t) { return std::cos(t); }).data()) EXPECT_LE(std::abs(v), 1e-10);
  EXPECT_THROW(rough_operator(F, [](double) { return 1.0; }), std::invalid_argument);
}

TEST(Transforms, RoughOperatorPointMassPair) {
  // Ω concentrated near ±e1 with opposite signs: T_Ω ≈ c H_e1 with c = ∫_{near 0} Ω
  const int n = 4096;
  const double w = 0.01;
  auto omega = [w](double t) {
    const double d0 = std::remainder(t, 2 * M_PI), d1 = std::remainder(t - M_PI, 2 * M_PI);
    return (std::abs(d0) < w ? 1.0 : 0.0) - (std::abs(d1) < w ? 1.0 : 0.0);
  };
  const auto F = periodic(32, [](double x, double y) { return std::cos(2 * M_PI * (2 * x + 0.0 * y)); });
  const auto T = rough_operator(F, omega, n);
  auto H = directional_hilbert(F, {1, 0});
  // H_{-e1} = -H_e1, so T_Ω = ½ Σ |Ω(v_k)| Δθ H_e1 up to the directions tilted off ±e1
  double mass = 0.0;
  for (int k = 0; k < n; ++k) mass += std::abs(omega((k + 0.5) * 2 * M_PI / n)) * 2 * M_PI / n;
  for (auto& v : H.mutable_data()) v *= 0.5 * mass;
  EXPECT_LE(max_diff(T, H), 1e-3);
}

TEST(Transforms, RoughOperatorConvergesInNodes) {
  const auto F = periodic(32, [](double x, double y) { return std::exp(-30 * ((x - .5) * (x - .5) + (y - .5) * (y - .5))); });
  auto omega = [](double t) { return std::cos(t) + 0.3 * std::sin(3 * t); };
  const auto a = rough_operator(F, omega, 512), b = rough_operator(F, omega, 1024);
  EXPECT_LE(max_diff(a, b), 1e-3);
}

TEST(Transforms, ComposeRotation) {
  const auto P = std::make_shared<PolygonIndicator>(ConvexPolygon::from_rect(Rect(0, 0, 1, 0.5)));
  EXPECT_EQ(compose_rotation(P, 0.0), P);
  const auto Q = compose_rotation(P, 0.7);
  EXPECT_NEAR(Q->integrate(Rect(-3, -3, 6, 6)), 0.5, 1e-14);
  EXPECT_NEAR(Q->integrate_sq(Rect(-3, -3, 6, 6)), 0.5, 1e-14);
  const ClosedExpr E([](double x, double y) { return std::exp(-(x * x + y * y)); }, Rect(-6, -6, 12, 12));
  const auto Er = compose_rotation(std::make_shared<ClosedExpr>(E), 0.9);
  EXPECT_NEAR(Er->value(0.3, 0.1), E.value(0.3, 0.1), 1e-15);  // radial
  // resampled path preserves the L² norm to about 1e-3
  const auto G = GridSamples::sample_points(ClosedExpr([](double x, double y) {
                                              return std::exp(-20 * ((x - .5) * (x - .5) + 3 * (y - .5) * (y - .5)));
                                            }),
                                            kW, 128, 128);
  const auto R = compose_rotation(G, 0.5);
  EXPECT_NEAR(R.l2_norm(), G.l2_norm(), 1e-3 * G.l2_norm());
  EXPECT_THROW(compose_rotation(G, 0.5, kW), std::invalid_argument);
}
