#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "rbmo/haar.hpp"

using namespace rbmo;

namespace {

GridSamples random_field(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N(0.0, 1.0);
  GridSamples F(Rect(0, 0, 1, 1), n, n);
  for (auto& v : F.mutable_data()) v = N(rng);
  return F;
}

}  // namespace

TEST(Haar, RoundTripAndParseval) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 10; ++it) {
    const auto F = random_field(rng, 32);
    const auto C = forward(F);
    ASSERT_TRUE(C.kernel.has_value());
    const auto W = inverse(C);
    double err = 0.0, wave_sq = 0.0;
    for (size_t k = 0; k < F.data().size(); ++k) {
      err = std::max(err, std::abs(W.data()[k] + C.kernel->data()[k] - F.data()[k]));
      wave_sq += W.data()[k] * W.data()[k] * F.cell_area();
    }
    EXPECT_LE(err, 1e-12);
    EXPECT_NEAR(C.sum_sq(), wave_sq, 1e-10 * wave_sq);
  }
}

TEST(Haar, FastTransformMatchesDirectCoefficients) {
  std::mt19937_64 rng(6);
  const auto F = random_field(rng, 16);
  const auto C = forward(F);
  for (const auto& [key, v] : C.entries()) EXPECT_NEAR(v, coeff(F, C.rect(key)), 1e-12);
}

TEST(Haar, WaveletsAreOrthonormal) {
  // ⟨h_R, h_R'⟩ through coeff of a sampled wavelet
  const DyadicRectangle R{{false, -2, 1}, {false, -3, 5}};
  GridSamples F(Rect(0, 0, 1, 1), 64, 64);
  for (int j = 0; j < 64; ++j)
    for (int i = 0; i < 64; ++i) {
      const Point c = F.cell_center(i, j);
      F.at(i, j) = haar_value(R.ix, c.x) * haar_value(R.iy, c.y);
    }
  EXPECT_NEAR(coeff(F, R), 1.0, 1e-12);
  EXPECT_NEAR(coeff(F, DyadicRectangle{R.ix, {false, -3, 4}}), 0.0, 1e-12);
  EXPECT_NEAR(coeff(F, DyadicRectangle{R.ix.children().first, R.iy}), 0.0, 1e-12);
}

TEST(Haar, KernelFieldsHaveNoWaveletPart) {
  // f(x) + g(y) lives in the kernel
  GridSamples F(Rect(0, 0, 1, 1), 32, 32);
  for (int j = 0; j < 32; ++j)
    for (int i = 0; i < 32; ++i) F.at(i, j) = std::sin(0.3 * i) + std::cos(0.7 * j);
  EXPECT_NEAR(forward(F).sum_sq(), 0.0, 1e-24);
}

TEST(Haar, ShiftedGridRejected) {
  GridSamples F(Rect(0, 0, 1, 1), 8, 8);
  EXPECT_THROW(forward(F, GridId{true, false}), std::invalid_argument);
}

TEST(Haar, CoefficientMapJsonlRoundTrip) {
  std::mt19937_64 rng(8);
  const auto C = forward(random_field(rng, 8));
  std::stringstream ss;
  C.write_jsonl(ss);
  const auto D = HaarCoefficientMap::read_jsonl(ss);
  ASSERT_EQ(D.size(), C.size());
  for (const auto& [key, v] : C.entries()) EXPECT_DOUBLE_EQ(D.get(C.rect(key)), v);
}
