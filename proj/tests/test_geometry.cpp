#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rbmo/geometry.hpp"

using namespace rbmo;

namespace {

// area of the part of a convex polygon inside r, by point sampling on a fine lattice
double lattice_area(const ConvexPolygon& P, const Rect& r, int n) {
  int hits = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Point p{r.x0 + (i + 0.5) * r.w / n, r.y0 + (j + 0.5) * r.h / n};
      bool in = true;
      for (size_t k = 0; k < P.v.size() && in; ++k)
        in = cross(P.v[(k + 1) % P.v.size()] - P.v[k], p - P.v[k]) >= 0;
      hits += in;
    }
  return hits * r.area() / (double(n) * n);
}

}  // namespace

TEST(Geometry, RotateIsCounterclockwise) {
  const Point p = rotate({1.0, 0.0}, M_PI / 2);
  EXPECT_NEAR(p.x, 0.0, 1e-15);
  EXPECT_NEAR(p.y, 1.0, 1e-15);
}

TEST(Geometry, ClipMatchesLatticeCount) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0), A(0.0, 2 * M_PI);
  for (int it = 0; it < 20; ++it) {
    const RotatedRect q{Rect(U(rng), U(rng), 0.5 + 0.5 * U(rng) + 0.6, 0.7), A(rng)};
    const Rect r(U(rng), U(rng), 1.0, 0.8);
    const double exact = clip_rect(q.polygon(), r).area();
    EXPECT_NEAR(exact, lattice_area(q.polygon(), r, 800), 4e-3);
  }
}

TEST(Geometry, IntersectAreaSymmetricUnderJointRotation) {
  // rotating both shapes about the origin leaves the area unchanged
  const Rect S(0.1, -0.2, 0.7, 0.4), T(-0.3, 0.0, 0.5, 0.9);
  const double a = intersect(ConvexPolygon::from_rect(S), RotatedRect{T, 0.4}.polygon()).area();
  const double b = intersect(RotatedRect{S, 0.3}.polygon(), RotatedRect{T, 0.7}.polygon()).area();
  EXPECT_NEAR(a, b, 1e-14);
}

TEST(Geometry, SegmentsAndTopsLayout) {
  const RotatedRect q{Rect(0, 0, 2, 4), 0.0};
  const auto st = segments_and_tops(q);
  // midline first, then right/top, then left/bottom
  EXPECT_NEAR(st.segments[0].a.x, 1.0, 1e-15);
  EXPECT_NEAR(st.segments[1].a.x, 2.0, 1e-15);
  EXPECT_NEAR(st.segments[2].a.x, 0.0, 1e-15);
  EXPECT_NEAR(st.segments[3].a.y, 2.0, 1e-15);
  int centre = 0;
  for (const auto& t : st.tops) centre += (std::abs(t.x - 1.0) < 1e-15 && std::abs(t.y - 2.0) < 1e-15);
  EXPECT_EQ(centre, 1);
}

TEST(Geometry, SegmentMeetsRectClosed) {
  const Rect r(0, 0, 1, 1);
  EXPECT_TRUE(segment_meets_rect(Point{1.0, 2.0}, Point{1.0, 1.0}, r, 0.0));  // touches a corner
  EXPECT_FALSE(segment_meets_rect(Point{1.1, 2.0}, Point{1.1, -1.0}, r, 1e-12));
  EXPECT_TRUE(segment_meets_rect(Point{-1, 0.5}, Point{2, 0.5}, r));
}

TEST(Geometry, BboxContainsCorners) {
  const RotatedRect q{Rect(0.3, -0.1, 0.25, 2.0), 1.1};
  const Rect bb = q.bbox();
  for (const auto& c : q.corners()) EXPECT_TRUE(bb.contains(c, 1e-12));
}
