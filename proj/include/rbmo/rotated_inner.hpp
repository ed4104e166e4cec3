#pragma once

#include <string>

#include "rbmo/dyadic.hpp"
#include "rbmo/geometry.hpp"

namespace rbmo {

struct WaveletPair {
  Rect S;  // axis-parallel
  Rect T;  // rotated by theta about the origin
  double theta;

  WaveletPair(Rect s, Rect t, double th) : S(s), T(t), theta(th) {}
  WaveletPair(const DyadicRectangle& s, const DyadicRectangle& t, double th)
      : S(s.realize()), T(t.realize()), theta(th) {}
};

enum class IntersectionCase {
  NoIntersection,
  VerticalOnly,
  HorizontalOnly,
  BothNoVerticalBoundary,
  BothNoHorizontalBoundary,
  TopsInS,
  // both kinds of segment meet S, no top in S, and both S boundaries cross φ(T)
  Unclassified,
};

std::string to_string(IntersectionCase c);

// ⟨h_S ∘ φ, h_T⟩ = ⟨h_S, h_T ∘ φ^{-1}⟩ with φ the rotation by theta
double inner_product(const WaveletPair& pr);
IntersectionCase classify(const WaveletPair& pr);
double delta_v(const WaveletPair& pr);
double delta_h(const WaveletPair& pr);
double prop1_bound(const WaveletPair& pr);
double prop1_bound(const WaveletPair& pr, IntersectionCase c);

// the two one-parameter right-hand sides
double vertical_bound(const WaveletPair& pr);
double horizontal_bound(const WaveletPair& pr);
bool near_axis_angle(double theta, double tol = 1e-15);

bool segment_meets_polygon(Point a, Point b, const ConvexPolygon& P, double tol = 1e-12);

}  // namespace rbmo
