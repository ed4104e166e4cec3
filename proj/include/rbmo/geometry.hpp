#pragma once

#include <array>
#include <vector>

namespace rbmo {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

Point rotate(Point p, double theta);

struct Rect {
  double x0, y0, w, h;

  Rect(double x0, double y0, double w, double h);

  double x1() const { return x0 + w; }
  double y1() const { return y0 + h; }
  double area() const { return w * h; }
  double eccentricity() const { return h / w; }
  Point center() const { return {x0 + 0.5 * w, y0 + 0.5 * h}; }
  // closed containment
  bool contains(Point p, double tol = 0.0) const;
  // concentric dilation λR
  Rect dilate(double lambda) const;
  // quadrant q = qx + 2*qy, qx/qy = 0 for the left/lower half
  Rect quadrant(int q) const;
};

struct ConvexPolygon {
  std::vector<Point> v;  // counterclockwise

  static ConvexPolygon from_rect(const Rect& r);
  double area() const;
  bool empty() const { return v.size() < 3; }
};

struct RotatedRect {
  Rect base;
  double theta;

  std::array<Point, 4> corners() const;
  ConvexPolygon polygon() const;
  RotatedRect quadrant(int q) const { return {base.quadrant(q), theta}; }
  // axis-parallel bounding box of the rotated image
  Rect bbox() const;
};

// keeps the part of poly where dot(n, p) <= c
ConvexPolygon clip_convex(const ConvexPolygon& poly, Point n, double c);
ConvexPolygon clip_rect(const ConvexPolygon& poly, const Rect& r);
ConvexPolygon intersect(const ConvexPolygon& a, const ConvexPolygon& b);

double intersect_area(const Rect& r, const RotatedRect& q);

enum class SegmentKind { Vertical, Horizontal };

struct Segment {
  Point a, b;
  SegmentKind kind;
  int index;  // 1..3, ordered as in the source rectangle: midline, right/top, left/bottom
};

struct SegmentsAndTops {
  std::array<Segment, 6> segments;  // three vertical, then three horizontal
  std::array<Point, 9> tops;
};

SegmentsAndTops segments_and_tops(const RotatedRect& q);

// closed segment vs closed rectangle (Liang-Barsky)
bool segment_meets_rect(const Segment& s, const Rect& r, double tol = 1e-12);
bool segment_meets_rect(Point a, Point b, const Rect& r, double tol = 1e-12);

}  // namespace rbmo
