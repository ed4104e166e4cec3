#include "rbmo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rbmo {

namespace {
constexpr double kClipTol = 1e-12;
}

Point rotate(Point p, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {p.x * c - p.y * s, p.x * s + p.y * c};
}

Rect::Rect(double x0_, double y0_, double w_, double h_) : x0(x0_), y0(y0_), w(w_), h(h_) {
  if (!(w > 0.0) || !(h > 0.0) || !std::isfinite(x0) || !std::isfinite(y0))
    throw std::invalid_argument("Rect: non-positive or non-finite dimensions");
}

bool Rect::contains(Point p, double tol) const {
  return p.x >= x0 - tol && p.x <= x1() + tol && p.y >= y0 - tol && p.y <= y1() + tol;
}

Rect Rect::dilate(double lambda) const {
  const Point c = center();
  return Rect(c.x - 0.5 * lambda * w, c.y - 0.5 * lambda * h, lambda * w, lambda * h);
}

Rect Rect::quadrant(int q) const {
  const int qx = q & 1, qy = q >> 1;
  return Rect(x0 + 0.5 * w * qx, y0 + 0.5 * h * qy, 0.5 * w, 0.5 * h);
}

ConvexPolygon ConvexPolygon::from_rect(const Rect& r) {
  return {{{r.x0, r.y0}, {r.x1(), r.y0}, {r.x1(), r.y1()}, {r.x0, r.y1()}}};
}

double ConvexPolygon::area() const {
  if (v.size() < 3) return 0.0;
  double s = 0.0;
  for (size_t i = 0, n = v.size(); i < n; ++i) s += cross(v[i], v[(i + 1) % n]);
  return std::max(0.0, 0.5 * s);
}

std::array<Point, 4> RotatedRect::corners() const {
  return {rotate({base.x0, base.y0}, theta), rotate({base.x1(), base.y0}, theta),
          rotate({base.x1(), base.y1()}, theta), rotate({base.x0, base.y1()}, theta)};
}

ConvexPolygon RotatedRect::polygon() const {
  auto c = corners();
  return {{c[0], c[1], c[2], c[3]}};
}

Rect RotatedRect::bbox() const {
  auto c = corners();
  double lx = c[0].x, hx = c[0].x, ly = c[0].y, hy = c[0].y;
  for (auto& p : c) {
    lx = std::min(lx, p.x);
    hx = std::max(hx, p.x);
    ly = std::min(ly, p.y);
    hy = std::max(hy, p.y);
  }
  return Rect(lx, ly, hx - lx, hy - ly);
}

ConvexPolygon clip_convex(const ConvexPolygon& poly, Point n, double c) {
  ConvexPolygon out;
  const size_t m = poly.v.size();
  if (m == 0) return out;
  out.v.reserve(m + 1);
  const double scale = std::max(1.0, std::abs(c));
  auto side = [&](Point p) {
    double d = dot(n, p) - c;
    return std::abs(d) <= kClipTol * scale ? 0.0 : d;
  };
  for (size_t i = 0; i < m; ++i) {
    const Point a = poly.v[i], b = poly.v[(i + 1) % m];
    const double da = side(a), db = side(b);
    if (da <= 0) out.v.push_back(a);
    if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
      const double t = da / (da - db);
      out.v.push_back(a + t * (b - a));
    }
  }
  // drop consecutive duplicates
  ConvexPolygon r;
  for (auto& p : out.v) {
    if (!r.v.empty() && std::abs(p.x - r.v.back().x) <= kClipTol * scale &&
        std::abs(p.y - r.v.back().y) <= kClipTol * scale)
      continue;
    r.v.push_back(p);
  }
  while (r.v.size() > 1 && std::abs(r.v.front().x - r.v.back().x) <= kClipTol * scale &&
         std::abs(r.v.front().y - r.v.back().y) <= kClipTol * scale)
    r.v.pop_back();
  if (r.v.size() < 3) r.v.clear();
  return r;
}

ConvexPolygon clip_rect(const ConvexPolygon& poly, const Rect& r) {
  ConvexPolygon p = clip_convex(poly, {1, 0}, r.x1());
  p = clip_convex(p, {-1, 0}, -r.x0);
  p = clip_convex(p, {0, 1}, r.y1());
  return clip_convex(p, {0, -1}, -r.y0);
}

ConvexPolygon intersect(const ConvexPolygon& a, const ConvexPolygon& b) {
  ConvexPolygon p = a;
  const size_t m = b.v.size();
  for (size_t i = 0; i < m && !p.empty(); ++i) {
    const Point e0 = b.v[i], e1 = b.v[(i + 1) % m];
    // interior of a ccw polygon is on the left of each edge
    const Point n{e1.y - e0.y, e0.x - e1.x};
    p = clip_convex(p, n, dot(n, e0));
  }
  return p;
}

double intersect_area(const Rect& r, const RotatedRect& q) {
  return clip_rect(q.polygon(), r).area();
}

SegmentsAndTops segments_and_tops(const RotatedRect& q) {
  const Rect& b = q.base;
  const double xs[3] = {b.x0 + 0.5 * b.w, b.x1(), b.x0};
  const double ys[3] = {b.y0 + 0.5 * b.h, b.y1(), b.y0};
  SegmentsAndTops out{};
  for (int i = 0; i < 3; ++i) {
    out.segments[i] = {rotate({xs[i], b.y0}, q.theta), rotate({xs[i], b.y1()}, q.theta),
                       SegmentKind::Vertical, i + 1};
    out.segments[3 + i] = {rotate({b.x0, ys[i]}, q.theta), rotate({b.x1(), ys[i]}, q.theta),
                           SegmentKind::Horizontal, i + 1};
  }
  int t = 0;
  for (double x : {b.x0, b.x0 + 0.5 * b.w, b.x1()})
    for (double y : {b.y0, b.y0 + 0.5 * b.h, b.y1()}) out.tops[t++] = rotate({x, y}, q.theta);
  return out;
}

bool segment_meets_rect(Point a, Point b, const Rect& r, double tol) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double qv[4] = {a.x - (r.x0 - tol), (r.x1() + tol) - a.x, a.y - (r.y0 - tol),
                        (r.y1() + tol) - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (qv[i] < 0) return false;
      continue;
    }
    const double t = qv[i] / p[i];
    if (p[i] < 0) {
      if (t > t1) return false;
      t0 = std::max(t0, t);
    } else {
      if (t < t0) return false;
      t1 = std::min(t1, t);
    }
  }
  return t0 <= t1;
}

bool segment_meets_rect(const Segment& s, const Rect& r, double tol) {
  return segment_meets_rect(s.a, s.b, r, tol);
}

}  // namespace rbmo
