#include "rbmo/rotated_inner.hpp"

#include "rbmo/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rbmo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double quad_sign(int q) { return ((q & 1) ? -1.0 : 1.0) * ((q & 2) ? -1.0 : 1.0); }

bool boxes_overlap(const Rect& a, const Rect& b) {
  return a.x0 <= b.x1() && b.x0 <= a.x1() && a.y0 <= b.y1() && b.y0 <= a.y1();
}

double tol_for(const WaveletPair& pr) {
  const Rect& S = pr.S;
  const double scale = std::max({std::abs(S.x0), std::abs(S.y0), std::abs(S.x1()), std::abs(S.y1()),
                                 S.w, S.h, pr.T.w, pr.T.h});
  return 1e-12 * scale;
}

// signed split of h_S against the step function sgn(n·p - c)·1_P (+ on the side n·p <= c)
double split_pairing(const Rect& S0, const ConvexPolygon& P0, Point n, double c) {
  const Point o = S0.center();
  const Rect S(S0.x0 - o.x, S0.y0 - o.y, S0.w, S0.h);
  ConvexPolygon P = P0;
  for (auto& v : P.v) v = v - o;
  c -= dot(n, o);
  const ConvexPolygon lo = clip_convex(P, n, c);
  const ConvexPolygon hi = clip_convex(P, Point{-n.x, -n.y}, -c);
  double s = 0.0;
  for (int q = 0; q < 4; ++q) {
    const Rect Sq = S.quadrant(q);
    s += quad_sign(q) * (clip_rect(lo, Sq).area() - clip_rect(hi, Sq).area());
  }
  return s;
}

}  // namespace

std::string to_string(IntersectionCase c) {
  switch (c) {
    case IntersectionCase::NoIntersection: return "no-intersection";
    case IntersectionCase::VerticalOnly: return "vertical-only";
    case IntersectionCase::HorizontalOnly: return "horizontal-only";
    case IntersectionCase::BothNoVerticalBoundary: return "both-no-vertical-boundary";
    case IntersectionCase::BothNoHorizontalBoundary: return "both-no-horizontal-boundary";
    case IntersectionCase::TopsInS: return "tops-in-S";
    case IntersectionCase::Unclassified: return "unclassified";
  }
  return "?";
}

bool near_axis_angle(double theta, double tol) {
  const double q = theta / (0.5 * M_PI);
  return std::abs(q - std::round(q)) * 0.5 * M_PI <= tol;
}

double inner_product(const WaveletPair& pr) {
  const RotatedRect RT{pr.T, pr.theta};
  if (!boxes_overlap(RT.bbox(), pr.S)) return 0.0;
  // clip in a frame centred on S so areas do not lose digits to large coordinates
  const Point c = pr.S.center();
  const Rect S(pr.S.x0 - c.x, pr.S.y0 - c.y, pr.S.w, pr.S.h);
  double s = 0.0;
  for (int qt = 0; qt < 4; ++qt) {
    ConvexPolygon P = RT.quadrant(qt).polygon();
    for (auto& v : P.v) v = v - c;
    const Rect bb = *PolygonIndicator(P).support();
    for (int qs = 0; qs < 4; ++qs) {
      const Rect Sq = S.quadrant(qs);
      if (!boxes_overlap(bb, Sq)) continue;
      s += quad_sign(qt) * quad_sign(qs) * clip_rect(P, Sq).area();
    }
  }
  return s / std::sqrt(pr.S.area() * pr.T.area());
}

bool segment_meets_polygon(Point a, Point b, const ConvexPolygon& P, double tol) {
  double t0 = 0.0, t1 = 1.0;
  const size_t m = P.v.size();
  const Point d = b - a;
  for (size_t i = 0; i < m; ++i) {
    const Point e0 = P.v[i], e1 = P.v[(i + 1) % m];
    const Point e = e1 - e0;
    const double len = std::hypot(e.x, e.y);
    // inside: cross(e, p - e0) >= -tol*len
    const double f0 = cross(e, a - e0) + tol * len;
    const double fd = cross(e, d);
    if (fd == 0.0) {
      if (f0 < 0) return false;
      continue;
    }
    const double t = -f0 / fd;
    if (fd > 0) t0 = std::max(t0, t);
    else t1 = std::min(t1, t);
    if (t0 > t1) return false;
  }
  return true;
}

IntersectionCase classify(const WaveletPair& pr) {
  const RotatedRect RT{pr.T, pr.theta};
  const auto st = segments_and_tops(RT);
  const double tol = tol_for(pr);
  bool mv = false, mh = false;
  for (const auto& sg : st.segments) {
    if (!segment_meets_rect(sg, pr.S, tol)) continue;
    (sg.kind == SegmentKind::Vertical ? mv : mh) = true;
  }
  if (!mv && !mh) return IntersectionCase::NoIntersection;
  for (const auto& t : st.tops)
    if (pr.S.contains(t, tol)) return IntersectionCase::TopsInS;
  if (mv && !mh) return IntersectionCase::VerticalOnly;
  if (mh && !mv) return IntersectionCase::HorizontalOnly;
  const ConvexPolygon P = RT.polygon();
  const Rect& S = pr.S;
  const bool vb = segment_meets_polygon({S.x0, S.y0}, {S.x0, S.y1()}, P, tol) ||
                  segment_meets_polygon({S.x1(), S.y0}, {S.x1(), S.y1()}, P, tol);
  if (!vb) return IntersectionCase::BothNoVerticalBoundary;
  const bool hb = segment_meets_polygon({S.x0, S.y0}, {S.x1(), S.y0}, P, tol) ||
                  segment_meets_polygon({S.x0, S.y1()}, {S.x1(), S.y1()}, P, tol);
  if (!hb) return IntersectionCase::BothNoHorizontalBoundary;
  return IntersectionCase::Unclassified;
}

namespace {

// true when the decomposition runs over x-strips (vertical boundaries of S miss φ(T))
bool use_x_strips(const WaveletPair& pr, const ConvexPolygon& P) {
  const Rect& S = pr.S;
  const double tol = tol_for(pr);
  const bool vb = segment_meets_polygon({S.x0, S.y0}, {S.x0, S.y1()}, P, tol) ||
                  segment_meets_polygon({S.x1(), S.y0}, {S.x1(), S.y1()}, P, tol);
  if (!vb) return true;
  const bool hb = segment_meets_polygon({S.x0, S.y0}, {S.x1(), S.y0}, P, tol) ||
                  segment_meets_polygon({S.x0, S.y1()}, {S.x1(), S.y1()}, P, tol);
  return hb;
}

// part of the closed segment inside S, as parameters; false when it misses S
bool clip_segment(Point a, Point b, const Rect& r, Point& pa, Point& pb) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - r.x0, r.x1() - a.x, a.y - r.y0, r.y1() - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0) return false;
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0) t0 = std::max(t0, t);
    else t1 = std::min(t1, t);
  }
  if (t0 > t1) return false;
  pa = a + t0 * (b - a);
  pb = a + t1 * (b - a);
  return true;
}

// Σ_j |⟨h_S, h_{φ(l_j)}⟩| restricted to the strip of S where φ(l_j) crosses
double delta_kind(const WaveletPair& pr, SegmentKind kind) {
  const RotatedRect RT{pr.T, pr.theta};
  const ConvexPolygon P = RT.polygon();
  const auto st = segments_and_tops(RT);
  const bool xs = use_x_strips(pr, P);
  const Rect& S = pr.S;
  const Point n = kind == SegmentKind::Vertical ? Point{std::cos(pr.theta), std::sin(pr.theta)}
                                                : Point{-std::sin(pr.theta), std::cos(pr.theta)};
  double s = 0.0;
  for (const auto& sg : st.segments) {
    if (sg.kind != kind) continue;
    Point pa, pb;
    if (!clip_segment(sg.a, sg.b, S, pa, pb)) continue;
    const double lo = xs ? std::min(pa.x, pb.x) : std::min(pa.y, pb.y);
    const double hi = xs ? std::max(pa.x, pb.x) : std::max(pa.y, pb.y);
    if (!(hi > lo)) continue;
    // strip ∩ φ(T) as a polygon; the line offset is dot(n, point on segment)
    ConvexPolygon Q = xs ? clip_convex(clip_convex(P, {1, 0}, hi), {-1, 0}, -lo)
                         : clip_convex(clip_convex(P, {0, 1}, hi), {0, -1}, -lo);
    s += std::abs(split_pairing(S, Q, n, dot(n, sg.a)));
  }
  return s / std::sqrt(S.area() * pr.T.area());
}

}  // namespace

double delta_v(const WaveletPair& pr) { return delta_kind(pr, SegmentKind::Vertical); }
double delta_h(const WaveletPair& pr) { return delta_kind(pr, SegmentKind::Horizontal); }

double vertical_bound(const WaveletPair& pr) {
  if (near_axis_angle(pr.theta)) return kInf;
  const double t = std::abs(std::tan(pr.theta)), ct = 1.0 / t;
  const Rect& S = pr.S;
  return 3.0 * std::min(S.h * S.h * t, S.w * S.w * ct) / std::sqrt(S.area() * pr.T.area());
}

double horizontal_bound(const WaveletPair& pr) {
  if (near_axis_angle(pr.theta)) return kInf;
  const double t = std::abs(std::tan(pr.theta)), ct = 1.0 / t;
  const Rect& S = pr.S;
  return 3.0 * std::min(S.w * S.w * t, S.h * S.h * ct) / std::sqrt(S.area() * pr.T.area());
}

double prop1_bound(const WaveletPair& pr, IntersectionCase c) {
  switch (c) {
    case IntersectionCase::NoIntersection: return 0.0;
    case IntersectionCase::VerticalOnly: return vertical_bound(pr);
    case IntersectionCase::HorizontalOnly: return horizontal_bound(pr);
    case IntersectionCase::BothNoVerticalBoundary:
    case IntersectionCase::BothNoHorizontalBoundary:
      return vertical_bound(pr) + horizontal_bound(pr);
    case IntersectionCase::TopsInS:
    case IntersectionCase::Unclassified:
      return std::min(pr.T.area(), pr.S.area()) / std::sqrt(pr.S.area() * pr.T.area());
  }
  return kInf;
}

double prop1_bound(const WaveletPair& pr) { return prop1_bound(pr, classify(pr)); }

}  // namespace rbmo
