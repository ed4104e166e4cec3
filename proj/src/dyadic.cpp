#include "rbmo/dyadic.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rbmo {

namespace {

using i128 = __int128;

Rational make(i128 n, i128 d) {
  if (d == 0) throw std::domain_error("Rational: zero denominator");
  if (d < 0) n = -n, d = -d;
  i128 a = n < 0 ? -n : n, b = d;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) n /= a, d /= a;
  const i128 lim = i128(INT64_MAX);
  if (n > lim || n < -lim || d > lim) throw std::overflow_error("Rational: overflow");
  Rational r;
  r.num = static_cast<std::int64_t>(n);
  r.den = static_cast<std::int64_t>(d);
  return r;
}

Rational g_delta(1, 3);

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) { *this = make(n, d); }

std::int64_t Rational::floor() const {
  std::int64_t q = num / den;
  if ((num % den != 0) && (num < 0)) --q;
  return q;
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(i128(a.num) * b.den + i128(b.num) * a.den, i128(a.den) * b.den);
}
Rational operator-(const Rational& a, const Rational& b) {
  return make(i128(a.num) * b.den - i128(b.num) * a.den, i128(a.den) * b.den);
}
Rational operator*(const Rational& a, const Rational& b) {
  return make(i128(a.num) * b.num, i128(a.den) * b.den);
}
Rational operator/(const Rational& a, const Rational& b) {
  return make(i128(a.num) * b.den, i128(a.den) * b.num);
}
bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
bool operator<(const Rational& a, const Rational& b) {
  return i128(a.num) * b.den < i128(b.num) * a.den;
}

Rational pow2(int k) {
  if (k > 62 || k < -62) throw std::overflow_error("pow2: scale out of range");
  return k >= 0 ? Rational(std::int64_t(1) << k) : Rational(1, std::int64_t(1) << (-k));
}

const Rational& grid_delta() { return g_delta; }

void set_grid_delta(const Rational& d) {
  if (!(Rational(0) < d) || !(d < Rational(1, 2)))
    throw std::invalid_argument("grid delta must lie in (0, 1/2)");
  g_delta = d;
}

Rational shift_of(int k, const Rational& delta) {
  if (k <= 0) return delta;
  const int e = (k % 2 == 0) ? k : k + 1;
  return delta + (pow2(e) - Rational(1)) / Rational(3);
}

std::string GridId::name() const {
  return std::string(sx ? "d" : "0") + "," + (sy ? "d" : "0");
}

Rational DyadicInterval::left() const {
  Rational base = pow2(k) * Rational(j);
  return shifted ? shift_of(k, grid_delta()) + base : base;
}

double DyadicInterval::lo() const {
  const double base = std::ldexp(double(j), k);
  return shifted ? shift_of(k, grid_delta()).to_double() + base : base;
}

double DyadicInterval::len() const { return std::ldexp(1.0, k); }

std::pair<DyadicInterval, DyadicInterval> DyadicInterval::children() const {
  const Rational off = left() - (shifted ? shift_of(k - 1, grid_delta()) : Rational(0));
  const Rational idx = off / pow2(k - 1);
  if (!idx.is_integer()) throw std::logic_error("dyadic nesting violated in children()");
  DyadicInterval l{shifted, k - 1, idx.num};
  DyadicInterval r{shifted, k - 1, idx.num + 1};
  return {l, r};
}

DyadicInterval DyadicInterval::parent() const {
  const Rational off = left() - (shifted ? shift_of(k + 1, grid_delta()) : Rational(0));
  return {shifted, k + 1, (off / pow2(k + 1)).floor()};
}

bool DyadicInterval::contains(const DyadicInterval& o) const {
  if (o.shifted != shifted || o.k > k) return false;
  const Rational a = left(), b = o.left();
  return a <= b && b + pow2(o.k) <= a + pow2(k);
}

DyadicInterval interval_at(bool shifted, int k, double x) {
  const double s = shifted ? shift_of(k, grid_delta()).to_double() : 0.0;
  return {shifted, k, static_cast<std::int64_t>(std::floor(std::ldexp(x - s, -k)))};
}

double DyadicRectangle::eccentricity() const { return std::ldexp(1.0, iy.k - ix.k); }

IntervalCover cover_interval(double a, double b) {
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("cover_interval: empty or unbounded interval");
  const int k0 = static_cast<int>(std::ceil(std::log2(b - a)));
  IntervalCover best{{}, INFINITY};
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int k = k0; k <= k0 + 2; ++k) {
    for (bool sh : {false, true}) {
      DyadicInterval I = interval_at(sh, k, a);
      if (I.lo() > a || I.hi() < b) continue;
      const double c = std::max(mid - I.lo(), I.hi() - mid) / half;
      if (c < best.c) best = {I, c};
    }
  }
  if (!std::isfinite(best.c)) throw std::logic_error("cover_interval: no cover found");
  return best;
}

RectangleCover cover_rectangle(const Rect& r) {
  auto cx = cover_interval(r.x0, r.x1());
  auto cy = cover_interval(r.y0, r.y1());
  return {{cx.I0, cy.I0}, cx.c, cy.c};
}

std::pair<std::int64_t, std::int64_t> index_range(bool shifted, int k, double a, double b) {
  const double s = shifted ? shift_of(k, grid_delta()).to_double() : 0.0;
  const auto lo = static_cast<std::int64_t>(std::floor(std::ldexp(a - s, -k)));
  const auto hi = static_cast<std::int64_t>(std::ceil(std::ldexp(b - s, -k))) - 1;
  return {lo, hi};
}

std::vector<DyadicRectangle> enumerate(const Rect& window, GridId grid, int k1, int k2) {
  if (std::abs(k1) > 30 || std::abs(k2) > 30)
    throw std::invalid_argument("enumerate: scale outside |k| <= 30");
  auto [x0, x1] = index_range(grid.sx, k1, window.x0, window.x1());
  auto [y0, y1] = index_range(grid.sy, k2, window.y0, window.y1());
  const double count = double(x1 - x0 + 1) * double(y1 - y0 + 1);
  if (count > 1e8) throw std::length_error("enumerate: more than 1e8 rectangles");
  std::vector<DyadicRectangle> out;
  out.reserve(static_cast<size_t>(count));
  for (auto i = x0; i <= x1; ++i)
    for (auto j = y0; j <= y1; ++j) out.push_back({{grid.sx, k1, i}, {grid.sy, k2, j}});
  return out;
}

}  // namespace rbmo
