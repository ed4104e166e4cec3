#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rbmo/geometry.hpp"

namespace rbmo {

// Exact rational with 64-bit parts; intermediate products use 128 bits.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_integer() const { return den == 1; }
  std::int64_t floor() const;
  std::string str() const;
};

Rational operator+(const Rational& a, const Rational& b);
Rational operator-(const Rational& a, const Rational& b);
Rational operator*(const Rational& a, const Rational& b);
Rational operator/(const Rational& a, const Rational& b);
bool operator==(const Rational& a, const Rational& b);
bool operator<(const Rational& a, const Rational& b);
inline bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
Rational pow2(int k);

// Global grid parameter δ ∈ (0, 1/2); set once before use.
const Rational& grid_delta();
void set_grid_delta(const Rational& d);

Rational shift_of(int k, const Rational& delta);

struct GridId {
  bool sx = false;  // x-axis uses the shifted grid
  bool sy = false;
  int index() const { return int(sx) + 2 * int(sy); }
  static GridId from_index(int i) { return {bool(i & 1), bool(i & 2)}; }
  std::string name() const;
  bool operator==(const GridId&) const = default;
};

struct DyadicInterval {
  bool shifted = false;
  int k = 0;
  std::int64_t j = 0;

  Rational left() const;
  double lo() const;
  double len() const;
  double hi() const { return lo() + len(); }
  std::pair<DyadicInterval, DyadicInterval> children() const;
  DyadicInterval parent() const;
  bool contains(const DyadicInterval& o) const;  // exact, same grid required
  auto operator<=>(const DyadicInterval&) const = default;
};

// interval of scale k in the given grid containing x
DyadicInterval interval_at(bool shifted, int k, double x);

struct DyadicRectangle {
  DyadicInterval ix, iy;

  GridId grid() const { return {ix.shifted, iy.shifted}; }
  Rect realize() const { return Rect(ix.lo(), iy.lo(), ix.len(), iy.len()); }
  double area() const { return ix.len() * iy.len(); }
  double eccentricity() const;
  bool contains(const DyadicRectangle& o) const { return ix.contains(o.ix) && iy.contains(o.iy); }
  auto operator<=>(const DyadicRectangle&) const = default;
};

struct IntervalCover {
  DyadicInterval I0;
  double c;  // smallest concentric dilation factor with I0 ⊆ c·I
};

IntervalCover cover_interval(double a, double b);

struct RectangleCover {
  DyadicRectangle R0;
  double cx, cy;
};

RectangleCover cover_rectangle(const Rect& r);

// grid rectangles of dims 2^k1 x 2^k2 meeting the window in positive area
std::vector<DyadicRectangle> enumerate(const Rect& window, GridId grid, int k1, int k2);
// index range helper: [jlo, jhi] of scale-k intervals meeting (a, b)
std::pair<std::int64_t, std::int64_t> index_range(bool shifted, int k, double a, double b);

}  // namespace rbmo
